#ifndef SKETCHY_TESTS_SCHEMA_CHECK_HPP_
#define SKETCHY_TESTS_SCHEMA_CHECK_HPP_

// Minimal structural validator for the subset of JSON Schema used by
// schemas/report.schema.json: type (string or list), required, properties,
// items, enum, and local $ref into #/definitions.

#include <string>
#include <vector>

#include <json.hpp>

namespace schema_check {

using nlohmann::json;

inline bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer() ||
                                value.is_number_unsigned();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

inline const json& resolve_ref(const json& root, const std::string& ref) {
  const std::string prefix = "#/definitions/";
  if (ref.rfind(prefix, 0) != 0)
    throw std::runtime_error("unsupported $ref: " + ref);
  return root.at("definitions").at(ref.substr(prefix.size()));
}

inline void validate(const json& root, const json& schema, const json& value,
                     const std::string& where, std::vector<std::string>& errs) {
  if (schema.contains("$ref")) {
    validate(root, resolve_ref(root, schema["$ref"].get<std::string>()), value,
             where, errs);
    return;
  }
  if (schema.contains("type")) {
    const json& type = schema["type"];
    bool ok = false;
    if (type.is_string()) {
      ok = type_matches(value, type.get<std::string>());
    } else {
      for (const auto& t : type)
        ok = ok || type_matches(value, t.get<std::string>());
    }
    if (!ok) {
      errs.push_back(where + ": type mismatch, got " +
                     std::string(value.type_name()));
      return;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& allowed : schema["enum"]) ok = ok || (allowed == value);
    if (!ok) errs.push_back(where + ": value not in enum");
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          errs.push_back(where + ": missing required key '" +
                         key.get<std::string>() + "'");
    if (schema.contains("properties"))
      for (const auto& [key, sub] : schema["properties"].items())
        if (value.contains(key))
          validate(root, sub, value[key], where + "." + key, errs);
  }
  if (value.is_array() && schema.contains("items")) {
    int i = 0;
    for (const auto& element : value)
      validate(root, schema["items"], element,
               where + "[" + std::to_string(i++) + "]", errs);
  }
}

/// Validates `value` against the named definition; returns the error list.
inline std::vector<std::string> validate_against(const json& schema_root,
                                                 const std::string& definition,
                                                 const json& value) {
  std::vector<std::string> errs;
  validate(schema_root, schema_root.at("definitions").at(definition), value,
           "$", errs);
  return errs;
}

}  // namespace schema_check

#endif  // SKETCHY_TESTS_SCHEMA_CHECK_HPP_
