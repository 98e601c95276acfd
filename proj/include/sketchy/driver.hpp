#ifndef SKETCHY_DRIVER_HPP_
#define SKETCHY_DRIVER_HPP_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketchy/baselines.hpp"
#include "sketchy/diagnostics.hpp"
#include "sketchy/sketch.hpp"
#include "sketchy/synth.hpp"

namespace sketchy {

/// Any of the seven approximation methods behind one name.
struct MethodSpec {
  enum class Kind { sketchy_core, sketchy_full, baseline };
  Kind kind = Kind::sketchy_core;
  BaselineMethod baseline = BaselineMethod::hmt;

  std::string name() const;
};

MethodSpec method_from_string(const std::string& name);
std::vector<MethodSpec> all_methods();

/// Seed for trial t derived from the base seed; stable across platforms.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial);

struct TrialStats {
  double mean = 0;
  double stddev = 0;  // sample standard deviation
  std::vector<double> values;
};

/// Aggregated result of running one method `trials` times.
struct RunOutcome {
  std::string method;
  SketchConfig config;  // resolved; echoes what actually ran
  int trials = 0;
  TrialStats err;
  PhaseTimes mean_times;
  std::optional<Scalar> scree_at_r;
  std::optional<IncoherenceStats> incoherence;
  std::optional<TheoryReport> bounds;
};

/// Runs the method with per-trial derived seeds and blockwise error
/// evaluation. `with_diagnostics` additionally computes the exact scree
/// value, incoherence statistics, and theory bounds (full SVD; desk scale).
RunOutcome run_trials(const Matrix& A, const MethodSpec& method,
                      const SketchConfig& config, int trials,
                      bool with_diagnostics = false);

/// Serialize a number, mapping infinities to the string "inf" / "-inf" so
/// reports stay valid JSON.
nlohmann::json json_number(Scalar value);

nlohmann::json to_json(const SketchConfig& config);
nlohmann::json to_json(const PhaseTimes& times);
nlohmann::json to_json(const IncoherenceStats& stats);
nlohmann::json to_json(const TheoryReport& report);
nlohmann::json to_json(const RunOutcome& outcome);

nlohmann::json to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const nlohmann::json& j);

/// Full "approx" report: schema_version, input echo, one run.
nlohmann::json approx_report(const RunOutcome& outcome, Index rows, Index cols,
                             const std::string& source);

/// Full "compare" report plus the aligned CSV table (one row per method/p).
nlohmann::json compare_report(const std::vector<RunOutcome>& runs, Index rows,
                              Index cols, const std::string& source);
std::string compare_csv(const std::vector<RunOutcome>& runs);

}  // namespace sketchy

#endif  // SKETCHY_DRIVER_HPP_
