#ifndef SKETCHY_IO_HPP_
#define SKETCHY_IO_HPP_

#include <stdexcept>
#include <string>

#include "sketchy/types.hpp"

namespace sketchy {

enum class FileFormat { auto_detect, matrix_market, csv, binary };

FileFormat file_format_from_string(const std::string& name);

/// Raised on malformed input with the offending location in what().
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a dense matrix. auto_detect dispatches on the extension
/// (.mtx/.mm, .csv, .skcm/.bin) and falls back to content sniffing.
/// Matrix Market array and coordinate files are promoted to dense.
Matrix load_matrix(const std::string& path,
                   FileFormat format = FileFormat::auto_detect);

/// Writes a dense matrix; CSV cells carry 17 significant digits so text
/// round-trips reproduce the value exactly.
void save_matrix(const std::string& path, const Matrix& A,
                 FileFormat format = FileFormat::auto_detect);

}  // namespace sketchy

#endif  // SKETCHY_IO_HPP_
