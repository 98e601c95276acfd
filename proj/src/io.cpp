#include "sketchy/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace sketchy {

namespace {

constexpr char kMagic[4] = {'S', 'K', 'C', 'M'};
constexpr std::uint32_t kVersion = 1;

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

FileFormat format_from_extension(const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "mtx" || ext == "mm") return FileFormat::matrix_market;
  if (ext == "csv") return FileFormat::csv;
  if (ext == "skcm" || ext == "bin") return FileFormat::binary;
  return FileFormat::auto_detect;
}

double parse_double(const std::string& path, std::size_t line,
                    std::size_t column, std::string_view token) {
  double value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    parse_fail(path, line,
               "non-numeric value '" + std::string(token) + "' in column " +
                   std::to_string(column));
  return value;
}

// --- SKCM binary -----------------------------------------------------------

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = (v >> (8 * i)) & 0xFF;
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = (v >> (8 * i)) & 0xFF;
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(bytes[i]) << (8 * i);
  return v;
}

Matrix load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open for reading");

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    parse_fail(path, "bad magic, expected \"SKCM\"");
  const std::uint32_t version = read_u32(in);
  if (!in || version != kVersion)
    parse_fail(path, "unsupported version " + std::to_string(version) +
                         ", expected " + std::to_string(kVersion));
  const std::uint64_t rows = read_u64(in);
  const std::uint64_t cols = read_u64(in);
  if (!in) parse_fail(path, "truncated header");
  if (rows == 0 || cols == 0) parse_fail(path, "zero dimension in header");
  constexpr std::uint64_t kMaxEntries = 1ULL << 31;  // 16 GB of doubles
  if (rows > kMaxEntries || cols > kMaxEntries ||
      rows * cols > kMaxEntries)
    parse_fail(path, "header dimensions " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " exceed the supported size");

  const std::uint64_t count = rows * cols;
  std::vector<double> payload(count);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  const auto got = static_cast<std::uint64_t>(in.gcount());
  if (got != count * sizeof(double))
    parse_fail(path, "truncated payload: expected " +
                         std::to_string(count * sizeof(double)) +
                         " bytes, found " + std::to_string(got));
  in.peek();
  if (!in.eof())
    parse_fail(path, "trailing bytes after payload");

  // Payload is row-major; storage here is column-major.
  Matrix A(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j)
      A(static_cast<Index>(i), static_cast<Index>(j)) = payload[i * cols + j];
  return A;
}

void save_binary(const std::string& path, const Matrix& A) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_u64(out, static_cast<std::uint64_t>(A.rows()));
  write_u64(out, static_cast<std::uint64_t>(A.cols()));
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor buffer = A;
  out.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(sizeof(double) * buffer.size()));
  if (!out) throw ParseError(path + ": write failed");
}

// --- CSV --------------------------------------------------------------------

Matrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0, column = 1;
    while (true) {
      const auto comma = line.find(',', start);
      const auto len =
          (comma == std::string::npos ? line.size() : comma) - start;
      std::string_view token(line.data() + start, len);
      row.push_back(parse_double(path, lineno, column, token));
      if (comma == std::string::npos) break;
      start = comma + 1;
      ++column;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      parse_fail(path, lineno,
                 "expected " + std::to_string(rows.front().size()) +
                     " columns, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_fail(path, "empty CSV file");

  Matrix A(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return A;
}

void save_csv(const std::string& path, const Matrix& A) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ParseError(path + ": cannot open for writing");
  char buf[64];
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", A(i, j));
      out << buf << (j + 1 < A.cols() ? "," : "");
    }
    out << '\n';
  }
  if (!out) throw ParseError(path + ": write failed");
}

// --- Matrix Market ----------------------------------------------------------

Matrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");

  std::string header;
  std::size_t lineno = 1;
  if (!std::getline(in, header) || header.rfind("%%MatrixMarket", 0) != 0)
    parse_fail(path, 1, "missing %%MatrixMarket header");
  std::istringstream hs(header);
  std::string tag, object, layout, field, symmetry;
  hs >> tag >> object >> layout >> field >> symmetry;
  if (object != "matrix")
    parse_fail(path, 1, "unsupported object '" + object + "'");
  if (layout != "array" && layout != "coordinate")
    parse_fail(path, 1, "unsupported layout '" + layout + "'");
  if (field != "real" && field != "integer" && field != "double")
    parse_fail(path, 1, "unsupported field '" + field + "'");
  if (symmetry != "general")
    parse_fail(path, 1, "unsupported symmetry '" + symmetry + "'");

  auto next_data_line = [&](std::string& out_line) {
    while (std::getline(in, out_line)) {
      ++lineno;
      if (!out_line.empty() && out_line.back() == '\r') out_line.pop_back();
      const auto first = out_line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (out_line[first] == '%') continue;
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_data_line(line)) parse_fail(path, lineno, "missing size line");

  std::istringstream sizes(line);
  long long rows = 0, cols = 0, nnz = 0;
  if (layout == "array") {
    if (!(sizes >> rows >> cols) || rows < 1 || cols < 1)
      parse_fail(path, lineno, "bad size line '" + line + "'");
    Matrix A(static_cast<Index>(rows), static_cast<Index>(cols));
    // Array payload is listed column by column.
    for (Index j = 0; j < A.cols(); ++j)
      for (Index i = 0; i < A.rows(); ++i) {
        if (!next_data_line(line))
          parse_fail(path, lineno,
                     "expected " + std::to_string(rows * cols) +
                         " entries, file ended early");
        A(i, j) = parse_double(path, lineno, 1, line);
      }
    return A;
  }

  if (!(sizes >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0)
    parse_fail(path, lineno, "bad size line '" + line + "'");
  Matrix A = Matrix::Zero(static_cast<Index>(rows), static_cast<Index>(cols));
  for (long long e = 0; e < nnz; ++e) {
    if (!next_data_line(line))
      parse_fail(path, lineno,
                 "expected " + std::to_string(nnz) +
                     " entries, file ended early");
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0;
    if (!(entry >> i >> j >> v))
      parse_fail(path, lineno, "bad coordinate entry '" + line + "'");
    if (i < 1 || i > rows || j < 1 || j > cols)
      parse_fail(path, lineno, "coordinate (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ") out of bounds");
    A(static_cast<Index>(i - 1), static_cast<Index>(j - 1)) += v;
  }
  return A;
}

void save_matrix_market(const std::string& path, const Matrix& A) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << A.rows() << ' ' << A.cols() << '\n';
  char buf[64];
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", A(i, j));
      out << buf << '\n';
    }
  if (!out) throw ParseError(path + ": write failed");
}

FileFormat sniff(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open for reading");
  char head[14] = {};
  in.read(head, sizeof(head));
  if (in.gcount() >= 4 && std::memcmp(head, kMagic, 4) == 0)
    return FileFormat::binary;
  if (in.gcount() >= 14 && std::memcmp(head, "%%MatrixMarket", 14) == 0)
    return FileFormat::matrix_market;
  return FileFormat::csv;
}

}  // namespace

FileFormat file_format_from_string(const std::string& name) {
  if (name == "auto") return FileFormat::auto_detect;
  if (name == "mtx" || name == "matrix-market" || name == "matrixmarket")
    return FileFormat::matrix_market;
  if (name == "csv") return FileFormat::csv;
  if (name == "binary" || name == "skcm") return FileFormat::binary;
  throw std::invalid_argument("unknown file format: " + name);
}

Matrix load_matrix(const std::string& path, FileFormat format) {
  if (format == FileFormat::auto_detect) {
    format = format_from_extension(path);
    if (format == FileFormat::auto_detect) format = sniff(path);
  }
  Matrix A;
  switch (format) {
    case FileFormat::matrix_market: A = load_matrix_market(path); break;
    case FileFormat::csv: A = load_csv(path); break;
    case FileFormat::binary: A = load_binary(path); break;
    case FileFormat::auto_detect: parse_fail(path, "cannot detect format");
  }
  if (!A.allFinite())
    parse_fail(path, "matrix contains non-finite values");
  return A;
}

void save_matrix(const std::string& path, const Matrix& A,
                 FileFormat format) {
  if (A.size() == 0) throw std::invalid_argument("save_matrix: empty matrix");
  if (format == FileFormat::auto_detect) {
    format = format_from_extension(path);
    if (format == FileFormat::auto_detect)
      throw std::invalid_argument(
          "save_matrix: cannot infer format from extension of " + path);
  }
  switch (format) {
    case FileFormat::matrix_market: save_matrix_market(path, A); break;
    case FileFormat::csv: save_csv(path, A); break;
    case FileFormat::binary: save_binary(path, A); break;
    case FileFormat::auto_detect: break;
  }
}

}  // namespace sketchy
