#include "model_io.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "sessionlink/errors.h"

namespace sessionlink::model_io {
namespace {

void Expect(std::istream& in, std::string_view token) {
  std::string word;
  if (!(in >> word) || word != token) {
    throw ParseError("expected '" + std::string(token) + "', found '" + word +
                         "'",
                     0);
  }
}

long ReadCount(std::istream& in) {
  long n = -1;
  if (!(in >> n) || n < 0) throw ParseError("bad dimension in model file", 0);
  return n;
}

}  // namespace

std::string HexDouble(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", value);
  return buf;
}

double ParseHexDouble(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty() ||
      (errno == ERANGE && std::abs(value) > 1.0)) {
    throw ParseError("bad number '" + text + "' in model file", 0);
  }
  return value;
}

void WriteHeader(std::ostream& out, std::string_view kind, int version) {
  out << "sessionlink-" << kind << ' ' << version << '\n';
}

void ExpectHeader(std::istream& in, std::string_view kind, int version) {
  Expect(in, "sessionlink-" + std::string(kind));
  long v = -1;
  if (!(in >> v) || v != version) {
    throw ParseError("unsupported " + std::string(kind) + " file version", 0);
  }
}

void WriteMatrix(std::ostream& out, std::string_view name,
                 const Eigen::MatrixXd& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << (c ? " " : "") << HexDouble(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd ReadMatrix(std::istream& in, std::string_view name) {
  Expect(in, "matrix");
  Expect(in, name);
  const long rows = ReadCount(in);
  const long cols = ReadCount(in);
  Eigen::MatrixXd m(rows, cols);
  std::string token;
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      if (!(in >> token)) throw ParseError("truncated model file", 0);
      m(r, c) = ParseHexDouble(token);
    }
  }
  return m;
}

Eigen::RowVectorXd ReadRow(std::istream& in, std::string_view name) {
  const Eigen::MatrixXd m = ReadMatrix(in, name);
  if (m.rows() != 1) {
    throw ParseError("'" + std::string(name) + "' must be a single row", 0);
  }
  return m.row(0);
}

void WriteValues(std::ostream& out, std::string_view name,
                 const std::vector<double>& values) {
  out << "values " << name << ' ' << values.size() << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << (i ? " " : "") << HexDouble(values[i]);
  }
  out << '\n';
}

std::vector<double> ReadValues(std::istream& in, std::string_view name) {
  Expect(in, "values");
  Expect(in, name);
  const long n = ReadCount(in);
  std::vector<double> values(n);
  std::string token;
  for (long i = 0; i < n; ++i) {
    if (!(in >> token)) throw ParseError("truncated model file", 0);
    values[i] = ParseHexDouble(token);
  }
  return values;
}

}  // namespace sessionlink::model_io
