#include "wpg/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "wpg/error.hpp"

namespace wpg {
namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line split into tokens; throws at end of input.
  std::vector<std::string> next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return tokens;
    }
    throw Error(ErrorKind::kFormat, "line " + std::to_string(line_no_ + 1) + ": missing " + what);
  }

  bool has_more() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::kFormat, "line " + std::to_string(line_no_) + ": " + msg);
  }

  int line() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

double parse_double(LineReader& r, const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    r.fail("not a number: '" + token + "'");
  }
  if (used != token.size()) r.fail("not a number: '" + token + "'");
  if (!std::isfinite(v)) r.fail("non-finite value: '" + token + "'");
  return v;
}

long parse_dim(LineReader& r, const std::string& token) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(token, &used);
  } catch (const std::exception&) {
    r.fail("bad dimension: '" + token + "'");
  }
  if (used != token.size() || v < 1) r.fail("bad dimension: '" + token + "'");
  return v;
}

std::pair<long, long> read_header(LineReader& r) {
  const auto h = r.next("header");
  if (h.size() != 2) r.fail("header must hold two integers");
  return {parse_dim(r, h[0]), parse_dim(r, h[1])};
}

Eigen::VectorXd read_row(LineReader& r, long n, const char* what) {
  const auto tokens = r.next(what);
  if (static_cast<long>(tokens.size()) != n) {
    r.fail(std::string(what) + " has " + std::to_string(tokens.size()) + " values, expected " + std::to_string(n));
  }
  Eigen::VectorXd v(n);
  for (long j = 0; j < n; ++j) v(j) = parse_double(r, tokens[j]);
  return v;
}

Eigen::MatrixXd read_rows(LineReader& r, long rows, long cols) {
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i) m.row(i) = read_row(r, cols, "matrix row").transpose();
  return m;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

}  // namespace

SolverInput read_solver_input(std::istream& in) {
  LineReader r(in);
  const auto [d, n] = read_header(r);
  SolverInput out;
  out.x = read_rows(r, d, n);
  out.seeds.r = read_row(r, n, "r line");
  for (long j = 0; j < n; ++j) {
    if (out.seeds.r(j) != 0.0 && out.seeds.r(j) != 1.0) r.fail("r entries must be 0 or 1");
  }
  out.seeds.gamma = read_row(r, n, "Gamma line");
  for (long j = 0; j < n; ++j) {
    if (out.seeds.gamma(j) != 0.0 && out.seeds.gamma(j) != 1.0) r.fail("Gamma entries must be 0 or 1");
  }
  if (r.has_more()) r.fail("unexpected trailing content");
  return out;
}

SolverInput read_solver_input(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_solver_input(in);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kFormat) throw;
    throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
}

namespace {

// Shortest decimal form that reads back to the same double.
void write_rows(std::ostream& out, const Eigen::MatrixXd& m) {
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof buf, m(i, j));
      if (j > 0) out << ' ';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace

void write_solver_input(std::ostream& out, const SolverInput& input) {
  out << input.x.rows() << ' ' << input.x.cols() << '\n';
  write_rows(out, input.x);
  write_rows(out, input.seeds.r.transpose());
  write_rows(out, input.seeds.gamma.transpose());
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  LineReader r(in);
  const auto [rows, cols] = read_header(r);
  Eigen::MatrixXd m = read_rows(r, rows, cols);
  if (r.has_more()) r.fail("unexpected trailing content");
  return m;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  write_rows(out, m);
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_matrix(out, m);
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

}  // namespace wpg
