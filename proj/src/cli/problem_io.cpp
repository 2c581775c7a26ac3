#include "ratmm/cli/problem_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ratmm/errors.hpp"

namespace ratmm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, long line) {
  if (s.empty()) throw Error(ErrorKind::parse_error, "empty field on line " + std::to_string(line));
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw Error(ErrorKind::parse_error, "not a number '" + s + "' on line " + std::to_string(line));
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::parse_error, "non-finite value on line " + std::to_string(line));
  }
  return v;
}

}  // namespace

SampleSet<double> ProblemFile::samples() const {
  if (nodes.size() != values.size()) throw Error(ErrorKind::dimension_mismatch, "nodes and values differ in length");
  VectorXc<double> x(static_cast<Index>(nodes.size()));
  VectorXc<double> f(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    x(static_cast<Index>(i)) = nodes[i];
    f(static_cast<Index>(i)) = values[i];
  }
  return SampleSet<double>(std::move(x), std::move(f));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ProblemFile read_problem(std::istream& in) {
  ProblemFile pf;
  std::string line;
  long lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) pf.metadata.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
      continue;
    }
    const auto cells = split(t, ',');
    if (!header) {
      if (cells.size() != 4 || cells[0] != "re_x" || cells[1] != "im_x" || cells[2] != "re_f" || cells[3] != "im_f") {
        throw Error(ErrorKind::parse_error, "expected header re_x,im_x,re_f,im_f on line " + std::to_string(lineno));
      }
      header = true;
      continue;
    }
    if (cells.size() != 4) {
      throw Error(ErrorKind::parse_error, "expected 4 columns on line " + std::to_string(lineno));
    }
    pf.nodes.emplace_back(parse_double(cells[0], lineno), parse_double(cells[1], lineno));
    pf.values.emplace_back(parse_double(cells[2], lineno), parse_double(cells[3], lineno));
  }
  if (!header) throw Error(ErrorKind::parse_error, "missing header line");
  return pf;
}

ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
  return read_problem(in);
}

void write_problem(std::ostream& out, const ProblemFile& pf) {
  if (pf.nodes.size() != pf.values.size()) throw Error(ErrorKind::dimension_mismatch, "nodes and values differ in length");
  for (const auto& [k, v] : pf.metadata) out << "# " << k << '=' << v << '\n';
  out << "re_x,im_x,re_f,im_f\n";
  for (std::size_t i = 0; i < pf.nodes.size(); ++i) {
    out << format_double(pf.nodes[i].real()) << ',' << format_double(pf.nodes[i].imag()) << ','
        << format_double(pf.values[i].real()) << ',' << format_double(pf.values[i].imag()) << '\n';
  }
}

void write_problem_file(const std::string& path, const ProblemFile& pf) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io_error, "cannot write " + path);
  write_problem(out, pf);
  if (!out) throw Error(ErrorKind::io_error, "write failed for " + path);
}

std::vector<std::string> registry_names() { return {"x^3+x", "x^2", "x", "exp", "1/x", "(3x+1)/(x-2)", "abs"}; }

std::complex<double> registry_eval(const std::string& name, std::complex<double> x) {
  if (name == "x^3+x") return x * x * x + x;
  if (name == "x^2") return x * x;
  if (name == "x") return x;
  if (name == "exp") return std::exp(x);
  if (name == "1/x") return 1.0 / x;
  if (name == "(3x+1)/(x-2)") return (3.0 * x + 1.0) / (x - 2.0);
  if (name == "abs") return std::abs(x);
  throw Error(ErrorKind::invalid_argument, "unknown function '" + name + "'");
}

ProblemFile sample_circle(long m, double radius, const std::string& function) {
  if (m < 1) throw Error(ErrorKind::bad_count, "circle needs m >= 1");
  if (!(radius > 0) || !std::isfinite(radius)) throw Error(ErrorKind::invalid_argument, "radius must be positive");
  ProblemFile pf;
  pf.metadata = {{"shape", "circle"}, {"m", std::to_string(m)}, {"radius", format_double(radius)}, {"function", function}};
  for (long j = 0; j < m; ++j) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    const std::complex<double> x = std::polar(radius, t);
    pf.nodes.push_back(x);
    pf.values.push_back(registry_eval(function, x));
  }
  return pf;
}

ProblemFile sample_interval(long m, double a, double b, const std::string& function) {
  if (m < 2) throw Error(ErrorKind::bad_count, "interval needs m >= 2");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw Error(ErrorKind::invalid_argument, "need a < b");
  ProblemFile pf;
  pf.metadata = {{"shape", "interval"}, {"m", std::to_string(m)}, {"a", format_double(a)}, {"b", format_double(b)},
                 {"function", function}};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double n = static_cast<double>(m - 1);
  for (long j = 0; j < m; ++j) {
    // Symmetric form of -cos(pi j / n): exact endpoints and an exact midpoint.
    const double s = std::sin(std::numbers::pi * (2.0 * static_cast<double>(j) - n) / (2.0 * n));
    double x = mid + half * s;
    if (j == 0) x = a;
    if (j == m - 1) x = b;
    pf.nodes.emplace_back(x, 0.0);
    pf.values.push_back(registry_eval(function, {x, 0.0}));
  }
  return pf;
}

void load_values(ProblemFile& pf, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
  std::vector<std::complex<double>> vals;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split(t, ',');
    if (cells.size() == 2 && cells[0] == "re_f") continue;
    if (cells.size() != 2) throw Error(ErrorKind::parse_error, "expected re,im on line " + std::to_string(lineno));
    vals.emplace_back(parse_double(cells[0], lineno), parse_double(cells[1], lineno));
  }
  if (vals.size() != pf.nodes.size()) {
    throw Error(ErrorKind::dimension_mismatch, "value file has " + std::to_string(vals.size()) + " rows for " +
                                                   std::to_string(pf.nodes.size()) + " nodes");
  }
  pf.values = std::move(vals);
  for (auto& [k, v] : pf.metadata) {
    if (k == "function") v = "file:" + path;
  }
}

}  // namespace ratmm::cli
