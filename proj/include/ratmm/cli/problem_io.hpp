#ifndef RATMM_CLI_PROBLEM_IO_HPP
#define RATMM_CLI_PROBLEM_IO_HPP

#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ratmm/approximant.hpp"

namespace ratmm::cli {

/// Node/value table. On disk: optional "# key=value" lines, the header
/// re_x,im_x,re_f,im_f, then one row per node.
struct ProblemFile {
  std::vector<std::complex<double>> nodes;
  std::vector<std::complex<double>> values;
  std::vector<std::pair<std::string, std::string>> metadata;

  SampleSet<double> samples() const;
};

ProblemFile read_problem(std::istream& in);
ProblemFile read_problem_file(const std::string& path);
void write_problem(std::ostream& out, const ProblemFile& problem);
void write_problem_file(const std::string& path, const ProblemFile& problem);

/// %.17g; strtod of the result reproduces the value bit-exactly.
std::string format_double(double v);

/// Value functions available to `sample`.
std::vector<std::string> registry_names();
std::complex<double> registry_eval(const std::string& name, std::complex<double> x);

ProblemFile sample_circle(long m, double radius, const std::string& function);
ProblemFile sample_interval(long m, double a, double b, const std::string& function);
/// Replaces the values of `problem` by a two-column (re, im) file, one row per node.
void load_values(ProblemFile& problem, const std::string& path);

}  // namespace ratmm::cli

#endif  // RATMM_CLI_PROBLEM_IO_HPP
