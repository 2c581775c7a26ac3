#include "ratmm/cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ratmm/cli/documents.hpp"
#include "ratmm/cli/problem_io.hpp"
#include "ratmm/ratmm.hpp"

namespace ratmm::cli {

namespace {

struct SampleArgs {
  std::string shape;
  long m = 0;
  double radius = 1.0;
  double a = -1.0;
  double b = 1.0;
  std::string function = "x^3+x";
  std::string values;
  std::string input;
  std::string output;
};

struct SolveArgs {
  std::string input;
  int n1 = 0;
  int n2 = 0;
  LawsonConfig config;
  std::string basis = "monomial";
  int second_order = 0;
  std::string history;
  std::string output;
};

struct CertifyArgs {
  std::string input;
  std::string approximant;
  int second_order = 0;
  double extreme_tol = 1e-8;
  double psd_tol = 1e-10;
  std::string output;
};

template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::io_error, "cannot write " + path);
  fn(f);
  if (!f) throw Error(ErrorKind::io_error, "write failed for " + path);
}

int cmd_sample(const SampleArgs& args, std::ostream& out) {
  ProblemFile pf;
  if (args.shape == "circle") {
    pf = sample_circle(args.m, args.radius, args.values.empty() ? args.function : "x");
    if (!args.values.empty()) load_values(pf, args.values);
  } else if (args.shape == "interval") {
    pf = sample_interval(args.m, args.a, args.b, args.values.empty() ? args.function : "x");
    if (!args.values.empty()) load_values(pf, args.values);
  } else if (args.shape == "file") {
    if (args.input.empty()) throw Error(ErrorKind::invalid_argument, "file shape needs --input");
    pf = read_problem_file(args.input);
    if (args.m != 0 && args.m != static_cast<long>(pf.nodes.size())) {
      throw Error(ErrorKind::bad_count, "file has " + std::to_string(pf.nodes.size()) + " rows, --m says " +
                                            std::to_string(args.m));
    }
    if (pf.nodes.empty()) throw Error(ErrorKind::bad_count, "file has no rows");
    (void)pf.samples();
  } else {
    throw Error(ErrorKind::unknown_shape, "unknown shape '" + args.shape + "' (circle, interval, file)");
  }
  with_output(args.output, out, [&](std::ostream& os) { write_problem(os, pf); });
  return exit_ok;
}

int cmd_solve(SolveArgs args, std::ostream& out) {
  const ProblemFile pf = read_problem_file(args.input);
  const SampleSet<double> samples = pf.samples();
  args.config.basis = args.basis == "orthonormal" ? BasisKind::orthonormal : BasisKind::monomial;

  SolveSummary s;
  s.config = args.config;
  s.outcome = d_lawson(samples, args.n1, args.n2, args.config);
  const RationalApproximant<double>& r = s.outcome.approximant;
  if (r.basis().kind() == BasisKind::orthonormal) {
    s.orthonormal = r;
    s.monomial = r.to_monomial();
  } else {
    s.monomial = r;
    const auto target = BasisDescriptor<double>::orthonormal(samples.nodes(), VectorXr<double>::Ones(samples.size()),
                                                             args.n1, args.n2);
    s.orthonormal = r.in_basis(target);
  }
  CertifyOptions co;
  co.second_order_directions = args.second_order;
  s.certificate = certify<double>(samples, r, s.outcome.final_w, s.outcome.d_value, co);

  if (!args.history.empty()) {
    std::ofstream h(args.history);
    if (!h) throw Error(ErrorKind::io_error, "cannot write " + args.history);
    write_history_csv(h, s.outcome.history);
  }
  with_output(args.output, out, [&](std::ostream& os) { write_json(os, result_to_json(s)); });
  return s.outcome.converged ? exit_ok : exit_not_converged;
}

int cmd_certify(const CertifyArgs& args, std::ostream& out) {
  const ProblemFile pf = read_problem_file(args.input);
  const SampleSet<double> samples = pf.samples();
  const CandidateDocument doc = candidate_from_json(read_json_file(args.approximant));
  if (doc.weights) {
    for (Index j : doc.weights->active()) {
      if (j < 0 || j >= samples.size()) throw Error(ErrorKind::dimension_mismatch, "weight index outside the node set");
    }
  }
  CertifyOptions co;
  co.delta = args.extreme_tol;
  co.psd_tol = args.psd_tol;
  co.second_order_directions = args.second_order;
  const CertificateReport<double> rep = certify<double>(samples, doc.approximant, doc.weights, doc.d_value, co);
  with_output(args.output, out, [&](std::ostream& os) { write_json(os, certificate_to_json(rep)); });
  return rep.all_pass() ? exit_ok : exit_certificate_failed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rational minimax approximation by the d-Lawson iteration, with optimality certificates", "ratmm"};
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Generate a node/value table");
  sample->add_option("shape", sa.shape, "circle, interval or file")->required();
  sample->add_option("--m", sa.m, "Number of nodes");
  sample->add_option("--radius", sa.radius, "Circle radius");
  sample->add_option("--a", sa.a, "Interval left end");
  sample->add_option("--b", sa.b, "Interval right end");
  sample->add_option("--function", sa.function, "Value function (x^3+x, x^2, x, exp, 1/x, (3x+1)/(x-2), abs)");
  sample->add_option("--values", sa.values, "Two-column re,im file replacing the function values");
  sample->add_option("--input", sa.input, "Problem file for the file shape");
  sample->add_option("--output,-o", sa.output, "Output path (default stdout)");

  SolveArgs so;
  auto* solve = app.add_subcommand("solve", "Run the d-Lawson iteration and certify the result");
  solve->add_option("input", so.input, "Problem CSV")->required();
  solve->add_option("--n1", so.n1, "Numerator degree")->required()->check(CLI::NonNegativeNumber);
  solve->add_option("--n2", so.n2, "Denominator degree")->required()->check(CLI::NonNegativeNumber);
  solve->add_option("--beta", so.config.beta, "Lawson exponent")->check(CLI::PositiveNumber);
  solve->add_option("--tol", so.config.eps_r, "Relative duality-gap tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--filter-tol", so.config.eps_w, "Weight filtering threshold")->check(CLI::NonNegativeNumber);
  solve->add_option("--maxit", so.config.maxit, "Iteration cap")->check(CLI::PositiveNumber);
  solve->add_option("--basis", so.basis, "monomial or orthonormal")->check(CLI::IsMember({"monomial", "orthonormal"}));
  solve->add_flag("--refresh-basis", so.config.refresh_orthonormal, "Rebuild the orthonormal basis every iteration");
  solve->add_option("--certify-second-order", so.second_order, "Directions for the second-order probe")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--history", so.history, "Write the iteration history CSV here");
  solve->add_option("--output,-o", so.output, "Result document path (default stdout)");

  CertifyArgs ca;
  auto* cert = app.add_subcommand("certify", "Certify a candidate approximant on a node set");
  cert->add_option("input", ca.input, "Problem CSV")->required();
  cert->add_option("approximant", ca.approximant, "Approximant or result JSON")->required();
  cert->add_option("--certify-second-order", ca.second_order, "Directions for the second-order probe")
      ->check(CLI::NonNegativeNumber);
  cert->add_option("--extreme-tol", ca.extreme_tol, "Relative width of the extreme band")->check(CLI::Range(0.0, 0.999999));
  cert->add_option("--psd-tol", ca.psd_tol, "Relative PSD tolerance")->check(CLI::NonNegativeNumber);
  cert->add_option("--output,-o", ca.output, "Report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion& e) {
    out << "ratmm\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  }

  try {
    if (*sample) return cmd_sample(sa, out);
    if (*solve) return cmd_solve(so, out);
    if (*cert) return cmd_certify(ca, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  } catch (const nlohmann::json::exception& e) {
    err << "error: ParseError: " << e.what() << '\n';
    return exit_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_error;
}

}  // namespace ratmm::cli
