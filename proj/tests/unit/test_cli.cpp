#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "ratmm/cli/commands.hpp"
#include "ratmm/cli/documents.hpp"
#include "ratmm/cli/problem_io.hpp"

using namespace ratmm;
using namespace ratmm::cli;
using cd = std::complex<double>;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("ratmm_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ratmm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("sample_circle: roots of unity") {
  const auto pf = sample_circle(4, 1.0, "x");
  REQUIRE(pf.nodes.size() == 4);
  const cd expect[4] = {1, cd(0, 1), -1, cd(0, -1)};
  for (int j = 0; j < 4; ++j) CHECK(std::abs(pf.nodes[static_cast<std::size_t>(j)] - expect[j]) <= 1e-15);
}

TEST_CASE("sample_circle: 256 unit-modulus nodes with x^3+x") {
  const auto pf = sample_circle(256, 1.0, "x^3+x");
  REQUIRE(pf.nodes.size() == 256);
  for (std::size_t j = 0; j < 256; ++j) {
    const cd x = pf.nodes[j];
    CHECK(std::abs(std::abs(x) - 1.0) <= 1e-15);
    CHECK(pf.values[j] == x * x * x + x);
  }
}

TEST_CASE("sample_interval: Lobatto points") {
  const auto pf = sample_interval(3, -1.0, 1.0, "x");
  REQUIRE(pf.nodes.size() == 3);
  CHECK(pf.nodes[0] == cd(-1));
  CHECK(pf.nodes[1] == cd(0));
  CHECK(pf.nodes[2] == cd(1));
  const auto big = sample_interval(1001, -1.0, 1.0, "x^2");
  for (std::size_t j = 0; j < 1001; ++j) {
    CHECK(big.nodes[j].real() == doctest::Approx(-std::cos(std::numbers::pi * j / 1000.0)).epsilon(1e-15).scale(1));
    CHECK(big.nodes[j].real() == -big.nodes[1000 - j].real());
  }
}

TEST_CASE("sample errors") {
  CHECK_THROWS_AS(sample_circle(0, 1.0, "x"), Error);
  CHECK_THROWS_AS(sample_interval(1, -1.0, 1.0, "x"), Error);
  CHECK_THROWS_AS(sample_circle(4, 1.0, "sin"), Error);
  try {
    sample_circle(0, 1.0, "x");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::bad_count);
  }
}

TEST_CASE("problem file round trip is bit exact") {
  testgen::Gen g(61);
  ProblemFile pf;
  pf.metadata = {{"source", "random"}};
  for (int j = 0; j < 200; ++j) {
    pf.nodes.push_back(g.complex_gauss() * std::pow(10.0, g.uniform(-300, 300)));
    pf.values.push_back(g.complex_gauss() * std::pow(10.0, g.uniform(-300, 300)));
  }
  pf.nodes.push_back({5e-324, -0.0});
  pf.values.push_back({1.7976931348623157e308, 0.1});
  std::stringstream ss;
  write_problem(ss, pf);
  const auto back = read_problem(ss);
  REQUIRE(back.nodes.size() == pf.nodes.size());
  for (std::size_t j = 0; j < pf.nodes.size(); ++j) {
    CHECK(same_bits(back.nodes[j].real(), pf.nodes[j].real()));
    CHECK(same_bits(back.nodes[j].imag(), pf.nodes[j].imag()));
    CHECK(same_bits(back.values[j].real(), pf.values[j].real()));
    CHECK(same_bits(back.values[j].imag(), pf.values[j].imag()));
  }
  CHECK(back.metadata == pf.metadata);
}

TEST_CASE("problem file parse errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_problem(in);
  };
  CHECK_THROWS_AS(parse("1,2,3,4\n"), Error);
  CHECK_THROWS_AS(parse("re_x,im_x,re_f,im_f\n1,2,3\n"), Error);
  CHECK_THROWS_AS(parse("re_x,im_x,re_f,im_f\n1,2,3,abc\n"), Error);
  CHECK_THROWS_AS(parse("re_x,im_x,re_f,im_f\n1,2,3,inf\n"), Error);
  CHECK_THROWS_AS(parse("re_x,im_x,re_f,im_f\n1,2,3,4x\n"), Error);
  CHECK_THROWS_AS(parse(""), Error);
  const auto ok = parse("# a=b\n\nre_x,im_x,re_f,im_f\n 1 , 2 ,3,4\n");
  CHECK(ok.nodes.size() == 1);
  CHECK(ok.nodes[0] == cd(1, 2));
}

TEST_CASE("approximant documents round trip") {
  testgen::Gen g(62);
  const Eigen::VectorXcd x = g.distinct_nodes(12, 1.0, 0.05);
  const RationalApproximant<double> r(g.complex_vector(3), g.complex_vector(2), BasisDescriptor<double>::monomial(2, 1));
  const auto ro = r.in_basis(BasisDescriptor<double>::orthonormal(x, Eigen::VectorXd::Ones(12), 2, 1));
  for (const auto& a : {r, ro}) {
    const json j = json::parse(approximant_to_json(a).dump());
    const auto back = approximant_from_json(j);
    CHECK(back.basis().kind() == a.basis().kind());
    for (Index i = 0; i < a.a().size(); ++i) CHECK(back.a()(i) == a.a()(i));
    for (Index i = 0; i < a.b().size(); ++i) CHECK(back.b()(i) == a.b()(i));
    const auto v0 = evaluate_rational(a, x).values;
    const auto v1 = evaluate_rational(back, x).values;
    CHECK((v0 - v1).norm() == 0.0);
  }
  CHECK_THROWS_AS(approximant_from_json(json{{"n1", 0}}), Error);
  CHECK_THROWS_AS(approximant_from_json(json{{"n1", 0}, {"n2", 0}, {"a", {{1, 0}}}, {"b", {{1, 0}}}, {"basis", "bad"}}),
                  Error);
}

TEST_CASE("non-finite numbers are written as strings") {
  CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(number(std::nan("")) == "nan");
  CHECK(std::isinf(to_number(json("-inf"))));
  CHECK(to_number(json(0.1)) == 0.1);
  CHECK_THROWS_AS(to_number(json("x")), Error);
}

TEST_CASE("cli: sample writes a problem file") {
  TempDir tmp;
  const auto r = run({"sample", "circle", "--m", "4", "--function", "x^3+x", "-o", tmp / "c.csv"});
  CHECK(r.code == exit_ok);
  const auto pf = read_problem_file(tmp / "c.csv");
  CHECK(pf.nodes.size() == 4);
  CHECK(run({"sample", "interval", "--m", "3"}).out.find("re_x,im_x,re_f,im_f") != std::string::npos);
}

TEST_CASE("cli: sample errors exit 1") {
  const auto shape = run({"sample", "square", "--m", "4"});
  CHECK(shape.code == exit_error);
  CHECK(shape.err.find("UnknownShape") != std::string::npos);
  const auto count = run({"sample", "circle", "--m", "0"});
  CHECK(count.code == exit_error);
  CHECK(count.err.find("BadCount") != std::string::npos);
  CHECK(run({"sample"}).code == exit_error);
  CHECK(run({"frobnicate"}).code == exit_error);
  CHECK(run({"--help"}).code == exit_ok);
}

TEST_CASE("cli: sample file shape validates and passes through") {
  TempDir tmp;
  {
    std::ofstream f(tmp / "in.csv");
    f << "re_x,im_x,re_f,im_f\n0,0,1,0\n1,0,2,0\n";
  }
  const auto r = run({"sample", "file", "--input", tmp / "in.csv", "-o", tmp / "out.csv"});
  CHECK(r.code == exit_ok);
  CHECK(read_problem_file(tmp / "out.csv").values[1] == cd(2));
  CHECK(run({"sample", "file", "--input", tmp / "in.csv", "--m", "3"}).code == exit_error);
  {
    std::ofstream f(tmp / "dup.csv");
    f << "re_x,im_x,re_f,im_f\n0,0,1,0\n0,0,2,0\n";
  }
  CHECK(run({"sample", "file", "--input", tmp / "dup.csv"}).code == exit_error);
}

TEST_CASE("cli: sample with a value file") {
  TempDir tmp;
  {
    std::ofstream f(tmp / "v.csv");
    f << "re_f,im_f\n1,0\n2,0\n3,0\n";
  }
  CHECK(run({"sample", "circle", "--m", "3", "--values", tmp / "v.csv", "-o", tmp / "p.csv"}).code == exit_ok);
  CHECK(read_problem_file(tmp / "p.csv").values[2] == cd(3));
  CHECK(run({"sample", "circle", "--m", "4", "--values", tmp / "v.csv"}).code == exit_error);
}

TEST_CASE("cli: solve and certify the circle problem") {
  TempDir tmp;
  write_problem_file(tmp / "c.csv", sample_circle(256, 1.0, "x^3+x"));
  const auto s = run({"solve", tmp / "c.csv", "--n1", "0", "--n2", "1", "--tol", "1e-12", "--maxit", "1000000",
                      "--certify-second-order", "16", "--history", tmp / "h.csv", "-o", tmp / "r.json"});
  CHECK(s.code == exit_ok);
  const json doc = read_json_file(tmp / "r.json");
  CHECK(std::abs(doc["zeta"].get<double>() - 1.76023) < 1e-3);
  CHECK(doc["converged"].get<bool>());
  CHECK(doc["approximant"]["basis"] == "monomial");
  CHECK(doc["approximant_orthonormal"]["basis"] == "orthonormal");
  CHECK(doc["certificate"]["verdicts"]["ruttan"] == "pass");
  CHECK(doc["certificate"]["verdicts"]["second_order"] == "pass");
  CHECK(doc["weights"]["indices"].size() == doc["weights"]["values"].size());
  CHECK(slurp(tmp / "h.csv").rfind("k,d,sqrt_d,zeta,gap,active_count\n", 0) == 0);

  const auto mono = approximant_from_json(doc["approximant"]);
  const auto orth = approximant_from_json(doc["approximant_orthonormal"]);
  const auto samples = read_problem_file(tmp / "c.csv").samples();
  const auto v0 = evaluate_rational(mono, samples.nodes()).values;
  const auto v1 = evaluate_rational(orth, samples.nodes()).values;
  CHECK((v0 - v1).cwiseAbs().maxCoeff() <= 1e-12);

  const auto c = run({"certify", tmp / "c.csv", tmp / "r.json", "-o", tmp / "cert.json"});
  CHECK(c.code == exit_ok);
  CHECK(read_json_file(tmp / "cert.json")["global"] == "certified");

  {
    std::ofstream f(tmp / "bare.json");
    f << doc["approximant"].dump();
  }
  CHECK(run({"certify", tmp / "c.csv", tmp / "bare.json"}).code == exit_ok);
}

TEST_CASE("cli: solve exit codes") {
  TempDir tmp;
  write_problem_file(tmp / "c.csv", sample_circle(64, 1.0, "x^3+x"));
  CHECK(run({"solve", tmp / "c.csv", "--n1", "0", "--n2", "1", "--maxit", "3", "-o", tmp / "r.json"}).code ==
        exit_not_converged);
  CHECK(read_json_file(tmp / "r.json")["converged"] == false);

  write_problem_file(tmp / "rat.csv", sample_circle(16, 0.5, "(3x+1)/(x-2)"));
  const auto exact = run({"solve", tmp / "rat.csv", "--n1", "1", "--n2", "1", "-o", tmp / "e.json"});
  CHECK(exact.code == exit_ok);
  CHECK(read_json_file(tmp / "e.json")["gap"].get<double>() <= 1e-10);

  write_problem_file(tmp / "small.csv", sample_circle(3, 1.0, "x"));
  const auto few = run({"solve", tmp / "small.csv", "--n1", "1", "--n2", "1"});
  CHECK(few.code == exit_error);
  CHECK(few.err.find("too few nodes") != std::string::npos);

  CHECK(run({"solve", tmp / "missing.csv", "--n1", "0", "--n2", "0"}).code == exit_error);
  CHECK(run({"solve", tmp / "c.csv", "--n1", "0"}).code == exit_error);
  CHECK(run({"solve", tmp / "c.csv", "--n1", "0", "--n2", "1", "--basis", "chebyshev"}).code == exit_error);
  CHECK(run({"solve", tmp / "c.csv", "--n1", "1", "--n2", "1", "--basis", "orthonormal", "--refresh-basis", "--maxit",
             "50", "-o", tmp / "o.json"})
            .code != exit_error);
  CHECK(read_json_file(tmp / "o.json")["config"]["basis"] == "orthonormal");
}

TEST_CASE("cli: certify refutes the disk candidate") {
  TempDir tmp;
  // Four-digit coefficients; the widened band holds the three angles.
  const cd a(0.2993, -0.068);
  const cd z0 = std::polar(1.1194, 1.1490);
  ProblemFile pf;
  for (double phi : {1.1335, 3.3449, 6.0125}) pf.nodes.push_back(std::polar(1.0, phi));
  for (int j = 0; j < 24; ++j) pf.nodes.push_back(std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / 24));
  for (const cd& x : pf.nodes) pf.values.push_back(x * x * x + x);
  write_problem_file(tmp / "disk.csv", pf);
  const RationalApproximant<double> r(Eigen::VectorXcd::Constant(1, a), (Eigen::VectorXcd(2) << -z0, 1).finished(),
                                      BasisDescriptor<double>::monomial(0, 1));
  {
    std::ofstream f(tmp / "disk.json");
    f << approximant_to_json(r).dump();
  }
  const auto c = run({"certify", tmp / "disk.csv", tmp / "disk.json", "--extreme-tol", "1e-3", "-o", tmp / "cert.json"});
  CHECK(c.code == exit_certificate_failed);
  const json rep = read_json_file(tmp / "cert.json");
  CHECK(rep["verdicts"]["ruttan"] == "fail");
  CHECK(rep["extreme_count"] == 3);
  CHECK(rep["minimal_case"] == true);
  CHECK(rep["global"] == "refuted");
}

TEST_CASE("cli: certify input errors") {
  TempDir tmp;
  write_problem_file(tmp / "c.csv", sample_circle(8, 1.0, "x"));
  {
    std::ofstream f(tmp / "bad.json");
    f << "{ not json";
  }
  CHECK(run({"certify", tmp / "c.csv", tmp / "bad.json"}).code == exit_error);
  {
    std::ofstream f(tmp / "dims.json");
    f << R"({"n1": 1, "n2": 0, "basis": "monomial", "a": [[1, 0]], "b": [[1, 0]]})";
  }
  const auto dims = run({"certify", tmp / "c.csv", tmp / "dims.json"});
  CHECK(dims.code == exit_error);
  CHECK(dims.err.find("DimensionMismatch") != std::string::npos);
  {
    std::ofstream f(tmp / "w.json");
    f << R"({"approximant": {"n1": 0, "n2": 0, "a": [[0, 0]], "b": [[1, 0]]}, "weights": {"indices": [0, 99], "values": [0.5, 0.5]}})";
  }
  CHECK(run({"certify", tmp / "c.csv", tmp / "w.json"}).code == exit_error);
}
