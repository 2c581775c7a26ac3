#include "ratmm/cli/documents.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>

#include "ratmm/errors.hpp"

namespace ratmm::cli {

namespace {

json index_array(const std::vector<Index>& v) {
  json out = json::array();
  for (Index i : v) out.push_back(i);
  return out;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::parse_error, std::string("missing field '") + key + "'");
  return j.at(key);
}

const char* verdict_name(Verdict v) { return to_string(v); }

}  // namespace

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double to_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorKind::parse_error, "expected a number, got " + j.dump());
}

json complex_array(const VectorXc<double>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(json::array({number(v(i).real()), number(v(i).imag())}));
  return out;
}

VectorXc<double> complex_vector(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::parse_error, "expected an array of [re, im] pairs");
  VectorXc<double> out(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& c = j[i];
    if (c.is_array() && c.size() == 2) {
      out(static_cast<Index>(i)) = {to_number(c[0]), to_number(c[1])};
    } else if (c.is_number()) {
      out(static_cast<Index>(i)) = {c.get<double>(), 0.0};
    } else {
      throw Error(ErrorKind::parse_error, "bad complex entry " + c.dump());
    }
  }
  return out;
}

json approximant_to_json(const RationalApproximant<double>& r) {
  json j;
  j["n1"] = r.n1();
  j["n2"] = r.n2();
  j["basis"] = to_string(r.basis().kind());
  j["a"] = complex_array(r.a());
  j["b"] = complex_array(r.b());
  if (r.basis().kind() == BasisKind::orthonormal) {
    const auto& rec = *r.basis().recurrence();
    json h = json::array();
    for (Index i = 0; i < rec.hessenberg.rows(); ++i) h.push_back(complex_array(rec.hessenberg.row(i).transpose()));
    json w = json::array();
    for (Index i = 0; i < rec.weights.size(); ++i) w.push_back(number(rec.weights(i)));
    j["recurrence"] = {{"constant", number(rec.constant)},
                       {"nodes", complex_array(rec.nodes)},
                       {"weights", w},
                       {"hessenberg", h}};
  }
  return j;
}

RationalApproximant<double> approximant_from_json(const json& j) {
  const int n1 = field(j, "n1").get<int>();
  const int n2 = field(j, "n2").get<int>();
  const std::string kind = j.value("basis", "monomial");
  VectorXc<double> a = complex_vector(field(j, "a"));
  VectorXc<double> b = complex_vector(field(j, "b"));
  if (kind == "monomial") return RationalApproximant<double>(std::move(a), std::move(b), BasisDescriptor<double>::monomial(n1, n2));
  if (kind != "orthonormal") throw Error(ErrorKind::parse_error, "unknown basis '" + kind + "'");
  const json& rj = field(j, "recurrence");
  auto rec = std::make_shared<OrthonormalRecurrence<double>>();
  rec->constant = to_number(field(rj, "constant"));
  rec->nodes = complex_vector(field(rj, "nodes"));
  const json& wj = field(rj, "weights");
  rec->weights.resize(static_cast<Index>(wj.size()));
  for (std::size_t i = 0; i < wj.size(); ++i) rec->weights(static_cast<Index>(i)) = to_number(wj[i]);
  const json& hj = field(rj, "hessenberg");
  const Index rows = static_cast<Index>(hj.size());
  const Index cols = rows > 0 ? rows - 1 : 0;
  rec->hessenberg.resize(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const VectorXc<double> row = complex_vector(hj[static_cast<std::size_t>(i)]);
    if (row.size() != cols) throw Error(ErrorKind::parse_error, "ragged hessenberg matrix");
    rec->hessenberg.row(i) = row.transpose();
  }
  return RationalApproximant<double>(std::move(a), std::move(b), BasisDescriptor<double>::from_recurrence(rec, n1, n2));
}

json certificate_to_json(const CertificateReport<double>& rep) {
  json j;
  j["global"] = rep.global;
  j["zeta"] = number(rep.zeta);
  j["gap"] = rep.gap ? number(*rep.gap) : json(nullptr);
  j["eta_bracket"] = json::array({number(rep.eta_low), number(rep.eta_high)});
  j["kolmogorov_residual"] = number(rep.kolmogorov_residual);
  j["kolmogorov_unique"] = rep.kolmogorov_unique;
  j["ruttan_min_eig"] = number(rep.ruttan_min_eig);
  j["ruttan_norm"] = number(rep.ruttan_norm);
  j["second_order_min"] = rep.second_order_min ? number(*rep.second_order_min) : json(nullptr);
  j["directions_tested"] = rep.directions_tested;
  j["verdicts"] = {{"kolmogorov", verdict_name(rep.kolmogorov)},
                   {"ruttan", verdict_name(rep.ruttan)},
                   {"strong_duality", verdict_name(rep.strong_duality)},
                   {"second_order", verdict_name(rep.second_order)}};
  j["extreme_count"] = rep.extreme_count;
  j["extreme_indices"] = index_array(rep.extreme);
  j["minimal_case"] = rep.minimal_case;
  j["exact_fit"] = rep.exact_fit;
  j["defect"] = rep.defect;
  j["zero_numerator"] = rep.zero_numerator;
  j["removable_nodes"] = index_array(rep.removable);
  json om = json::array();
  for (Index i = 0; i < rep.omega.size(); ++i) om.push_back(number(rep.omega(i)));
  j["omega"] = om;
  j["omega_source"] = rep.omega_source;
  j["notes"] = rep.notes;
  j["assumptions"] = json::array({"the candidate is treated as irreducible; defect and removable nodes are reported",
                                  "a nonnegative second-order probe is evidence only, a negative one refutes"});
  return j;
}

json result_to_json(const SolveSummary& s) {
  const LawsonOutcome<double>& o = s.outcome;
  json j;
  j["n1"] = o.approximant.n1();
  j["n2"] = o.approximant.n2();
  j["approximant"] = approximant_to_json(s.monomial);
  j["approximant_orthonormal"] = approximant_to_json(s.orthonormal);
  j["zeta"] = number(o.zeta);
  j["d"] = number(o.d_value);
  j["sqrt_d"] = number(std::sqrt(o.d_value));
  j["gap"] = number(o.gap);
  j["iterations"] = o.iterations;
  j["best_iteration"] = o.best_iteration;
  j["converged"] = o.converged;
  json wv = json::array();
  for (Index i = 0; i < o.final_w.size(); ++i) wv.push_back(number(o.final_w.w()(i)));
  j["weights"] = {{"indices", index_array(o.final_w.active())}, {"values", wv}};
  json warns = json::array();
  for (const auto& w : o.warnings) warns.push_back({{"kind", to_string(w.kind)}, {"iteration", w.iteration}, {"message", w.message}});
  j["warnings"] = warns;
  j["config"] = {{"beta", number(s.config.beta)},
                 {"eps_r", number(s.config.eps_r)},
                 {"eps_w", number(s.config.eps_w)},
                 {"maxit", s.config.maxit},
                 {"basis", to_string(s.config.basis)},
                 {"refresh_orthonormal", s.config.refresh_orthonormal}};
  j["certificate"] = certificate_to_json(s.certificate);
  return j;
}

CandidateDocument candidate_from_json(const json& j) {
  CandidateDocument doc;
  const bool is_result = j.is_object() && j.contains("approximant");
  doc.approximant = approximant_from_json(is_result ? j.at("approximant") : j);
  if (is_result && j.contains("weights")) {
    const json& wj = j.at("weights");
    const json& idx = field(wj, "indices");
    const json& val = field(wj, "values");
    if (idx.size() != val.size()) throw Error(ErrorKind::parse_error, "weights.indices and weights.values differ in length");
    std::vector<Index> active;
    VectorXr<double> w(static_cast<Index>(val.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      active.push_back(idx[i].get<Index>());
      w(static_cast<Index>(i)) = to_number(val[i]);
    }
    if (!active.empty()) doc.weights = WeightVector<double>(w, std::move(active));
  }
  if (is_result && j.contains("d")) doc.d_value = to_number(j.at("d"));
  return doc;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, path + ": " + e.what());
  }
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace ratmm::cli
