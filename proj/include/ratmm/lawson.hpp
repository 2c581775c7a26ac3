#ifndef RATMM_LAWSON_HPP
#define RATMM_LAWSON_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "ratmm/approximant.hpp"
#include "ratmm/basis.hpp"
#include "ratmm/dual.hpp"
#include "ratmm/errors.hpp"
#include "ratmm/weights.hpp"

namespace ratmm {

struct LawsonConfig {
  double beta = 1.0;
  double eps_r = 1e-10;
  double eps_w = 1e-14;
  int maxit = 500;
  BasisKind basis = BasisKind::monomial;
  bool refresh_orthonormal = false;
  double exact_tol = 1e-12;  // zeta <= exact_tol * max|f| counts as an exact fit
};

template <class Real = double>
struct LawsonRecord {
  int k = 0;
  Real d{0};
  Real sqrt_d{0};
  Real zeta{0};
  Real gap{0};
  Index active_count = 0;
};

enum class LawsonWarningKind { non_monotone, support_loss, all_zero_errors };

inline const char* to_string(LawsonWarningKind k) {
  switch (k) {
    case LawsonWarningKind::non_monotone: return "NonMonotoneWarning";
    case LawsonWarningKind::support_loss: return "SupportLossWarning";
    case LawsonWarningKind::all_zero_errors: return "AllZeroErrors";
  }
  return "Warning";
}

struct LawsonWarning {
  LawsonWarningKind kind;
  int iteration;
  std::string message;
};

template <class Real = double>
struct LawsonOutcome {
  RationalApproximant<Real> approximant;
  WeightVector<Real> final_w;
  Real d_value{0};
  Real zeta{0};
  Real gap{0};
  int iterations = 0;
  int best_iteration = 0;
  bool converged = false;
  std::vector<LawsonRecord<Real>> history;
  std::vector<LawsonWarning> warnings;
  Real max_residual_p{0};  // over every inner solve
  Real max_residual_q{0};
};

/// Drops entries below eps_w and renormalises.
template <class Real>
WeightVector<Real> filter_weights(const WeightVector<Real>& w, Real eps_w, Index min_nodes = 1) {
  VectorXr<Real> kept(w.size());
  std::vector<Index> active;
  Index n = 0;
  for (Index k = 0; k < w.size(); ++k) {
    if (w.w()(k) >= eps_w && w.w()(k) > Real(0)) {
      kept(n++) = w.w()(k);
      active.push_back(w.active()[static_cast<std::size_t>(k)]);
    }
  }
  if (n < std::max<Index>(min_nodes, 1)) {
    throw Error(ErrorKind::too_few_nodes, "filtering would leave " + std::to_string(n) + " active nodes");
  }
  if (n == w.size()) return w;
  return WeightVector<Real>(kept.head(n), std::move(active));
}

/// w'_j = w_j |e_j|^beta / sum_i w_i |e_i|^beta, `errors` aligned with w.active().
template <class Real>
WeightVector<Real> update_weights(const WeightVector<Real>& w, const VectorXc<Real>& errors, Real beta) {
  if (errors.size() != w.size()) throw Error(ErrorKind::dimension_mismatch, "errors and weights differ in length");
  if (!(beta > Real(0))) throw Error(ErrorKind::invalid_argument, "beta must be positive");
  const VectorXr<Real> mag2 = errors.cwiseAbs2();
  const Real top = mag2.maxCoeff();
  if (!(top > Real(0))) throw Error(ErrorKind::all_zero_errors, "every error vanishes");
  // Scaling by the largest error avoids overflow in |e|^beta.
  VectorXr<Real> next(w.size());
  if (beta == Real(2)) {
    next = w.w().cwiseProduct(mag2 / top);
  } else if (beta == Real(1)) {
    next = w.w().cwiseProduct((mag2 / top).cwiseSqrt());
  } else {
    for (Index k = 0; k < w.size(); ++k) next(k) = w.w()(k) * std::pow(mag2(k) / top, beta / Real(2));
  }
  if (!(next.sum() > Real(0))) throw Error(ErrorKind::all_zero_errors, "weighted errors vanish");
  return WeightVector<Real>(next, w.active());
}

namespace detail {

template <class Real>
BasisDescriptor<Real> lawson_basis(const SampleSet<Real>& samples, const WeightVector<Real>& w, int n1, int n2,
                                   BasisKind kind) {
  if (kind == BasisKind::monomial) return BasisDescriptor<Real>::monomial(n1, n2);
  VectorXc<Real> x(w.size());
  for (Index k = 0; k < w.size(); ++k) x(k) = samples.nodes()(w.active()[static_cast<std::size_t>(k)]);
  try {
    return BasisDescriptor<Real>::orthonormal(x, w.w(), n1, n2);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::rank_deficient) throw;
    return BasisDescriptor<Real>::orthonormal(x, VectorXr<Real>::Ones(w.size()), n1, n2);
  }
}

}  // namespace detail

/// The d-Lawson iteration. Returns the iterate with the smallest duality gap.
template <class Real>
LawsonOutcome<Real> d_lawson(const SampleSet<Real>& samples, int n1, int n2, const LawsonConfig& config = {},
                             const std::optional<std::type_identity_t<WeightVector<Real>>>& w0 = std::nullopt) {
  if (n1 < 0 || n2 < 0) throw Error(ErrorKind::invalid_argument, "degrees must be nonnegative");
  const Index m = samples.size();
  const Index need = n1 + n2 + 2;
  if (m < need) {
    throw Error(ErrorKind::too_few_nodes, "too few nodes: " + std::to_string(m) + " < n1+n2+2 = " + std::to_string(need));
  }
  if (!(config.beta > 0) || !(config.eps_r > 0) || config.maxit < 1 || !(config.eps_w >= 0) ||
      !(config.eps_w < 1.0 / static_cast<double>(m)) || !(config.exact_tol >= 0)) {
    throw Error(ErrorKind::invalid_argument, "invalid Lawson configuration");
  }
  WeightVector<Real> w = w0 ? *w0 : WeightVector<Real>::uniform(m);

  const Real beta(config.beta);
  const Real eps_r(config.eps_r);
  const Real fscale = m ? std::max(samples.values().cwiseAbs().maxCoeff(), Real(0)) : Real(0);
  const Real exact_cut = Real(config.exact_tol) * (fscale > Real(0) ? fscale : Real(1));

  BasisDescriptor<Real> basis = detail::lawson_basis(samples, w, n1, n2, config.basis);

  LawsonOutcome<Real> out;
  bool have_best = false;
  Real prev_d(-1);

  for (int k = 1; k <= config.maxit; ++k) {
    try {
      w = filter_weights<Real>(w, Real(config.eps_w), need);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::too_few_nodes) throw;
    }
    if (config.basis == BasisKind::orthonormal && config.refresh_orthonormal && k > 1) {
      basis = detail::lawson_basis(samples, w, n1, n2, config.basis);
    }

    const DualSolveResult<Real> dual = eval_dual(samples, w, basis);
    out.max_residual_p = std::max(out.max_residual_p, dual.residual_p);
    out.max_residual_q = std::max(out.max_residual_q, dual.residual_q);
    const RationalApproximant<Real> r = dual.approximant();
    const VectorXc<Real> e = samples.values() - evaluate_rational(r, samples.nodes()).values;
    const VectorXr<Real> mag2 = e.cwiseAbs2();
    const Real zeta = std::sqrt(mag2.maxCoeff());

    LawsonRecord<Real> rec;
    rec.k = k;
    rec.d = dual.d_value;
    rec.sqrt_d = std::sqrt(dual.d_value);
    rec.zeta = zeta;
    rec.active_count = w.size();
    const bool exact = zeta <= exact_cut;
    rec.gap = exact ? Real(0) : duality_gap(dual.d_value, zeta);
    out.history.push_back(rec);
    out.iterations = k;

    if (prev_d >= Real(0) && dual.d_value < prev_d - Real(1e-12) * std::max(prev_d, std::numeric_limits<Real>::min())) {
      out.warnings.push_back({LawsonWarningKind::non_monotone, k, "d(w) decreased"});
    }
    prev_d = dual.d_value;

    if (!have_best || rec.gap < out.gap) {
      have_best = true;
      out.approximant = r;
      out.final_w = w;
      out.d_value = dual.d_value;
      out.zeta = zeta;
      out.gap = rec.gap;
      out.best_iteration = k;
    }
    if (exact || rec.gap < eps_r) {
      out.converged = true;
      break;
    }

    VectorXc<Real> ea(w.size());
    Real active_max(0);
    for (Index j = 0; j < w.size(); ++j) {
      const Index idx = w.active()[static_cast<std::size_t>(j)];
      ea(j) = e(idx);
      active_max = std::max(active_max, mag2(idx));
    }
    if (w.size() < m && zeta > std::sqrt(active_max) * (Real(1) + Real(10) * eps_r)) {
      out.warnings.push_back({LawsonWarningKind::support_loss, k, "a filtered node is the error maximiser"});
    }
    try {
      w = update_weights<Real>(w, ea, beta);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::all_zero_errors) throw;
      out.warnings.push_back({LawsonWarningKind::all_zero_errors, k, "errors vanish on the weight support"});
      break;
    }
  }
  return out;
}

template <class Real>
void write_history_csv(std::ostream& os, const std::vector<LawsonRecord<Real>>& history) {
  os << "k,d,sqrt_d,zeta,gap,active_count\n";
  char buf[256];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%lld\n", r.k, static_cast<double>(r.d),
                  static_cast<double>(r.sqrt_d), static_cast<double>(r.zeta), static_cast<double>(r.gap),
                  static_cast<long long>(r.active_count));
    os << buf;
  }
}

}  // namespace ratmm

#endif  // RATMM_LAWSON_HPP
