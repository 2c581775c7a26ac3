#ifndef RATMM_APPROXIMANT_HPP
#define RATMM_APPROXIMANT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ratmm/basis.hpp"
#include "ratmm/errors.hpp"

namespace ratmm {

/// Nodes x_j with data f(x_j). Nodes are pairwise distinct.
template <class Real = double>
class SampleSet {
 public:
  SampleSet() = default;

  SampleSet(VectorXc<Real> nodes, VectorXc<Real> values) : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() != values_.size()) {
      throw Error(ErrorKind::dimension_mismatch, "nodes and values differ in length");
    }
    require_distinct<Real>(nodes_);
  }

  const VectorXc<Real>& nodes() const { return nodes_; }
  const VectorXc<Real>& values() const { return values_; }
  Index size() const { return nodes_.size(); }

  SampleSet subset(const std::vector<Index>& indices) const {
    VectorXc<Real> x(static_cast<Index>(indices.size()));
    VectorXc<Real> f(static_cast<Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
      x(static_cast<Index>(k)) = nodes_(indices[k]);
      f(static_cast<Index>(k)) = values_(indices[k]);
    }
    return SampleSet(std::move(x), std::move(f));
  }

 private:
  VectorXc<Real> nodes_;
  VectorXc<Real> values_;
};

template <class Real>
int polynomial_degree(const VectorXc<Real>& coeffs, Real coeff_tol) {
  const Real top = coeffs.size() ? coeffs.cwiseAbs().maxCoeff() : Real(0);
  for (Index i = coeffs.size() - 1; i >= 0; --i) {
    if (std::abs(coeffs(i)) > coeff_tol * top) return static_cast<int>(i);
  }
  return -1;
}

struct Defect {
  int value = 0;
  bool zero_numerator = false;  // deg(p) taken as 0 by convention
};

template <class Real>
class RationalApproximant;

template <class Real>
Defect compute_defect(const RationalApproximant<Real>& r, Real coeff_tol = Real(1e-12));

/// xi = p / q with p = sum a_k psi_k, q = sum b_k phi_k over `basis`.
template <class Real = double>
class RationalApproximant {
 public:
  RationalApproximant() = default;

  RationalApproximant(VectorXc<Real> a, VectorXc<Real> b, BasisDescriptor<Real> basis)
      : a_(std::move(a)), b_(std::move(b)), basis_(std::move(basis)) {
    if (a_.size() != basis_.n1() + 1 || b_.size() != basis_.n2() + 1) {
      throw Error(ErrorKind::dimension_mismatch, "coefficient lengths do not match the basis degrees");
    }
    if (b_.isZero(0)) throw Error(ErrorKind::zero_denominator, "denominator coefficients are all zero");
  }

  const VectorXc<Real>& a() const { return a_; }
  const VectorXc<Real>& b() const { return b_; }
  const BasisDescriptor<Real>& basis() const { return basis_; }
  int n1() const { return basis_.n1(); }
  int n2() const { return basis_.n2(); }

  int defect() const { return compute_defect(*this).value; }

  VectorXc<Real> numerator(const VectorXc<Real>& x) const { return eval_poly(a_, x, n1()); }
  VectorXc<Real> denominator(const VectorXc<Real>& x) const { return eval_poly(b_, x, n2()); }

  RationalApproximant to_monomial() const {
    if (basis_.kind() == BasisKind::monomial) return *this;
    return RationalApproximant(basis_.to_monomial_map(n1()) * a_, basis_.to_monomial_map(n2()) * b_,
                               BasisDescriptor<Real>::monomial(n1(), n2()));
  }

  /// Re-expresses the same rational function in `target` (same degrees).
  RationalApproximant in_basis(const BasisDescriptor<Real>& target) const {
    if (target.n1() != n1() || target.n2() != n2()) {
      throw Error(ErrorKind::dimension_mismatch, "target basis has different degrees");
    }
    const RationalApproximant mono = to_monomial();
    if (target.kind() == BasisKind::monomial) return mono;
    const MatrixXc<Real> T1 = target.to_monomial_map(n1());
    const MatrixXc<Real> T2 = target.to_monomial_map(n2());
    VectorXc<Real> a = T1.template triangularView<Eigen::Upper>().solve(mono.a());
    VectorXc<Real> b = T2.template triangularView<Eigen::Upper>().solve(mono.b());
    return RationalApproximant(std::move(a), std::move(b), target);
  }

 private:
  VectorXc<Real> eval_poly(const VectorXc<Real>& c, const VectorXc<Real>& x, int degree) const {
    if (basis_.kind() == BasisKind::orthonormal) return basis_.vandermonde(x, degree) * c;
    VectorXc<Real> out(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      Complex<Real> acc = c(degree);
      for (int k = degree - 1; k >= 0; --k) acc = acc * x(i) + c(k);
      out(i) = acc;
    }
    return out;
  }

  VectorXc<Real> a_;
  VectorXc<Real> b_;
  BasisDescriptor<Real> basis_;
};

template <class Real>
Defect compute_defect(const RationalApproximant<Real>& r, Real coeff_tol) {
  const RationalApproximant<Real> mono = r.to_monomial();
  const int dq = polynomial_degree<Real>(mono.b(), coeff_tol);
  if (dq < 0) throw Error(ErrorKind::zero_denominator, "denominator numerically zero");
  Defect out;
  int dp = polynomial_degree<Real>(mono.a(), coeff_tol);
  if (dp < 0) {
    dp = 0;
    out.zero_numerator = true;
  }
  out.value = std::min(r.n1() - dp, r.n2() - dq);
  return out;
}

struct EvalOptions {
  double abs_floor = 1e-300;
  double rel_floor = 1e-14;  // relative to max_j |q(x_j)| (resp. |p|)
};

template <class Real>
struct Evaluation {
  VectorXc<Real> values;
  std::vector<Index> removable;  // nodes where p and q both vanished
};

namespace detail {

template <class Real>
Complex<Real> horner(const VectorXc<Real>& c, Complex<Real> x) {
  Complex<Real> acc(0);
  for (Index k = c.size() - 1; k >= 0; --k) acc = acc * x + c(k);
  return acc;
}

// Divides c(x) by (x - root), dropping the remainder.
template <class Real>
VectorXc<Real> deflate(const VectorXc<Real>& c, Complex<Real> root) {
  if (c.size() <= 1) return VectorXc<Real>::Zero(1);
  VectorXc<Real> out(c.size() - 1);
  Complex<Real> carry(0);
  for (Index k = c.size() - 1; k >= 1; --k) {
    carry = c(k) + carry * root;
    out(k - 1) = carry;
  }
  return out;
}

}  // namespace detail

/// xi(x_j) = p(x_j)/q(x_j). A node where q falls below the floor but p does
/// not raises DenominatorVanishes; where both vanish, the common factor
/// (x - x_j) is divided out and the node is reported in `removable`.
template <class Real>
Evaluation<Real> evaluate_rational(const RationalApproximant<Real>& r, const VectorXc<Real>& x,
                                   const EvalOptions& opts = {}) {
  Evaluation<Real> out;
  const VectorXc<Real> p = r.numerator(x);
  const VectorXc<Real> q = r.denominator(x);
  out.values.resize(x.size());
  if (x.size() == 0) return out;

  const Real pmax = std::sqrt(p.cwiseAbs2().maxCoeff());
  const Real qmax = std::sqrt(q.cwiseAbs2().maxCoeff());
  const Real qfloor = std::max(Real(opts.abs_floor), Real(opts.rel_floor) * qmax);
  const Real pfloor = std::max(Real(opts.abs_floor), Real(opts.rel_floor) * pmax);
  const Real qfloor2 = qfloor * qfloor;

  for (Index i = 0; i < x.size(); ++i) {
    const Real q2 = std::norm(q(i));
    if (q2 > qfloor2) {
      out.values(i) = p(i) * (std::conj(q(i)) / q2);
      continue;
    }
    if (std::abs(p(i)) > pfloor) {
      throw Error(ErrorKind::denominator_vanishes, "pole at a node", static_cast<std::size_t>(i));
    }
    const RationalApproximant<Real> mono = r.to_monomial();
    VectorXc<Real> pa = mono.a();
    VectorXc<Real> qb = mono.b();
    Complex<Real> pv(0), qv(0);
    do {
      pa = detail::deflate<Real>(pa, x(i));
      qb = detail::deflate<Real>(qb, x(i));
      pv = detail::horner<Real>(pa, x(i));
      qv = detail::horner<Real>(qb, x(i));
    } while (std::abs(qv) <= qfloor && std::abs(pv) <= pfloor && qb.size() > 1);
    if (std::abs(qv) <= qfloor) {
      throw Error(ErrorKind::denominator_vanishes, "pole at a node after cancellation", static_cast<std::size_t>(i));
    }
    out.values(i) = pv / qv;
    out.removable.push_back(i);
  }
  return out;
}

template <class Real>
struct ErrorProfile {
  VectorXc<Real> errors;       // f(x_j) - xi(x_j)
  Real max_error{0};           // zeta
  std::vector<Index> extreme;  // |e_j| >= (1 - delta) zeta
  bool exact_fit = false;
  std::vector<Index> removable;
};

/// Indices j with |e_j| >= (1 - delta) * max|e|; every index when max|e| = 0.
template <class Real>
std::vector<Index> extreme_band(const VectorXr<Real>& abs_errors, Real delta) {
  std::vector<Index> out;
  const Real zeta = abs_errors.size() ? abs_errors.maxCoeff() : Real(0);
  const Real cut = (Real(1) - delta) * zeta;
  for (Index j = 0; j < abs_errors.size(); ++j) {
    if (abs_errors(j) >= cut) out.push_back(j);
  }
  return out;
}

template <class Real>
ErrorProfile<Real> error_profile(const SampleSet<Real>& samples, const RationalApproximant<Real>& r, Real delta,
                                 const EvalOptions& opts = {}) {
  if (!(delta >= Real(0) && delta < Real(1))) throw Error(ErrorKind::invalid_argument, "delta must lie in [0, 1)");
  Evaluation<Real> ev = evaluate_rational(r, samples.nodes(), opts);
  ErrorProfile<Real> out;
  out.errors = samples.values() - ev.values;
  out.removable = std::move(ev.removable);
  const VectorXr<Real> mag = out.errors.cwiseAbs();
  out.max_error = mag.size() ? mag.maxCoeff() : Real(0);
  out.exact_fit = out.max_error == Real(0);
  out.extreme = extreme_band<Real>(mag, delta);
  return out;
}

}  // namespace ratmm

#endif  // RATMM_APPROXIMANT_HPP
