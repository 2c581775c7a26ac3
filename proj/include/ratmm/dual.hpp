#ifndef RATMM_DUAL_HPP
#define RATMM_DUAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ratmm/approximant.hpp"
#include "ratmm/basis.hpp"
#include "ratmm/errors.hpp"
#include "ratmm/weights.hpp"

namespace ratmm {

/// Psi(i, j) = psi_j(x_i), Phi(i, j) = phi_j(x_i).
template <class Real = double>
struct BasisMatrices {
  MatrixXc<Real> Psi;
  MatrixXc<Real> Phi;
  BasisDescriptor<Real> basis;
};

template <class Real>
BasisMatrices<Real> build_basis_matrices(const VectorXc<Real>& nodes, const BasisDescriptor<Real>& basis) {
  require_distinct<Real>(nodes);
  return {basis.numerator_matrix(nodes), basis.denominator_matrix(nodes), basis};
}

/// Convenience form: for the orthonormal kind the basis is built on (nodes, weights).
template <class Real>
BasisMatrices<Real> build_basis_matrices(const VectorXc<Real>& nodes, int n1, int n2, BasisKind kind,
                                         const std::optional<VectorXr<Real>>& weights = std::nullopt) {
  require_distinct<Real>(nodes);
  if (kind == BasisKind::monomial) return build_basis_matrices<Real>(nodes, BasisDescriptor<Real>::monomial(n1, n2));
  if (!weights) throw Error(ErrorKind::invalid_argument, "orthonormal basis needs weights");
  return build_basis_matrices<Real>(nodes, BasisDescriptor<Real>::orthonormal(nodes, *weights, n1, n2));
}

/// The Hermitian pencil (A_w, B_w) and A_w - lambda B_w.
template <class Real = double>
struct Pencil {
  MatrixXc<Real> A;
  MatrixXc<Real> B;
  MatrixXc<Real> shifted;
};

template <class Real>
MatrixXc<Real> hermitian_part(const MatrixXc<Real>& M) {
  return (M + M.adjoint()) / Real(2);
}

/// `w` is aligned with the rows of `bm` (one weight per node).
template <class Real>
Pencil<Real> assemble_pencil(const BasisMatrices<Real>& bm, const VectorXc<Real>& values, const VectorXr<Real>& w,
                             Real lambda) {
  const Index m = bm.Psi.rows();
  if (bm.Phi.rows() != m || values.size() != m || w.size() != m) {
    throw Error(ErrorKind::dimension_mismatch, "pencil inputs disagree on the node count");
  }
  const Index k1 = bm.Psi.cols();
  const Index k2 = bm.Phi.cols();
  const VectorXc<Real> wc = w.template cast<Complex<Real>>();
  const VectorXc<Real> wf = wc.cwiseProduct(values);
  const VectorXc<Real> wff = w.cwiseProduct(values.cwiseAbs2()).template cast<Complex<Real>>();

  Pencil<Real> out;
  out.A = MatrixXc<Real>::Zero(k1 + k2, k1 + k2);
  out.B = MatrixXc<Real>::Zero(k1 + k2, k1 + k2);
  out.A.topLeftCorner(k1, k1) = bm.Psi.adjoint() * wc.asDiagonal() * bm.Psi;
  out.A.topRightCorner(k1, k2) = -(bm.Psi.adjoint() * wf.asDiagonal() * bm.Phi);
  out.A.bottomLeftCorner(k2, k1) = out.A.topRightCorner(k1, k2).adjoint();
  out.A.bottomRightCorner(k2, k2) = bm.Phi.adjoint() * wff.asDiagonal() * bm.Phi;
  out.B.bottomRightCorner(k2, k2) = bm.Phi.adjoint() * wc.asDiagonal() * bm.Phi;
  out.A = hermitian_part<Real>(out.A);
  out.B = hermitian_part<Real>(out.B);
  out.shifted = out.A - lambda * out.B;
  return out;
}

/// One inner solve of the dual function at a fixed weight vector.
template <class Real = double>
struct DualSolveResult {
  Real d_value{0};
  VectorXc<Real> a;
  VectorXc<Real> b;
  Real residual_p{0};
  Real residual_q{0};
  std::vector<Index> active_nodes;  // nodes with w_j > 0
  BasisDescriptor<Real> basis;
  Real objective{0};  // sum_j w_j |f_j q(x_j) - p(x_j)|^2 recomputed from (a, b)

  RationalApproximant<Real> approximant() const { return RationalApproximant<Real>(a, b, basis); }
};

template <class Real>
std::pair<Real, Real> orthogonality_residual(const DualSolveResult<Real>& result, const SampleSet<Real>& samples,
                                             const WeightVector<Real>& w);

/// |sqrt(d) - zeta| / zeta.
template <class Real>
Real duality_gap(Real d_value, Real zeta) {
  if (!(zeta > Real(0))) throw Error(ErrorKind::invalid_argument, "duality gap needs zeta > 0");
  return std::abs(std::sqrt(std::max(d_value, Real(0))) - zeta) / zeta;
}

struct DualOptions {
  double range_tol = 1e-14;  // eigenvalues of Phi^H W Phi below range_tol * trace are dropped
};

/// d(w) = min sum_j w_j |f_j q(x_j) - p(x_j)|^2 subject to sum_j w_j |q(x_j)|^2 = 1.
///
/// The numerator is eliminated by a weighted least-squares projection
/// (QR of sqrt(W) Psi); the remaining problem
///   min ||(I - P) sqrt(W) F Phi b||  s.t.  ||sqrt(W) Phi b|| = 1
/// is the smallest eigenpair of S b = d (Phi^H W Phi) b on the range of
/// Phi^H W Phi, solved through the SVD of the square-root factors so that
/// d is obtained as a squared singular value rather than from S itself.
template <class Real>
DualSolveResult<Real> eval_dual(const SampleSet<Real>& samples, const WeightVector<Real>& w,
                                const BasisDescriptor<Real>& basis, const DualOptions& opts = {}) {
  DualSolveResult<Real> out;
  out.basis = basis;
  for (Index k = 0; k < w.size(); ++k) {
    const Index j = w.active()[static_cast<std::size_t>(k)];
    if (j < 0 || j >= samples.size()) throw Error(ErrorKind::dimension_mismatch, "weight index out of range");
    if (w.w()(k) > Real(0)) out.active_nodes.push_back(j);
  }
  const Index m = static_cast<Index>(out.active_nodes.size());
  const Index k1 = basis.n1() + 1;

  VectorXc<Real> x(m), f(m);
  VectorXr<Real> sw(m);
  {
    Index r = 0;
    for (Index k = 0; k < w.size(); ++k) {
      if (!(w.w()(k) > Real(0))) continue;
      const Index j = w.active()[static_cast<std::size_t>(k)];
      x(r) = samples.nodes()(j);
      f(r) = samples.values()(j);
      sw(r) = std::sqrt(w.w()(k));
      ++r;
    }
  }
  const MatrixXc<Real> Psi = basis.numerator_matrix(x);
  const MatrixXc<Real> Phi = basis.denominator_matrix(x);
  const VectorXc<Real> swc = sw.template cast<Complex<Real>>();
  const MatrixXc<Real> X = swc.asDiagonal() * Psi;
  const MatrixXc<Real> Z = swc.asDiagonal() * Phi;
  const MatrixXc<Real> Y = swc.cwiseProduct(f).asDiagonal() * Phi;

  // Range of B_w = Z^H Z.
  Eigen::JacobiSVD<MatrixXc<Real>> svdZ(Z, Eigen::ComputeThinV);
  const VectorXr<Real> sz = svdZ.singularValues();
  const Real trace = sz.squaredNorm();
  Index keep = 0;
  while (keep < sz.size() && sz(keep) * sz(keep) > Real(opts.range_tol) * trace) ++keep;
  if (keep == 0) throw Error(ErrorKind::degenerate_denominator_space, "Phi^H W Phi has numerical rank 0");
  const MatrixXc<Real> T =
      svdZ.matrixV().leftCols(keep) * sz.head(keep).cwiseInverse().template cast<Complex<Real>>().asDiagonal();

  // Component of Y orthogonal to span(X).
  Eigen::ColPivHouseholderQR<MatrixXc<Real>> qr(X);
  const Index rank = qr.rank();
  const MatrixXc<Real> QtY = qr.householderQ().adjoint() * Y;
  const MatrixXc<Real> M = QtY.bottomRows(m - rank) * T;

  VectorXc<Real> c;
  Real sigma_min(0);
  if (M.rows() == 0) {
    c = VectorXc<Real>::Unit(keep, 0);
  } else {
    Eigen::JacobiSVD<MatrixXc<Real>> svdM(M, Eigen::ComputeFullV);
    if (svdM.info() != Eigen::Success) throw Error(ErrorKind::eigen_solve_failure, "SVD did not converge");
    c = svdM.matrixV().col(keep - 1);
    if (M.rows() >= keep) sigma_min = svdM.singularValues()(keep - 1);
  }

  VectorXc<Real> b = T * c;
  VectorXc<Real> a = k1 > 0 && m > 0 ? VectorXc<Real>(qr.solve(Y * b)) : VectorXc<Real>::Zero(k1);

  Index lead = 0;
  b.cwiseAbs().maxCoeff(&lead);
  const Complex<Real> phase = std::conj(b(lead)) / std::abs(b(lead));
  out.a = a * phase;
  out.b = b * phase;
  out.d_value = sigma_min * sigma_min;

  const VectorXc<Real> r = Y * out.b - X * out.a;
  out.objective = r.squaredNorm();

  const auto res = orthogonality_residual(out, samples, w);
  out.residual_p = res.first;
  out.residual_q = res.second;
  return out;
}

/// Scaled norms of the two w-orthogonality conditions satisfied by an exact
/// inner solution:  F q - p  _|_w span(Psi)  and  F^H (F q - p) - d q  _|_w span(Phi).
template <class Real>
std::pair<Real, Real> orthogonality_residual(const DualSolveResult<Real>& result, const SampleSet<Real>& samples,
                                             const WeightVector<Real>& w) {
  const Index m = w.size();
  VectorXc<Real> x(m), f(m);
  for (Index k = 0; k < m; ++k) {
    const Index j = w.active()[static_cast<std::size_t>(k)];
    x(k) = samples.nodes()(j);
    f(k) = samples.values()(j);
  }
  const VectorXc<Real> wc = w.w().template cast<Complex<Real>>();
  const MatrixXc<Real> Psi = result.basis.numerator_matrix(x);
  const MatrixXc<Real> Phi = result.basis.denominator_matrix(x);
  const VectorXc<Real> p = Psi * result.a;
  const VectorXc<Real> q = Phi * result.b;
  const VectorXc<Real> r = f.cwiseProduct(q) - p;

  const Real raw1 = (Psi.adjoint() * wc.cwiseProduct(r)).norm();
  const Real raw2 = (Phi.adjoint() * wc.cwiseProduct(f.conjugate().cwiseProduct(r) - result.d_value * q)).norm();

  const VectorXr<Real> sw = w.w().cwiseSqrt();
  Real fmax(0);
  for (Index k = 0; k < m; ++k) {
    if (w.w()(k) > Real(0)) fmax = std::max(fmax, std::abs(f(k)));
  }
  const Real qn = sw.cwiseProduct(q.cwiseAbs()).norm();
  const Real pn = sw.cwiseProduct(p.cwiseAbs()).norm();
  const Real base = fmax * qn + pn;
  const Real psi_n = (sw.template cast<Complex<Real>>().asDiagonal() * Psi).norm();
  const Real phi_n = (sw.template cast<Complex<Real>>().asDiagonal() * Phi).norm();
  Real s1 = psi_n * base;
  Real s2 = phi_n * (fmax * base + result.d_value * qn);
  if (!(s1 > Real(0))) s1 = Real(1);
  if (!(s2 > Real(0))) s2 = Real(1);
  return {raw1 / s1, raw2 / s2};
}

}  // namespace ratmm

#endif  // RATMM_DUAL_HPP
