#ifndef RATMM_BASIS_HPP
#define RATMM_BASIS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ratmm/errors.hpp"

namespace ratmm {

using Eigen::Index;

template <class Real> using Complex = std::complex<Real>;
template <class Real> using VectorXr = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <class Real> using VectorXc = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <class Real> using MatrixXr = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real> using MatrixXc = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Throws DuplicateNodes if two entries of `nodes` compare equal.
template <class Real>
void require_distinct(const VectorXc<Real>& nodes) {
  std::vector<Index> order(static_cast<std::size_t>(nodes.size()));
  for (Index i = 0; i < nodes.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  auto less = [&](Index i, Index j) {
    if (nodes(i).real() != nodes(j).real()) return nodes(i).real() < nodes(j).real();
    return nodes(i).imag() < nodes(j).imag();
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (nodes(order[k]) == nodes(order[k - 1])) {
      throw Error(ErrorKind::duplicate_nodes, "node appears more than once",
                  static_cast<std::size_t>(std::max(order[k], order[k - 1])));
    }
  }
}

enum class BasisKind { monomial, orthonormal };

inline const char* to_string(BasisKind kind) {
  return kind == BasisKind::monomial ? "monomial" : "orthonormal";
}

/// Three-term-free (full) Arnoldi recurrence for a polynomial family that is
/// orthonormal under <y, z>_w = sum_j w_j conj(y_j) z_j on a fixed node set.
///
///   pi_0(x)     = constant
///   pi_{k+1}(x) = (x pi_k(x) - sum_{j<=k} H(j,k) pi_j(x)) / H(k+1,k)
///
/// Storing H lets the family be evaluated anywhere, not only on the nodes.
template <class Real>
struct OrthonormalRecurrence {
  VectorXc<Real> nodes;
  VectorXr<Real> weights;
  MatrixXc<Real> hessenberg;  // (degree+1) x degree
  Real constant{1};           // value of pi_0

  int degree() const { return static_cast<int>(hessenberg.cols()); }

  /// Columns pi_0..pi_degree evaluated at `x`.
  MatrixXc<Real> evaluate(const VectorXc<Real>& x, int upto) const {
    MatrixXc<Real> V(x.size(), upto + 1);
    V.col(0).setConstant(Complex<Real>(constant));
    for (int k = 0; k < upto; ++k) {
      VectorXc<Real> v = x.cwiseProduct(V.col(k));
      for (int j = 0; j <= k; ++j) v -= hessenberg(j, k) * V.col(j);
      V.col(k + 1) = v / hessenberg(k + 1, k);
    }
    return V;
  }

  /// Upper-triangular C with column k holding the monomial coefficients of pi_k.
  MatrixXc<Real> monomial_coefficients(int upto) const {
    MatrixXc<Real> C = MatrixXc<Real>::Zero(upto + 1, upto + 1);
    C(0, 0) = constant;
    for (int k = 0; k < upto; ++k) {
      VectorXc<Real> v = VectorXc<Real>::Zero(upto + 1);
      v.tail(upto) = C.col(k).head(upto);
      for (int j = 0; j <= k; ++j) v -= hessenberg(j, k) * C.col(j);
      C.col(k + 1) = v / hessenberg(k + 1, k);
    }
    return C;
  }
};

/// Builds the recurrence on (nodes, weights) by Gram-Schmidt with one
/// reorthogonalisation pass per step. Weights need not sum to one.
template <class Real>
std::shared_ptr<const OrthonormalRecurrence<Real>> build_orthonormal_recurrence(const VectorXc<Real>& nodes,
                                                                                 const VectorXr<Real>& weights,
                                                                                 int degree) {
  if (nodes.size() != weights.size()) {
    throw Error(ErrorKind::dimension_mismatch, "nodes and weights differ in length");
  }
  if (degree < 0) throw Error(ErrorKind::invalid_argument, "negative degree");
  if ((weights.array() < Real(0)).any()) throw Error(ErrorKind::invalid_argument, "negative weight");
  const Index positive = (weights.array() > Real(0)).count();
  if (positive < degree + 1) {
    throw Error(ErrorKind::rank_deficient, "fewer weighted nodes than basis functions");
  }

  auto rec = std::make_shared<OrthonormalRecurrence<Real>>();
  rec->nodes = nodes;
  rec->weights = weights;
  rec->hessenberg = MatrixXc<Real>::Zero(degree + 1, degree);

  const VectorXc<Real> w = weights.template cast<Complex<Real>>();
  auto inner = [&](const VectorXc<Real>& y, const VectorXc<Real>& z) {
    return (y.conjugate().cwiseProduct(w).cwiseProduct(z)).sum();
  };
  auto wnorm = [&](const VectorXc<Real>& y) { return std::sqrt(std::max(Real(0), std::real(inner(y, y)))); };

  MatrixXc<Real> Q(nodes.size(), degree + 1);
  rec->constant = Real(1) / std::sqrt(weights.sum());
  Q.col(0).setConstant(Complex<Real>(rec->constant));

  const Real breakdown = Real(100) * std::numeric_limits<Real>::epsilon();
  for (int k = 0; k < degree; ++k) {
    VectorXc<Real> v = nodes.cwiseProduct(Q.col(k));
    const Real before = wnorm(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j <= k; ++j) {
        const Complex<Real> h = inner(Q.col(j), v);
        rec->hessenberg(j, k) += h;
        v -= h * Q.col(j);
      }
    }
    const Real h = wnorm(v);
    if (!(h > breakdown * std::max(before, Real(1)))) {
      throw Error(ErrorKind::rank_deficient, "orthonormalisation met a dependent column");
    }
    rec->hessenberg(k + 1, k) = h;
    Q.col(k + 1) = v / h;
  }
  return rec;
}

/// Describes the bases spanning P_{n1} (numerator) and P_{n2} (denominator).
/// The orthonormal kind shares one recurrence of degree max(n1, n2).
template <class Real = double>
class BasisDescriptor {
 public:
  BasisDescriptor() = default;

  static BasisDescriptor monomial(int n1, int n2) {
    check_degrees(n1, n2);
    BasisDescriptor d;
    d.kind_ = BasisKind::monomial;
    d.n1_ = n1;
    d.n2_ = n2;
    return d;
  }

  static BasisDescriptor orthonormal(const VectorXc<Real>& nodes, const VectorXr<Real>& weights, int n1, int n2) {
    check_degrees(n1, n2);
    BasisDescriptor d;
    d.kind_ = BasisKind::orthonormal;
    d.n1_ = n1;
    d.n2_ = n2;
    d.recurrence_ = build_orthonormal_recurrence<Real>(nodes, weights, std::max(n1, n2));
    return d;
  }

  static BasisDescriptor from_recurrence(std::shared_ptr<const OrthonormalRecurrence<Real>> rec, int n1, int n2) {
    check_degrees(n1, n2);
    if (!rec || rec->degree() < std::max(n1, n2)) {
      throw Error(ErrorKind::invalid_argument, "recurrence degree too small");
    }
    BasisDescriptor d;
    d.kind_ = BasisKind::orthonormal;
    d.n1_ = n1;
    d.n2_ = n2;
    d.recurrence_ = std::move(rec);
    return d;
  }

  BasisKind kind() const { return kind_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  const std::shared_ptr<const OrthonormalRecurrence<Real>>& recurrence() const { return recurrence_; }

  /// Generalised Vandermonde [b_0(x_i) ... b_degree(x_i)].
  MatrixXc<Real> vandermonde(const VectorXc<Real>& x, int degree) const {
    if (kind_ == BasisKind::orthonormal) return recurrence_->evaluate(x, degree);
    MatrixXc<Real> V(x.size(), degree + 1);
    V.col(0).setOnes();
    for (int k = 1; k <= degree; ++k) V.col(k) = V.col(k - 1).cwiseProduct(x);
    return V;
  }

  MatrixXc<Real> numerator_matrix(const VectorXc<Real>& x) const { return vandermonde(x, n1_); }
  MatrixXc<Real> denominator_matrix(const VectorXc<Real>& x) const { return vandermonde(x, n2_); }

  /// T with [b_0..b_degree](x) = [1, x, .., x^degree] T, so monomial coefficients are T * c.
  MatrixXc<Real> to_monomial_map(int degree) const {
    if (kind_ == BasisKind::monomial) return MatrixXc<Real>::Identity(degree + 1, degree + 1);
    return recurrence_->monomial_coefficients(degree);
  }

 private:
  static void check_degrees(int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw Error(ErrorKind::invalid_argument, "degrees must be nonnegative");
  }

  BasisKind kind_ = BasisKind::monomial;
  int n1_ = 0;
  int n2_ = 0;
  std::shared_ptr<const OrthonormalRecurrence<Real>> recurrence_;
};

}  // namespace ratmm

#endif  // RATMM_BASIS_HPP
