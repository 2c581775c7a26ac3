#ifndef RATMM_LP_HPP
#define RATMM_LP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ratmm/basis.hpp"
#include "ratmm/errors.hpp"

namespace ratmm {

/// min c^T x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lower <= x <= upper.
/// Empty bound vectors mean x >= 0. Bounds may be +-infinity.
template <class Real = double>
struct LinearProgram {
  VectorXr<Real> c;
  MatrixXr<Real> A_ub;
  VectorXr<Real> b_ub;
  MatrixXr<Real> A_eq;
  VectorXr<Real> b_eq;
  VectorXr<Real> lower;
  VectorXr<Real> upper;
};

enum class LpStatus { optimal, unbounded, infeasible };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

/// duals_ub are the Lagrange multipliers of the inequality rows (>= 0 at an
/// optimum, c + A_ub^T duals_ub - A_eq^T duals_eq = reduced costs of the bounds);
/// duals_eq(i) is d(objective)/d(b_eq(i)).
template <class Real = double>
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  VectorXr<Real> x;
  Real objective{0};
  VectorXr<Real> duals_ub;
  VectorXr<Real> duals_eq;
  int iterations = 0;
};

namespace detail {

template <class Real>
class Tableau {
 public:
  Tableau(MatrixXr<Real> A, VectorXr<Real> b, std::vector<Index> basis, Index n_structural, Real tol, int max_iter)
      : rows_(A.rows()), cols_(A.cols()), n_structural_(n_structural), tol_(tol), max_iter_(max_iter),
        basis_(std::move(basis)) {
    T_ = MatrixXr<Real>::Zero(rows_ + 1, cols_ + 1);
    T_.topLeftCorner(rows_, cols_) = A;
    T_.topRightCorner(rows_, 1) = b;
  }

  // Sets the cost row for `cost` given the current (canonical) basis.
  void price(const VectorXr<Real>& cost) {
    T_.row(rows_).head(cols_) = cost.transpose();
    T_(rows_, cols_) = Real(0);
    for (Index i = 0; i < rows_; ++i) {
      const Real cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != Real(0)) T_.row(rows_) -= cb * T_.row(i);
    }
  }

  // Returns false when unbounded.
  bool run(Index allowed_cols, int& iterations) {
    for (;;) {
      if (iterations >= max_iter_) throw Error(ErrorKind::cycle_detected, "simplex iteration limit reached");
      Index enter = -1;
      for (Index j = 0; j < allowed_cols; ++j) {
        if (T_(rows_, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Index leave = -1;
      Real best = std::numeric_limits<Real>::infinity();
      for (Index i = 0; i < rows_; ++i) {
        const Real a = T_(i, enter);
        if (a <= tol_) continue;
        const Real ratio = T_(i, cols_) / a;
        if (ratio < best - tol_ ||
            (ratio <= best + tol_ && leave >= 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          if (ratio < best - tol_ || leave < 0) best = ratio;
          leave = i;
        } else if (leave < 0) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++iterations;
    }
  }

  void pivot(Index r, Index c) {
    const Real piv = T_(r, c);
    if (std::abs(piv) <= std::numeric_limits<Real>::min()) {
      throw Error(ErrorKind::numerical_breakdown, "zero pivot");
    }
    T_.row(r) /= piv;
    for (Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const Real f = T_(i, c);
      if (f != Real(0)) T_.row(i) -= f * T_.row(r);
    }
    T_(r, c) = Real(1);
    basis_[static_cast<std::size_t>(r)] = c;
  }

  Real value() const { return -T_(rows_, cols_); }
  Real entry(Index i, Index j) const { return T_(i, j); }
  Real rhs(Index i) const { return T_(i, cols_); }
  const std::vector<Index>& basis() const { return basis_; }
  Index rows() const { return rows_; }

 private:
  Index rows_;
  Index cols_;
  Index n_structural_;
  Real tol_;
  int max_iter_;
  std::vector<Index> basis_;
  MatrixXr<Real> T_;
};

}  // namespace detail

/// Dense two-phase simplex with Bland's rule.
template <class Real>
LpResult<Real> solve_lp(const LinearProgram<Real>& lp, Real tol = Real(1e-9), int max_iter = 100000) {
  const Real inf = std::numeric_limits<Real>::infinity();
  const Index n = lp.c.size();
  const Index m_ub = lp.b_ub.size();
  const Index m_eq = lp.b_eq.size();
  if ((m_ub > 0 && (lp.A_ub.rows() != m_ub || lp.A_ub.cols() != n)) ||
      (m_eq > 0 && (lp.A_eq.rows() != m_eq || lp.A_eq.cols() != n)) ||
      (lp.lower.size() != 0 && lp.lower.size() != n) || (lp.upper.size() != 0 && lp.upper.size() != n)) {
    throw Error(ErrorKind::dimension_mismatch, "linear program dimensions are inconsistent");
  }
  const VectorXr<Real> lower = lp.lower.size() ? lp.lower : VectorXr<Real>::Zero(n);
  const VectorXr<Real> upper = lp.upper.size() ? lp.upper : VectorXr<Real>::Constant(n, inf);
  if (!lp.c.allFinite() || (m_ub && (!lp.A_ub.allFinite() || !lp.b_ub.allFinite())) ||
      (m_eq && (!lp.A_eq.allFinite() || !lp.b_eq.allFinite()))) {
    throw Error(ErrorKind::invalid_argument, "linear program has non-finite data");
  }

  // x = offset + P x', x' >= 0.
  std::vector<std::pair<Index, Real>> cols;  // (original variable, sign)
  VectorXr<Real> offset = VectorXr<Real>::Zero(n);
  std::vector<std::pair<Index, Real>> bound_rows;  // x'_k <= width
  for (Index i = 0; i < n; ++i) {
    const bool lo = std::isfinite(lower(i));
    const bool hi = std::isfinite(upper(i));
    if (lo && hi && upper(i) < lower(i)) {
      LpResult<Real> r;
      r.status = LpStatus::infeasible;
      return r;
    }
    if (lo) {
      offset(i) = lower(i);
      cols.emplace_back(i, Real(1));
      if (hi) bound_rows.emplace_back(static_cast<Index>(cols.size() - 1), upper(i) - lower(i));
    } else if (hi) {
      offset(i) = upper(i);
      cols.emplace_back(i, Real(-1));
    } else {
      cols.emplace_back(i, Real(1));
      cols.emplace_back(i, Real(-1));
    }
  }
  const Index np = static_cast<Index>(cols.size());
  MatrixXr<Real> P = MatrixXr<Real>::Zero(n, np);
  for (Index k = 0; k < np; ++k) P(cols[static_cast<std::size_t>(k)].first, k) = cols[static_cast<std::size_t>(k)].second;

  const Index n_bound = static_cast<Index>(bound_rows.size());
  const Index n_slack_rows = m_ub + n_bound;
  const Index rows = n_slack_rows + m_eq;
  const Index n_struct = np + n_slack_rows;

  MatrixXr<Real> A = MatrixXr<Real>::Zero(rows, n_struct);
  VectorXr<Real> b(rows);
  if (m_ub) {
    A.topLeftCorner(m_ub, np) = lp.A_ub * P;
    b.head(m_ub) = lp.b_ub - lp.A_ub * offset;
  }
  for (Index k = 0; k < n_bound; ++k) {
    A(m_ub + k, bound_rows[static_cast<std::size_t>(k)].first) = Real(1);
    b(m_ub + k) = bound_rows[static_cast<std::size_t>(k)].second;
  }
  for (Index k = 0; k < n_slack_rows; ++k) A(k, np + k) = Real(1);
  if (m_eq) {
    A.bottomLeftCorner(m_eq, np) = lp.A_eq * P;
    b.tail(m_eq) = lp.b_eq - lp.A_eq * offset;
  }
  VectorXr<Real> sign = VectorXr<Real>::Ones(rows);
  for (Index i = 0; i < rows; ++i) {
    if (b(i) < Real(0)) {
      sign(i) = Real(-1);
      A.row(i) *= Real(-1);
      b(i) = -b(i);
    }
  }

  // Artificials where a slack cannot start basic.
  std::vector<Index> basis(static_cast<std::size_t>(rows));
  std::vector<Index> art_rows;
  for (Index i = 0; i < rows; ++i) {
    if (i < n_slack_rows && sign(i) > Real(0)) {
      basis[static_cast<std::size_t>(i)] = np + i;
    } else {
      art_rows.push_back(i);
    }
  }
  const Index n_art = static_cast<Index>(art_rows.size());
  MatrixXr<Real> Afull = MatrixXr<Real>::Zero(rows, n_struct + n_art);
  Afull.leftCols(n_struct) = A;
  for (Index k = 0; k < n_art; ++k) {
    Afull(art_rows[static_cast<std::size_t>(k)], n_struct + k) = Real(1);
    basis[static_cast<std::size_t>(art_rows[static_cast<std::size_t>(k)])] = n_struct + k;
  }

  const Real scale = std::max<Real>(Real(1), b.size() ? b.cwiseAbs().maxCoeff() : Real(0));
  detail::Tableau<Real> tab(Afull, b, basis, n_struct, tol, max_iter);
  LpResult<Real> result;

  if (n_art > 0) {
    VectorXr<Real> cost1 = VectorXr<Real>::Zero(n_struct + n_art);
    cost1.tail(n_art).setOnes();
    tab.price(cost1);
    tab.run(n_struct + n_art, result.iterations);
    if (tab.value() > tol * scale) {
      result.status = LpStatus::infeasible;
      return result;
    }
    for (Index i = 0; i < rows; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < n_struct) continue;
      for (Index j = 0; j < n_struct; ++j) {
        if (std::abs(tab.entry(i, j)) > tol) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  VectorXr<Real> cost2 = VectorXr<Real>::Zero(n_struct + n_art);
  cost2.head(np) = P.transpose() * lp.c;
  tab.price(cost2);
  if (!tab.run(n_struct, result.iterations)) {
    result.status = LpStatus::unbounded;
    return result;
  }

  VectorXr<Real> xs = VectorXr<Real>::Zero(n_struct + n_art);
  for (Index i = 0; i < rows; ++i) xs(tab.basis()[static_cast<std::size_t>(i)]) = tab.rhs(i);
  result.status = LpStatus::optimal;
  result.x = offset + P * xs.head(np);
  result.objective = lp.c.dot(result.x);

  // y solves B^T y = c_B on the sign-normalised rows.
  MatrixXr<Real> B(rows, rows);
  VectorXr<Real> cB(rows);
  for (Index i = 0; i < rows; ++i) {
    const Index j = tab.basis()[static_cast<std::size_t>(i)];
    B.col(i) = Afull.col(j);
    cB(i) = cost2(j);
  }
  VectorXr<Real> y = rows ? VectorXr<Real>(B.transpose().fullPivLu().solve(cB)) : VectorXr<Real>();
  if (rows) y = y.cwiseProduct(sign);
  result.duals_ub = m_ub ? VectorXr<Real>(-y.head(m_ub)) : VectorXr<Real>();
  result.duals_eq = m_eq ? VectorXr<Real>(y.tail(m_eq)) : VectorXr<Real>();
  return result;
}

}  // namespace ratmm

#endif  // RATMM_LP_HPP
