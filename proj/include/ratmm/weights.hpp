#ifndef RATMM_WEIGHTS_HPP
#define RATMM_WEIGHTS_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "ratmm/basis.hpp"
#include "ratmm/errors.hpp"

namespace ratmm {

/// A point of the probability simplex, stored over the active node indices.
template <class Real = double>
class WeightVector {
 public:
  WeightVector() = default;

  WeightVector(VectorXr<Real> w, std::vector<Index> active) : w_(std::move(w)), active_(std::move(active)) {
    if (w_.size() != static_cast<Index>(active_.size())) {
      throw Error(ErrorKind::dimension_mismatch, "weights and active indices differ in length");
    }
    if (w_.size() == 0) throw Error(ErrorKind::invalid_argument, "empty weight vector");
    if ((w_.array() < Real(0)).any() || !w_.allFinite()) {
      throw Error(ErrorKind::invalid_argument, "weights must be finite and nonnegative");
    }
    const Real s = w_.sum();
    if (!(s > Real(0))) throw Error(ErrorKind::invalid_argument, "weights sum to zero");
    normalise();
  }

  static WeightVector uniform(Index m) {
    std::vector<Index> active(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) active[static_cast<std::size_t>(j)] = j;
    return WeightVector(VectorXr<Real>::Constant(m, Real(1) / Real(m)), std::move(active));
  }

  /// Weights over all m nodes, zero outside the active set.
  static WeightVector from_full(const VectorXr<Real>& full) {
    std::vector<Index> active(static_cast<std::size_t>(full.size()));
    for (Index j = 0; j < full.size(); ++j) active[static_cast<std::size_t>(j)] = j;
    return WeightVector(full, std::move(active));
  }

  const VectorXr<Real>& w() const { return w_; }
  const std::vector<Index>& active() const { return active_; }
  Index size() const { return w_.size(); }

  VectorXr<Real> full(Index m) const {
    VectorXr<Real> out = VectorXr<Real>::Zero(m);
    for (std::size_t k = 0; k < active_.size(); ++k) out(active_[k]) = w_(static_cast<Index>(k));
    return out;
  }

 private:
  // Two passes keep |sum - 1| at the rounding level of the final division.
  void normalise() {
    for (int pass = 0; pass < 2; ++pass) {
      Real s(0), c(0);
      for (Index j = 0; j < w_.size(); ++j) {
        const Real y = w_(j) - c;
        const Real t = s + y;
        c = (t - s) - y;
        s = t;
      }
      w_ /= s;
    }
  }

  VectorXr<Real> w_;
  std::vector<Index> active_;
};

}  // namespace ratmm

#endif  // RATMM_WEIGHTS_HPP
