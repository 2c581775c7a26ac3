#ifndef RATMM_CERTIFICATES_HPP
#define RATMM_CERTIFICATES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ratmm/approximant.hpp"
#include "ratmm/basis.hpp"
#include "ratmm/dual.hpp"
#include "ratmm/errors.hpp"
#include "ratmm/lp.hpp"
#include "ratmm/weights.hpp"

namespace ratmm {

// ---------------------------------------------------------------- first order

/// tau_j / zeta and the basis matrix Pi_n on the extreme nodes.
template <class Real = double>
struct FirstOrderData {
  std::vector<Index> support;
  VectorXc<Real> errors;  // e(z_j)
  VectorXc<Real> p;       // p(z_j)
  VectorXc<Real> q;       // q(z_j)
  VectorXc<Real> tau;     // 2 conj(e q) / q / zeta, zero where q vanishes
  MatrixXc<Real> Pi;      // d x (deg+1)
  Real zeta{0};
  int n = 0;              // n1 + n2 - defect
  Defect defect;
};

template <class Real>
FirstOrderData<Real> first_order_data(const SampleSet<Real>& samples, const RationalApproximant<Real>& r,
                                      const std::vector<Index>& extreme) {
  if (extreme.empty()) throw Error(ErrorKind::invalid_argument, "empty extreme set");
  FirstOrderData<Real> out;
  out.support = extreme;
  const Index d = static_cast<Index>(extreme.size());
  VectorXc<Real> z(d), f(d);
  for (Index j = 0; j < d; ++j) {
    const Index idx = extreme[static_cast<std::size_t>(j)];
    if (idx < 0 || idx >= samples.size()) throw Error(ErrorKind::dimension_mismatch, "extreme index out of range");
    z(j) = samples.nodes()(idx);
    f(j) = samples.values()(idx);
  }
  out.p = r.numerator(z);
  out.q = r.denominator(z);
  const Evaluation<Real> full = evaluate_rational(r, samples.nodes());
  out.zeta = (samples.values() - full.values).cwiseAbs().maxCoeff();
  out.errors.resize(d);
  for (Index j = 0; j < d; ++j) out.errors(j) = f(j) - full.values(extreme[static_cast<std::size_t>(j)]);

  out.defect = compute_defect(r);
  out.n = r.n1() + r.n2() - out.defect.value;
  const Real qmax = out.q.cwiseAbs().maxCoeff();
  const Real scale = out.zeta > Real(0) ? out.zeta : Real(1);
  out.tau = VectorXc<Real>::Zero(d);
  for (Index j = 0; j < d; ++j) {
    if (std::abs(out.q(j)) <= Real(1e-14) * qmax) continue;
    out.tau(j) = Real(2) * std::conj(out.errors(j) * out.q(j)) / out.q(j) / scale;
  }
  const int deg = static_cast<int>(std::min<Index>(out.n, d - 1));
  const auto rec = build_orthonormal_recurrence<Real>(z, VectorXr<Real>::Ones(d), deg);
  out.Pi = rec->evaluate(z, deg);
  return out;
}

/// Real rows [Re; Im] of (D Pi_n)^T, one column per extreme node.
template <class Real>
MatrixXr<Real> kolmogorov_system(const FirstOrderData<Real>& fo) {
  const MatrixXc<Real> G = (fo.tau.asDiagonal() * fo.Pi).transpose();
  MatrixXr<Real> R(2 * G.rows(), G.cols());
  R.topRows(G.rows()) = G.real();
  R.bottomRows(G.rows()) = G.imag();
  return R;
}

template <class Real = double>
struct KolmogorovResult {
  std::vector<Index> support;
  VectorXr<Real> omega;
  Real residual{0};  // ||omega^T D Pi_n||_2 with D scaled by 1/zeta
  bool unique = false;
  int n = 0;
};

namespace detail {

// Wolfe's minimum-norm-point method over the convex hull of the columns of P.
template <class Real>
VectorXr<Real> min_norm_point(const MatrixXr<Real>& P, int max_iter = 10000) {
  const Index d = P.cols();
  const Real tiny = Real(1e-14);
  const Real scale = std::max(P.colwise().squaredNorm().maxCoeff(), std::numeric_limits<Real>::min());
  Index start = 0;
  P.colwise().squaredNorm().minCoeff(&start);
  std::vector<Index> S{start};
  VectorXr<Real> lam = VectorXr<Real>::Ones(1);

  auto point = [&](const VectorXr<Real>& l) {
    VectorXr<Real> x = VectorXr<Real>::Zero(P.rows());
    for (std::size_t i = 0; i < S.size(); ++i) x += l(static_cast<Index>(i)) * P.col(S[i]);
    return x;
  };

  for (int it = 0; it < max_iter; ++it) {
    const VectorXr<Real> x = point(lam);
    const VectorXr<Real> dots = P.transpose() * x;
    Index j = 0;
    dots.minCoeff(&j);
    if (x.squaredNorm() - dots(j) <= tiny * scale) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    lam.conservativeResize(static_cast<Index>(S.size()));
    lam(lam.size() - 1) = Real(0);

    for (int minor = 0; minor < max_iter; ++minor) {
      const Index s = static_cast<Index>(S.size());
      MatrixXr<Real> PS(P.rows(), s);
      for (Index i = 0; i < s; ++i) PS.col(i) = P.col(S[static_cast<std::size_t>(i)]);
      MatrixXr<Real> K = MatrixXr<Real>::Zero(s + 1, s + 1);
      K.topLeftCorner(s, s) = PS.transpose() * PS;
      K.topRightCorner(s, 1).setOnes();
      K.bottomLeftCorner(1, s).setOnes();
      VectorXr<Real> rhs = VectorXr<Real>::Zero(s + 1);
      rhs(s) = Real(1);
      const VectorXr<Real> alpha = K.completeOrthogonalDecomposition().solve(rhs).head(s);
      if ((alpha.array() > tiny).all()) {
        lam = alpha;
        break;
      }
      Real theta(1);
      for (Index i = 0; i < s; ++i) {
        if (alpha(i) <= tiny) {
          const Real denom = lam(i) - alpha(i);
          if (denom > Real(0)) theta = std::min(theta, lam(i) / denom);
        }
      }
      lam = lam + theta * (alpha - lam);
      std::vector<Index> S2;
      std::vector<Real> l2;
      for (Index i = 0; i < s; ++i) {
        if (lam(i) > tiny) {
          S2.push_back(S[static_cast<std::size_t>(i)]);
          l2.push_back(lam(i));
        }
      }
      if (S2.empty()) {
        S2.push_back(S.front());
        l2.push_back(Real(1));
      }
      S = S2;
      lam = Eigen::Map<VectorXr<Real>>(l2.data(), static_cast<Index>(l2.size()));
      lam /= lam.sum();
    }
  }
  VectorXr<Real> omega = VectorXr<Real>::Zero(d);
  for (std::size_t i = 0; i < S.size(); ++i) omega(S[i]) = std::max(lam(static_cast<Index>(i)), Real(0));
  return omega / omega.sum();
}

}  // namespace detail

/// Nonnegative weights on the extreme set annihilating P_n in the Kolmogorov dual sense.
template <class Real>
KolmogorovResult<Real> kolmogorov_weights(const SampleSet<Real>& samples, const RationalApproximant<Real>& r,
                                          const std::vector<Index>& extreme) {
  const FirstOrderData<Real> fo = first_order_data(samples, r, extreme);
  const MatrixXr<Real> R = kolmogorov_system(fo);
  const Index d = R.cols();
  KolmogorovResult<Real> out;
  out.support = extreme;
  out.n = fo.n;

  if (d == fo.n + 2) {
    out.unique = true;
    Eigen::JacobiSVD<MatrixXr<Real>> svd(R, Eigen::ComputeFullV);
    VectorXr<Real> v = svd.matrixV().col(d - 1);
    if (v.sum() < Real(0)) v = -v;
    const Real top = v.cwiseAbs().maxCoeff();
    if (!(v.sum() > Real(1e-12) * top) || v.minCoeff() < -Real(1e-10) * top) {
      throw Error(ErrorKind::infeasible_sign, "the Kolmogorov nullspace vector has mixed signs");
    }
    v = v.cwiseMax(Real(0));
    out.omega = v / v.sum();
  } else {
    out.omega = detail::min_norm_point<Real>(R);
  }
  out.residual = (R * out.omega).norm();
  return out;
}

/// ||sum_j omega_j tau_j Pi_n(z_j, :)|| for given weights on `extreme`.
template <class Real>
Real kolmogorov_residual(const SampleSet<Real>& samples, const RationalApproximant<Real>& r,
                         const std::vector<Index>& extreme, const VectorXr<Real>& omega) {
  if (omega.size() != static_cast<Index>(extreme.size())) {
    throw Error(ErrorKind::dimension_mismatch, "omega and extreme set differ in length");
  }
  const FirstOrderData<Real> fo = first_order_data(samples, r, extreme);
  return (kolmogorov_system(fo) * omega).norm();
}

// ---------------------------------------------------------------- Ruttan

/// H(x) for one node: [[conj(psi) psi^T, -f conj(psi) phi^T], [.^H, (|f|^2 - level) conj(phi) phi^T]].
template <class Real>
MatrixXc<Real> ruttan_H(const VectorXc<Real>& psi, const VectorXc<Real>& phi, Complex<Real> f, Real level) {
  const Index k1 = psi.size();
  const Index k2 = phi.size();
  MatrixXc<Real> H(k1 + k2, k1 + k2);
  H.topLeftCorner(k1, k1) = psi.conjugate() * psi.transpose();
  H.topRightCorner(k1, k2) = -f * (psi.conjugate() * phi.transpose());
  H.bottomLeftCorner(k2, k1) = H.topRightCorner(k1, k2).adjoint();
  H.bottomRightCorner(k2, k2) = (std::norm(f) - level) * (phi.conjugate() * phi.transpose());
  return H;
}

template <class Real = double>
struct RuttanAggregate {
  MatrixXc<Real> H;
  std::vector<Index> support;
  VectorXr<Real> omega;
  Real level{0};
  BasisDescriptor<Real> basis;
};

template <class Real>
RuttanAggregate<Real> assemble_ruttan_H(const SampleSet<Real>& samples, const std::vector<Index>& support,
                                        const VectorXr<Real>& omega, Real level, const BasisDescriptor<Real>& basis) {
  if (omega.size() != static_cast<Index>(support.size())) {
    throw Error(ErrorKind::dimension_mismatch, "omega and support differ in length");
  }
  const Index d = omega.size();
  VectorXc<Real> z(d);
  for (Index j = 0; j < d; ++j) {
    const Index idx = support[static_cast<std::size_t>(j)];
    if (idx < 0 || idx >= samples.size()) throw Error(ErrorKind::dimension_mismatch, "support index out of range");
    z(j) = samples.nodes()(idx);
  }
  const MatrixXc<Real> Psi = basis.numerator_matrix(z);
  const MatrixXc<Real> Phi = basis.denominator_matrix(z);
  RuttanAggregate<Real> out;
  out.support = support;
  out.omega = omega;
  out.level = level;
  out.basis = basis;
  const Index N = Psi.cols() + Phi.cols();
  out.H = MatrixXc<Real>::Zero(N, N);
  for (Index j = 0; j < d; ++j) {
    const Complex<Real> f = samples.values()(support[static_cast<std::size_t>(j)]);
    out.H += omega(j) * ruttan_H<Real>(Psi.row(j).transpose(), Phi.row(j).transpose(), f, level);
  }
  out.H = hermitian_part<Real>(out.H);
  return out;
}

template <class Real = double>
struct PsdResult {
  Real min_eig{0};
  Real norm{0};      // ||H||_2
  Real relative{0};  // min_eig / max(1, ||H||_2)
  bool pass = false;
};

template <class Real>
PsdResult<Real> psd_check(const MatrixXc<Real>& H, Real psd_tol = Real(1e-10)) {
  Eigen::SelfAdjointEigenSolver<MatrixXc<Real>> es(hermitian_part<Real>(H), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::eigen_solve_failure, "Hermitian eigensolver failed");
  PsdResult<Real> out;
  const VectorXr<Real>& ev = es.eigenvalues();
  out.min_eig = ev.size() ? ev.minCoeff() : Real(0);
  out.norm = ev.size() ? ev.cwiseAbs().maxCoeff() : Real(0);
  const Real s = std::max(Real(1), out.norm);
  out.relative = out.min_eig / s;
  out.pass = out.min_eig >= -psd_tol * s;
  return out;
}

// ---------------------------------------------------------------- second order

struct ProbeOptions {
  int n_directions = 32;
  std::uint64_t seed = 12345;
  double null_tol = 1e-10;          // singular values of K below null_tol * max are treated as zero
  double first_order_slack = 1e-6;  // l1 weight on the LP coefficients
  double lp_tol = 1e-9;
};

template <class Real = double>
struct ProbeResult {
  Real worst_optimum{0};  // divided by max(1, zeta^2); -inf when an LP is unbounded
  int directions_tested = 0;
  Index nullspace_dim = 0;
  Real max_constraint_residual{0};
  bool unbounded = false;
};

template <class Real = double>
struct SecondOrderProblem {
  FirstOrderData<Real> first_order;
  MatrixXr<Real> K;         // d x 2N
  MatrixXr<Real> E;         // d x 2(deg+1)
  MatrixXr<Real> nullspace; // 2N x k
  MatrixXc<Real> Psi;       // d x (n1+1) at the extreme nodes
  MatrixXc<Real> Phi;
  VectorXc<Real> f;

  /// rho(z_j) for the real coefficient vector v = [Re(s;t); Im(s;t)].
  VectorXr<Real> rho(const VectorXr<Real>& v) const {
    const Index k1 = Psi.cols();
    const Index k2 = Phi.cols();
    const Index N = k1 + k2;
    VectorXc<Real> u(N);
    for (Index i = 0; i < N; ++i) u(i) = Complex<Real>(v(i), v(N + i));
    const VectorXc<Real> s = Psi * u.head(k1);
    const VectorXc<Real> t = Phi * u.tail(k2);
    VectorXr<Real> out(s.size());
    for (Index j = 0; j < s.size(); ++j) {
      out(j) = std::norm(f(j) * t(j) - s(j)) - std::norm(t(j)) * std::norm(first_order.errors(j));
    }
    return out;
  }
};

template <class Real>
SecondOrderProblem<Real> second_order_problem(const SampleSet<Real>& samples, const RationalApproximant<Real>& r,
                                              const std::vector<Index>& extreme, Real null_tol = Real(1e-10)) {
  SecondOrderProblem<Real> sp;
  sp.first_order = first_order_data(samples, r, extreme);
  const FirstOrderData<Real>& fo = sp.first_order;
  const Index d = static_cast<Index>(extreme.size());
  VectorXc<Real> z(d);
  sp.f.resize(d);
  for (Index j = 0; j < d; ++j) {
    z(j) = samples.nodes()(extreme[static_cast<std::size_t>(j)]);
    sp.f(j) = samples.values()(extreme[static_cast<std::size_t>(j)]);
  }
  sp.Psi = r.basis().numerator_matrix(z);
  sp.Phi = r.basis().denominator_matrix(z);
  const Index k1 = sp.Psi.cols();
  const Index k2 = sp.Phi.cols();
  const Index N = k1 + k2;

  // g(z_j) = c_j^T u with c_j = [-q psi(z_j); p phi(z_j)].
  MatrixXc<Real> C(d, N);
  C.leftCols(k1) = -(fo.q.asDiagonal() * sp.Psi);
  C.rightCols(k2) = fo.p.asDiagonal() * sp.Phi;
  const MatrixXc<Real> TC = fo.tau.asDiagonal() * C;
  sp.K.resize(d, 2 * N);
  sp.K.leftCols(N) = TC.real();
  sp.K.rightCols(N) = -TC.imag();

  const MatrixXc<Real> DP = fo.tau.asDiagonal() * fo.Pi;
  sp.E.resize(d, 2 * DP.cols());
  sp.E.leftCols(DP.cols()) = DP.real();
  sp.E.rightCols(DP.cols()) = -DP.imag();

  Eigen::JacobiSVD<MatrixXr<Real>> svd(sp.K, Eigen::ComputeFullV);
  const VectorXr<Real>& sv = svd.singularValues();
  const Real top = sv.size() ? sv(0) : Real(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > null_tol * top) ++rank;
  sp.nullspace = svd.matrixV().rightCols(2 * N - rank);
  return sp;
}

/// Samples directions in S and solves min mu s.t. rho + E c <= mu for each.
/// A negative result refutes local optimality; a nonnegative one is only evidence.
template <class Real>
ProbeResult<Real> second_order_probe(const SampleSet<Real>& samples, const RationalApproximant<Real>& r,
                                     const std::vector<Index>& extreme, const ProbeOptions& opts = {}) {
  const SecondOrderProblem<Real> sp = second_order_problem(samples, r, extreme, Real(opts.null_tol));
  const FirstOrderData<Real>& fo = sp.first_order;
  const Index d = static_cast<Index>(extreme.size());
  if (d < fo.n + 2) {
    throw Error(ErrorKind::precondition_violated, "extreme set smaller than n+2");
  }
  ProbeResult<Real> out;
  out.nullspace_dim = sp.nullspace.cols();
  if (out.nullspace_dim == 0 || opts.n_directions <= 0) return out;

  // Eigen-directions of the omega-weighted quadratic form first, then random mixtures.
  VectorXr<Real> omega = VectorXr<Real>::Constant(d, Real(1) / Real(d));
  try {
    omega = kolmogorov_weights(samples, r, extreme).omega;
  } catch (const Error&) {
  }
  const Index k = sp.nullspace.cols();
  MatrixXr<Real> Q = MatrixXr<Real>::Zero(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = a; b < k; ++b) {
      const VectorXr<Real> va = sp.nullspace.col(a);
      const VectorXr<Real> vb = sp.nullspace.col(b);
      const Real qab = Real(0.25) * omega.dot(sp.rho(va + vb) - sp.rho(va - vb));
      Q(a, b) = qab;
      Q(b, a) = qab;
    }
  }
  Eigen::SelfAdjointEigenSolver<MatrixXr<Real>> es(Q);
  std::vector<VectorXr<Real>> dirs;
  for (Index i = 0; i < k && static_cast<int>(dirs.size()) < opts.n_directions; ++i) {
    dirs.push_back(sp.nullspace * es.eigenvectors().col(i));
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (static_cast<int>(dirs.size()) < opts.n_directions) {
    VectorXr<Real> c(k);
    for (Index i = 0; i < k; ++i) c(i) = Real(gauss(rng));
    dirs.push_back(sp.nullspace * c);
  }

  const Index nc = sp.E.cols();
  const Real level = std::max(Real(1), fo.zeta * fo.zeta);
  const Real kscale = std::max(Real(1), sp.K.cwiseAbs().maxCoeff());
  LinearProgram<Real> lp;
  lp.c = VectorXr<Real>::Constant(1 + 2 * nc, Real(opts.first_order_slack));
  lp.c(0) = Real(1);
  lp.A_ub.resize(d, 1 + 2 * nc);
  lp.A_ub.col(0).setConstant(Real(-1));
  lp.A_ub.middleCols(1, nc) = sp.E;
  lp.A_ub.rightCols(nc) = -sp.E;
  lp.lower = VectorXr<Real>::Zero(1 + 2 * nc);
  lp.lower(0) = -std::numeric_limits<Real>::infinity();
  lp.upper = VectorXr<Real>::Constant(1 + 2 * nc, std::numeric_limits<Real>::infinity());

  out.worst_optimum = std::numeric_limits<Real>::infinity();
  for (VectorXr<Real> v : dirs) {
    const Real nv = v.norm();
    if (!(nv > Real(0))) continue;
    v /= nv;
    out.max_constraint_residual =
        std::max(out.max_constraint_residual, (sp.K * v).cwiseAbs().maxCoeff() / kscale);
    lp.b_ub = -sp.rho(v) / level;
    const LpResult<Real> res = solve_lp(lp, Real(opts.lp_tol));
    ++out.directions_tested;
    if (res.status == LpStatus::unbounded) {
      out.unbounded = true;
      out.worst_optimum = -std::numeric_limits<Real>::infinity();
      break;
    }
    if (res.status != LpStatus::optimal) throw Error(ErrorKind::lp_failure, "probe LP is infeasible");
    out.worst_optimum = std::min(out.worst_optimum, res.x(0));
  }
  if (out.directions_tested == 0) out.worst_optimum = Real(0);
  return out;
}

// ---------------------------------------------------------------- orchestration

enum class Verdict { pass, fail, skipped };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: return "skipped";
  }
  return "skipped";
}

struct CertifyOptions {
  double delta = 1e-8;
  double psd_tol = 1e-10;
  double gap_tol = 1e-8;
  double kolmogorov_tol = 1e-6;
  double probe_tol = 1e-8;
  int second_order_directions = 0;  // 0 skips the probe
  ProbeOptions probe;
  double exact_tol = 1e-12;         // zeta <= exact_tol * max|f| counts as an exact fit
};

template <class Real = double>
struct CertificateReport {
  Real zeta{0};
  std::optional<Real> gap;
  Real kolmogorov_residual{0};
  bool kolmogorov_unique = false;
  Real ruttan_min_eig{0};  // relative to max(1, ||H||_2)
  Real ruttan_norm{0};
  std::optional<Real> second_order_min;
  int directions_tested = 0;
  Real eta_low{0};
  Real eta_high{0};
  Verdict kolmogorov = Verdict::skipped;
  Verdict ruttan = Verdict::skipped;
  Verdict strong_duality = Verdict::skipped;
  Verdict second_order = Verdict::skipped;
  Index extreme_count = 0;
  bool minimal_case = false;
  bool exact_fit = false;
  int defect = 0;
  bool zero_numerator = false;
  std::vector<Index> extreme;
  std::vector<Index> removable;
  VectorXr<Real> omega;
  std::string omega_source;
  std::string global;  // certified | refuted | inconclusive
  std::vector<std::string> notes;

  bool all_pass() const {
    for (Verdict v : {kolmogorov, ruttan, strong_duality, second_order}) {
      if (v == Verdict::fail) return false;
    }
    return true;
  }
};

/// Runs every certificate that applies. Sub-test failures are recorded, not thrown.
template <class Real>
CertificateReport<Real> certify(const SampleSet<Real>& samples, const RationalApproximant<Real>& r,
                                const std::optional<std::type_identity_t<WeightVector<Real>>>& w = std::nullopt,
                                const std::optional<std::type_identity_t<Real>>& d_value = std::nullopt,
                                const CertifyOptions& opts = {}) {
  CertificateReport<Real> rep;
  const ErrorProfile<Real> prof = error_profile(samples, r, Real(opts.delta));
  rep.zeta = prof.max_error;
  rep.eta_high = prof.max_error;
  rep.extreme = prof.extreme;
  rep.extreme_count = static_cast<Index>(prof.extreme.size());
  rep.removable = prof.removable;
  const Defect def = compute_defect(r);
  rep.defect = def.value;
  rep.zero_numerator = def.zero_numerator;
  rep.minimal_case = rep.extreme_count == r.n1() + r.n2() + 2 - def.value;
  if (!rep.removable.empty()) rep.notes.push_back("common factor cancelled at a node; irreducibility not guaranteed");

  const Real fscale = samples.size() ? samples.values().cwiseAbs().maxCoeff() : Real(0);
  if (prof.exact_fit || prof.max_error <= Real(opts.exact_tol) * (fscale > Real(0) ? fscale : Real(1))) {
    rep.exact_fit = true;
    rep.gap = Real(0);
    rep.eta_low = prof.max_error;
    rep.kolmogorov = rep.ruttan = rep.strong_duality = Verdict::pass;
    if (opts.second_order_directions > 0) {
      rep.second_order = Verdict::pass;
      rep.second_order_min = Real(0);
    }
    rep.global = "certified";
    return rep;
  }

  std::optional<KolmogorovResult<Real>> kol;
  try {
    kol = kolmogorov_weights(samples, r, prof.extreme);
    rep.kolmogorov_residual = kol->residual;
    rep.kolmogorov_unique = kol->unique;
    rep.kolmogorov = kol->residual <= Real(opts.kolmogorov_tol) ? Verdict::pass : Verdict::fail;
  } catch (const Error& e) {
    rep.kolmogorov = Verdict::fail;
    rep.kolmogorov_residual = std::numeric_limits<Real>::infinity();
    rep.notes.push_back(std::string("kolmogorov: ") + e.what());
  }

  // Ruttan weights: the Lawson weights on the band when supplied, else Kolmogorov.
  std::vector<Index> support;
  VectorXr<Real> omega;
  if (w) {
    const VectorXr<Real> full = w->full(samples.size());
    std::vector<Real> vals;
    for (Index j : prof.extreme) {
      if (full(j) > Real(0)) {
        support.push_back(j);
        vals.push_back(full(j));
      }
    }
    if (!support.empty()) {
      omega = Eigen::Map<VectorXr<Real>>(vals.data(), static_cast<Index>(vals.size()));
      omega /= omega.sum();
      rep.omega_source = "lawson";
    }
  }
  if (support.empty() && kol) {
    for (Index j = 0; j < kol->omega.size(); ++j) {
      if (kol->omega(j) > Real(0)) {
        support.push_back(prof.extreme[static_cast<std::size_t>(j)]);
      }
    }
    omega.resize(static_cast<Index>(support.size()));
    Index k = 0;
    for (Index j = 0; j < kol->omega.size(); ++j) {
      if (kol->omega(j) > Real(0)) omega(k++) = kol->omega(j);
    }
    rep.omega_source = "kolmogorov";
  }
  rep.omega = omega;

  if (!support.empty()) {
    try {
      const RuttanAggregate<Real> agg =
          assemble_ruttan_H(samples, support, omega, prof.max_error * prof.max_error, r.basis());
      const PsdResult<Real> psd = psd_check<Real>(agg.H, Real(opts.psd_tol));
      rep.ruttan_min_eig = psd.relative;
      rep.ruttan_norm = psd.norm;
      rep.ruttan = psd.pass ? Verdict::pass : Verdict::fail;
    } catch (const Error& e) {
      rep.ruttan = Verdict::fail;
      rep.notes.push_back(std::string("ruttan: ") + e.what());
    }

    try {
      Real low2;
      if (d_value) {
        low2 = *d_value;
      } else {
        const WeightVector<Real> wr(omega, support);
        low2 = eval_dual(samples, wr, r.basis()).d_value;
      }
      rep.eta_low = std::sqrt(std::max(low2, Real(0)));
      rep.gap = duality_gap(low2, prof.max_error);
      rep.strong_duality = *rep.gap <= Real(opts.gap_tol) ? Verdict::pass : Verdict::fail;
    } catch (const Error& e) {
      rep.strong_duality = Verdict::fail;
      rep.notes.push_back(std::string("strong duality: ") + e.what());
    }
  } else {
    rep.ruttan = Verdict::fail;
    rep.strong_duality = Verdict::fail;
    rep.notes.push_back("no positive weights on the extreme set");
  }

  if (opts.second_order_directions > 0) {
    try {
      ProbeOptions po = opts.probe;
      po.n_directions = opts.second_order_directions;
      const ProbeResult<Real> pr = second_order_probe(samples, r, prof.extreme, po);
      rep.second_order_min = pr.worst_optimum;
      rep.directions_tested = pr.directions_tested;
      rep.second_order = pr.worst_optimum >= -Real(opts.probe_tol) ? Verdict::pass : Verdict::fail;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::precondition_violated) {
        rep.second_order = Verdict::skipped;
      } else {
        rep.second_order = Verdict::fail;
      }
      rep.notes.push_back(std::string("second order: ") + e.what());
    }
  }

  if (rep.ruttan == Verdict::pass) {
    rep.global = "certified";
  } else if ((rep.minimal_case && rep.ruttan == Verdict::fail) || rep.kolmogorov == Verdict::fail ||
             rep.second_order == Verdict::fail) {
    rep.global = "refuted";
  } else {
    rep.global = "inconclusive";
  }
  return rep;
}

}  // namespace ratmm

#endif  // RATMM_CERTIFICATES_HPP
