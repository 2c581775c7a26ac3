#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "ratmm/cli/problem_io.hpp"
#include "ratmm/ratmm.hpp"

using namespace ratmm;
using cd = std::complex<double>;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;
using MatC = Eigen::MatrixXcd;
using Clock = std::chrono::steady_clock;

namespace {

struct Residuals {
  double p = 0.0;
  double q = 0.0;
  long calls = 0;
  void add(double rp, double rq) {
    p = std::max(p, rp);
    q = std::max(q, rq);
    ++calls;
  }
  void add(const LawsonOutcome<double>& o) {
    p = std::max(p, o.max_residual_p);
    q = std::max(q, o.max_residual_q);
    calls += o.iterations;
  }
};

Residuals g_residuals;
std::set<std::string> g_failed;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("%s criterion %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) g_failed.insert(id);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

RationalApproximant<double> mono(VecC a, VecC b) {
  const int n1 = static_cast<int>(a.size()) - 1;
  const int n2 = static_cast<int>(b.size()) - 1;
  return RationalApproximant<double>(std::move(a), std::move(b), BasisDescriptor<double>::monomial(n1, n2));
}

struct Solved {
  SampleSet<double> samples;
  LawsonOutcome<double> outcome;
};

// ---------------------------------------------------------------- 1

Solved criterion_1() {
  const SampleSet<double> s = cli::sample_circle(256, 1.0, "x^3+x").samples();
  LawsonConfig cfg;
  cfg.beta = 1.0;
  cfg.eps_r = 1e-12;
  cfg.maxit = 1000000;
  const auto t0 = Clock::now();
  const auto out = d_lawson(s, 0, 1, cfg);
  const auto rep = certify<double>(s, out.approximant, out.final_w, out.d_value);
  const double secs = seconds_since(t0);
  g_residuals.add(out);

  const auto m = out.approximant.to_monomial();
  const cd c = m.a()(0) / m.b()(1);
  const double target_zeta = 1.76023;
  const double target_c = 2.0 / (std::sqrt(33.0) + 1.0);
  const bool zeta_ok = std::abs(out.zeta - target_zeta) <= 1e-3;
  const bool coef_ok = std::abs(c - target_c) <= 1e-3 && std::abs(m.b()(0)) <= 1e-3 * std::abs(m.b()(1));
  const bool gap_ok = out.gap <= 1e-8;
  const bool ruttan_ok = rep.ruttan == Verdict::pass;
  report("1", zeta_ok && coef_ok && gap_ok && ruttan_ok && secs < 5.0,
         fmt("unit circle (0,1): zeta=%.9f (|d|=%.2e %s), c=%.6f%+.1ei (|d|=%.2e %s), gap=%.2e %s, ruttan=%s, "
             "iterations=%d, %.2fs %s",
             out.zeta, std::abs(out.zeta - target_zeta), zeta_ok ? "ok" : "BAD", c.real(), c.imag(),
             std::abs(c - target_c), coef_ok ? "ok" : "BAD", out.gap, gap_ok ? "ok" : "BAD", to_string(rep.ruttan),
             out.iterations, secs, secs < 5.0 ? "ok" : "BAD"));
  return {s, out};
}

// ---------------------------------------------------------------- 2

void criterion_2() {
  const auto cand = oracle::disk_candidate();
  const bool four_digits = std::abs(cand.a - cd(0.2993, -0.068)) <= 1e-3 && std::abs(std::abs(cand.z0) - 1.1194) <= 1e-3 &&
                           std::abs(std::arg(cand.z0) - 1.1490) <= 1e-3 && std::abs(cand.phi[0] - 1.1335) <= 1e-3 &&
                           std::abs(cand.phi[1] - 3.3449) <= 1e-3 && std::abs(cand.phi[2] - 6.0125) <= 1e-3 &&
                           std::abs(cand.level - 1.9274) <= 1e-3;
  const int grid = 256;
  VecC x(grid + 3), f(grid + 3);
  for (int j = 0; j < grid; ++j) x(j) = std::polar(1.0, 2.0 * std::numbers::pi * j / grid);
  for (int k = 0; k < 3; ++k) x(grid + k) = std::polar(1.0, cand.phi[static_cast<std::size_t>(k)]);
  for (Index j = 0; j < x.size(); ++j) f(j) = x(j) * x(j) * x(j) + x(j);
  const SampleSet<double> s(x, f);
  const auto r = mono(VecC::Constant(1, cand.a), (VecC(2) << -cand.z0, 1.0).finished());

  const auto rep = certify<double>(s, r);
  bool unique = false;
  double min_eig = 0.0, norm = 0.0;
  try {
    const auto k = kolmogorov_weights(s, r, rep.extreme);
    unique = k.unique && k.omega.minCoeff() > 0.0 && k.residual <= 1e-6;
    const auto agg = assemble_ruttan_H(s, rep.extreme, k.omega, rep.zeta * rep.zeta, r.basis());
    const auto psd = psd_check<double>(agg.H);
    min_eig = psd.min_eig;
    norm = psd.norm;
  } catch (const Error& e) {
    std::printf("  kolmogorov: %s\n", e.what());
  }
  const bool psd_fail = min_eig < -1e-6 * norm;
  report("2", four_digits && unique && rep.minimal_case && rep.extreme_count == 3 && psd_fail && rep.global == "refuted",
         fmt("disk candidate: polished a=%.5f%+.5fi |z0|=%.5f arg=%.5f level=%.5f (4-digit match %s), d=%lld, "
             "unique omega %s, minimal_case=%s, min_eig=%.4e, ||H||=%.4e, global=%s",
             cand.a.real(), cand.a.imag(), std::abs(cand.z0), std::arg(cand.z0), cand.level, four_digits ? "ok" : "BAD",
             static_cast<long long>(rep.extreme_count), unique ? "ok" : "BAD", rep.minimal_case ? "true" : "false",
             min_eig, norm, rep.global.c_str()));
}

// ---------------------------------------------------------------- 3

Solved criterion_3() {
  const SampleSet<double> s = cli::sample_interval(1001, -1.0, 1.0, "x^2").samples();
  LawsonConfig cfg;
  cfg.eps_r = 1e-10;
  cfg.maxit = 2000000;
  const auto t0 = Clock::now();
  const auto out = d_lawson(s, 1, 0, cfg);
  const double secs = seconds_since(t0);
  g_residuals.add(out);
  const bool ok = std::abs(out.zeta - 0.5) <= 1e-8 && out.gap <= 1e-10;
  report("3", ok,
         fmt("x^2 on 1001 Chebyshev points, (1,0): zeta=%.12f (|d|=%.2e), gap=%.2e, iterations=%d, %.1fs", out.zeta,
             std::abs(out.zeta - 0.5), out.gap, out.iterations, secs));
  return {s, out};
}

// ---------------------------------------------------------------- 4

void criterion_4() {
  testgen::Gen g(4004);
  double worst = 0.0;
  int bad = 0;
  LawsonConfig cfg;
  cfg.eps_r = 1e-12;
  cfg.maxit = 1000000;
  for (int t = 0; t < 100; ++t) {
    const VecC x = g.distinct_nodes(10, 1.0);
    const VecC f = g.complex_vector(10);
    const auto out = d_lawson(SampleSet<double>(x, f), 0, 0, cfg);
    g_residuals.add(out);
    std::vector<cd> pts(f.data(), f.data() + f.size());
    const double radius = oracle::enclosing_circle(pts).radius;
    const double err = std::abs(out.zeta - radius);
    worst = std::max(worst, err);
    if (err > 1e-6) ++bad;
  }
  report("4", bad == 0, fmt("100 Chebyshev-centre instances: max |zeta - R| = %.2e, failures=%d", worst, bad));
}

// ---------------------------------------------------------------- 5

void criterion_5() {
  testgen::Gen g(5005);
  double worst = -1e300;
  int bad = 0, poles = 0;
  for (int t = 0; t < 200; ++t) {
    const int n1 = g.integer(0, 4), n2 = g.integer(0, 4);
    const int m = g.integer(n1 + n2 + 2, 50);
    const VecC x = g.distinct_nodes(m, 1.0, 1e-3);
    VecC f(m);
    const int kind = g.integer(0, 2);
    for (int j = 0; j < m; ++j) {
      if (kind == 0) f(j) = g.complex_gauss();
      else if (kind == 1) f(j) = std::exp(2.0 * x(j));
      else f(j) = std::abs(x(j).real()) + cd(0, 1) * x(j) * x(j);
    }
    const SampleSet<double> s(x, f);
    const auto w = WeightVector<double>::from_full(g.simplex(m, 0.3));
    const auto res = eval_dual(s, w, BasisDescriptor<double>::monomial(n1, n2));
    g_residuals.add(res.residual_p, res.residual_q);
    double zeta;
    try {
      zeta = error_profile(s, res.approximant(), 0.0).max_error;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::denominator_vanishes) throw;
      ++poles;
      continue;  // zeta is infinite
    }
    const double excess = std::sqrt(res.d_value) - zeta - 1e-10 * std::max(1.0, zeta);
    worst = std::max(worst, excess);
    if (excess > 0.0) ++bad;
  }
  report("5", bad == 0,
         fmt("200 weak-duality samples: max(sqrt d - zeta - tol) = %.2e, violations=%d, poles at nodes=%d", worst, bad,
             poles));
}

// ---------------------------------------------------------------- 6

void criterion_6() {
  testgen::Gen g(6006);
  int bad = 0, max_it = 0;
  double worst_gap = 0.0, worst_zeta = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n1 = g.integer(0, 3), n2 = g.integer(0, 3);
    const int m = n1 + n2 + 2 + g.integer(0, 30);
    const VecC x = g.distinct_nodes(m, 1.0, 1e-2);
    const VecC a = g.complex_vector(n1 + 1);
    const VecC b = g.poly_with_roots_outside(n2, 1.5, 3.0);
    const VecC f = testgen::horner(a, x).cwiseQuotient(testgen::horner(b, x));
    const auto out = d_lawson(SampleSet<double>(x, f), n1, n2);
    g_residuals.add(out);
    const double scale = f.cwiseAbs().maxCoeff();
    worst_gap = std::max(worst_gap, out.gap);
    worst_zeta = std::max(worst_zeta, out.zeta / scale);
    max_it = std::max(max_it, out.iterations);
    if (!out.converged || out.gap > 1e-10 || out.zeta > 1e-8 * scale || out.iterations > 2) ++bad;
  }
  report("6", bad == 0,
         fmt("50 exactly representable targets: max gap=%.2e, max zeta/scale=%.2e, max iterations=%d, failures=%d",
             worst_gap, worst_zeta, max_it, bad));
}

// ---------------------------------------------------------------- 7

void criterion_7() {
  testgen::Gen g(7007);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n1 = g.integer(0, 5), n2 = g.integer(0, 5);
    const int m = g.integer(1, 40);
    const VecC x = g.distinct_nodes(m, 1.5);
    const VecC f = g.complex_vector(m) * g.uniform(0.1, 10.0);
    const VecR w = g.simplex(m, 0.2);
    const double lambda = g.uniform(-5.0, 20.0);
    const auto bd = g.integer(0, 1) == 0 || m < std::max(n1, n2) + 1
                        ? BasisDescriptor<double>::monomial(n1, n2)
                        : BasisDescriptor<double>::orthonormal(x, VecR::Ones(m), n1, n2);
    const auto bm = build_basis_matrices<double>(x, bd);
    const auto P = assemble_pencil<double>(bm, f, w, lambda);
    std::vector<Index> all(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) all[static_cast<std::size_t>(j)] = j;
    const auto H = assemble_ruttan_H(SampleSet<double>(x, f), all, w, lambda, bd).H;
    const double scale = std::max(1.0, std::max(P.A.cwiseAbs().maxCoeff(), std::abs(lambda) * P.B.cwiseAbs().maxCoeff()));
    worst = std::max(worst, (P.shifted - H).cwiseAbs().maxCoeff() / scale);
  }
  report("7", worst <= 1e-12, fmt("50 pencil/Ruttan identities: max relative entry difference = %.2e", worst));
}

// ---------------------------------------------------------------- 8 and 10

struct Instance {
  SampleSet<double> samples;
  LawsonOutcome<double> outcome;
  int n1, n2;
};

std::vector<Instance> converged_instances(int want, int& attempts) {
  testgen::Gen g(8008);
  std::vector<Instance> out;
  LawsonConfig cfg;
  cfg.eps_r = 1e-10;
  cfg.maxit = 100000;
  attempts = 0;
  while (static_cast<int>(out.size()) < want && attempts < 400) {
    ++attempts;
    const int n1 = g.integer(0, 2), n2 = g.integer(0, 2);
    const int m = g.integer(n1 + n2 + 6, 40);
    VecC x(m);
    if (g.integer(0, 1) == 0) {
      const double shift = g.uniform(0.0, 1.0);
      for (int j = 0; j < m; ++j) x(j) = std::polar(1.0, 2.0 * std::numbers::pi * (j + shift) / m);
    } else {
      x = g.distinct_nodes(m, 1.0, 0.02);
    }
    const cd pole = std::polar(g.uniform(1.3, 2.5), g.uniform(0.0, 2.0 * std::numbers::pi));
    const cd c1 = g.complex_gauss(), c2 = g.complex_gauss();
    VecC f(m);
    for (int j = 0; j < m; ++j) f(j) = c1 * std::exp(x(j)) + c2 / (x(j) - pole) + 0.2 * x(j) * x(j) * x(j);
    SampleSet<double> s(x, f);
    LawsonOutcome<double> o;
    try {
      o = d_lawson(s, n1, n2, cfg);
    } catch (const Error&) {
      continue;
    }
    g_residuals.add(o);
    if (!o.converged || o.zeta <= 1e-8 * f.cwiseAbs().maxCoeff()) continue;
    out.push_back({std::move(s), std::move(o), n1, n2});
  }
  return out;
}

void criterion_8(const std::vector<Instance>& inst, int attempts) {
  int differ = 0, passes = 0;
  for (const auto& in : inst) {
    const auto& r = in.outcome.approximant;
    const auto target = BasisDescriptor<double>::orthonormal(in.samples.nodes(), VecR::Ones(in.samples.size()), in.n1, in.n2);
    const auto rm = certify<double>(in.samples, r, in.outcome.final_w, in.outcome.d_value);
    const auto ro = certify<double>(in.samples, r.in_basis(target), in.outcome.final_w, in.outcome.d_value);
    if (rm.ruttan != ro.ruttan) ++differ;
    if (rm.ruttan == Verdict::pass) ++passes;
  }
  report("8", inst.size() == 20 && differ == 0,
         fmt("%zu converged instances (%d attempts): verdict mismatches=%d, pass in both=%d", inst.size(), attempts,
             differ, passes));
}

void criterion_10(const std::vector<Instance>& inst, const Solved& circle, const Solved& poly) {
  testgen::Gen g(10010);
  int flagged = 0, tested = 0;
  double min_worsening = 1e300;
  for (const auto& in : inst) {
    if (tested == 20) break;
    const auto best = in.outcome.approximant.to_monomial();
    const double zstar = in.outcome.zeta;
    RationalApproximant<double> bad;
    double zbad = 0.0;
    bool found = false;
    for (double eps = 1e-3; eps < 10.0 && !found; eps *= 2.0) {
      for (int k = 0; k < 8 && !found; ++k) {
        VecC a = best.a(), b = best.b();
        for (Index i = 0; i < a.size(); ++i) a(i) += eps * g.complex_gauss() * std::max(1.0, std::abs(a(i)));
        for (Index i = 0; i < b.size(); ++i) b(i) += eps * g.complex_gauss() * std::max(1.0, std::abs(b(i)));
        try {
          const auto cand = mono(a, b);
          const double z = error_profile(in.samples, cand, 0.0).max_error;
          if (z >= zstar + 1e-3) {
            bad = cand;
            zbad = z;
            found = true;
          }
        } catch (const Error&) {
        }
      }
    }
    if (!found) continue;
    ++tested;
    min_worsening = std::min(min_worsening, zbad - zstar);
    CertifyOptions co;
    co.second_order_directions = 32;
    const auto rep = certify<double>(in.samples, bad, std::nullopt, std::nullopt, co);
    if (rep.kolmogorov == Verdict::fail || rep.second_order == Verdict::fail) ++flagged;
  }

  ProbeOptions po;
  po.n_directions = 32;
  auto probe = [&](const Solved& s) {
    const auto band = error_profile(s.samples, s.outcome.approximant, 1e-8).extreme;
    return second_order_probe(s.samples, s.outcome.approximant, band, po).worst_optimum;
  };
  const double p1 = probe(circle);
  const double p3 = probe(poly);
  report("10", tested == 20 && flagged == tested && p1 >= -1e-8 && p3 >= -1e-8,
         fmt("perturbed candidates flagged %d/%d (min zeta increase %.2e); probe worst optimum: circle %.2e, x^2 %.2e",
             flagged, tested, min_worsening, p1, p3));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expected.insert(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--expect-fail ID]...\n", argv[0]);
      return 2;
    }
  }

  try {
    const Solved circle = criterion_1();
    criterion_2();
    const Solved poly = criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    int attempts = 0;
    const auto inst = converged_instances(20, attempts);
    criterion_8(inst, attempts);
    report("9", g_residuals.p <= 1e-10 && g_residuals.q <= 1e-10,
           fmt("inner-solve residuals over %ld solves: max r1=%.2e, max r2=%.2e", g_residuals.calls, g_residuals.p,
               g_residuals.q));
    criterion_10(inst, circle, poly);
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }

  std::printf("%zu criteria failed", g_failed.size());
  for (const auto& id : g_failed) std::printf(" %s", id.c_str());
  std::printf("\n");
  if (!expected.empty()) std::printf("expected failures: %zu\n", expected.size());
  return g_failed == expected ? 0 : 1;
}
