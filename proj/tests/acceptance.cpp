// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "halflap/cli.hpp"
#include "halflap/extension.hpp"
#include "halflap/nonlinear.hpp"
#include "halflap/verification.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace halflap;
using std::numbers::pi;

namespace {

// Tolerances, fixed here and nowhere else.
constexpr double kIdentityTol = 1e-15;            // 1: relative, coefficientwise
constexpr double kRuntime1 = 0.1;                 // 1: seconds
constexpr double kEnergyRelTol = 0.01;            // 2
constexpr double kRuntime2 = 10.0;                // 2
constexpr double kDtnRatioLo = 1.7;               // 3
constexpr double kDtnRatioHi = 2.3;               // 3
constexpr double kLaplaceRelTol = 1e-3;           // 4
constexpr double kLaplaceDrop = 3.0;              // 4
constexpr double kResidual1D = 1e-8;              // 5
constexpr double kSymmetryRel = 1e-8;             // 5
constexpr double kI0RelTol = 1e-6;                // 5
constexpr double kRuntime5 = 1.0;                 // 5
constexpr double kResidual2D = 1e-6;              // 6
constexpr double kRuntime6 = 30.0;                // 6
constexpr double kWeakMpRel = 1e-8;               // 8
constexpr double kExtremalLo = 0.99;              // 9
constexpr double kExtremalHi = 1.03;              // 9
constexpr double kExtremalEpsAgree = 0.01;        // 9
constexpr double kRuntime9 = 10.0;                // 9
constexpr double kHardyChange = 0.05;             // 10

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %2d %-28s %s  %s\n", id, name, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DomainPtr interval(double L, int N) { return std::make_shared<DiscreteDomain>(make_interval(L, N)); }
DomainPtr square(int N) { return std::make_shared<DiscreteDomain>(make_rectangle(1.0, 1.0, N, N)); }

SpectralFn from(const BasisPtr& b, const std::vector<double>& c) {
  return {b, Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()))};
}

double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = make_basis(interval(1.0, 256), 64);
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto f = from(b, oracle::random_coeffs(rng, 64));
    worst = std::max(worst, rel_diff(apply_B_half(apply_A_half(f)).coeffs(), f.coeffs()));
    worst = std::max(worst, rel_diff(apply_B_half(apply_B_half(f)).coeffs(), apply_inv_laplacian(f).coeffs()));
  }
  for (int k = 0; k < 64; ++k) {
    const auto e = SpectralFn::unit(b, k);
    Eigen::VectorXd want = Eigen::VectorXd::Zero(64);
    want[k] = std::sqrt(b->lambdas()[k]);
    worst = std::max(worst, rel_diff(apply_A_half(e).coeffs(), want));
  }
  const double secs = seconds_since(t0);
  report(1, "operator identities", worst <= kIdentityTol && secs < kRuntime1,
         fmt("max rel defect %.2e (tol %.0e), %.3fs (limit %.1fs)", worst, kIdentityTol, secs, kRuntime1));
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const int K = 8;
  const auto b = make_basis(interval(1.0, 64), K);
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto c = oracle::random_coeffs(rng, K);
    const double quad = oracle::cylinder_energy(c, 1.0, 6.0 / pi, 512, 512);
    const double exact = dirichlet_energy(from(b, c));
    worst = std::max(worst, std::abs(quad - exact) / exact);
  }
  const double secs = seconds_since(t0);
  report(2, "energy identity", worst <= kEnergyRelTol && secs < kRuntime2,
         fmt("max rel gap %.2e (tol %.0e), %.2fs (limit %.0fs)", worst, kEnergyRelTol, secs, kRuntime2));
}

void criterion3() {
  const auto b = make_basis(interval(1.0, 256), 16);
  std::mt19937_64 rng(303);
  std::vector<SpectralFn> fs{SpectralFn::unit(b, 0)};
  for (int t = 0; t < 5; ++t) fs.push_back(from(b, oracle::random_coeffs(rng, 16, 2.0)));
  double lo = 1e300;
  double hi = 0.0;
  for (const auto& f : fs) {
    const Eigen::VectorXd exact = synthesize(apply_A_half(f)).values();
    auto err = [&](double h) { return (dtn_fd(f, h).values() - exact).cwiseAbs().maxCoeff(); };
    const double e1 = err(1e-2);
    const double e2 = err(5e-3);
    const double e3 = err(2.5e-3);
    for (double r : {e1 / e2, e2 / e3}) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  report(3, "DtN first-order convergence", lo >= kDtnRatioLo && hi <= kDtnRatioHi,
         fmt("halving ratios in [%.4f, %.4f] (need [%.1f, %.1f])", lo, hi, kDtnRatioLo, kDtnRatioHi));
}

void criterion4() {
  std::mt19937_64 rng(404);
  const auto c = oracle::random_coeffs(rng, 8);
  auto err_at = [&](int N) {
    const auto b = make_basis(interval(1.0, N), 8);
    const auto f = from(b, c);
    const auto exact = synthesize(apply_A_half(apply_A_half(f)));
    return (neg_laplacian_fd(synthesize(f)).values() - exact.values()).cwiseAbs().maxCoeff() / exact.sup_norm();
  };
  const double e1 = err_at(1024);
  const double e2 = err_at(2048);
  report(4, "Laplacian consistency", e1 <= kLaplaceRelTol && e1 / e2 >= kLaplaceDrop,
         fmt("rel err %.2e at N=1024 (tol %.0e), drop x%.3f at N=2048 (need >= %.0f)", e1, kLaplaceRelTol,
             e1 / e2, kLaplaceDrop));
}

void criterion5() {
  SolveConfig cfg;
  cfg.p = 2.0;
  cfg.modes = 64;
  cfg.tol_residual = kResidual1D;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = solve(interval(1.0, 256), cfg);
  const double secs = seconds_since(t0);

  const bool mono = check_monotonicity(r.solution_grid, 0).passed;
  const auto hopf = check_hopf(r.solution_grid);
  const double i0_rel = std::abs(r.I0 - oracle::kReferenceI0_p2) / oracle::kReferenceI0_p2;
  const bool ok = r.converged && r.residual_inf <= kResidual1D && r.positivity_min > 0.0 &&
                  r.symmetry_defect <= kSymmetryRel * r.sup_norm && mono && hopf.passed && i0_rel <= kI0RelTol &&
                  secs < kRuntime5;
  report(5, "nonlinear solve 1D", ok,
         fmt("converged=%d residual %.2e (tol %.0e) min u %.3e sym %.1e mono=%d hopf %.3f I0 rel %.1e "
             "(tol %.0e) %.3fs [pointwise defect %.2e]",
             r.converged, r.residual_inf, kResidual1D, r.positivity_min, r.symmetry_defect / r.sup_norm, mono,
             hopf.metric, i0_rel, kI0RelTol, secs, r.truncation_defect));
}

void criterion6() {
  SolveConfig cfg;
  cfg.p = 2.0;
  cfg.modes = 60;
  cfg.tol_residual = kResidual2D;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = solve(square(64), cfg);
  const double secs = seconds_since(t0);
  const auto s0 = check_symmetry(r.solution_grid, 0);
  const auto s1 = check_symmetry(r.solution_grid, 1);
  const auto pos = check_positivity(r.solution_grid);
  const auto hopf = check_hopf(r.solution_grid);
  const bool ok = r.converged && r.residual_inf <= kResidual2D && s0.passed && s1.passed && pos.passed &&
                  hopf.passed && secs < kRuntime6;
  report(6, "nonlinear solve 2D", ok,
         fmt("converged=%d residual %.2e (tol %.0e) sym %.1e/%.1e min u %.3e hopf %.3f %.2fs", r.converged,
             r.residual_inf, kResidual2D, s0.metric, s1.metric, pos.metric, hopf.metric, secs));
}

void criterion7() {
  SolveConfig cfg;
  cfg.modes = 60;
  cfg.tol_residual = 1e-6;
  const auto dom = square(64);
  const std::vector<double> ps{1.5, 2.0, 2.5};
  bool ok = true;
  std::string detail;
  try {
    for (const auto& row : sweep(dom, ps, cfg)) {
      ok = ok && row.converged && std::isfinite(row.sup_norm);
      detail += fmt("p=%.1f sup %.4g conv=%d; ", row.p, row.sup_norm, row.converged);
    }
    SolveConfig near = cfg;
    near.allow_near_critical = true;
    const std::vector<double> crit{2.9};
    const auto rows = sweep(dom, crit, near);
    const bool reported = rows.size() == 1 && rows[0].error.empty() && std::isfinite(rows[0].sup_norm);
    ok = ok && reported;
    detail += fmt("p=2.9 reported=%d sup %.4g %s", reported, rows[0].sup_norm,
                  rows[0].converged ? "converged" : "flagged");
  } catch (const std::exception& e) {
    ok = false;
    detail += std::string("threw: ") + e.what();
  }
  report(7, "a-priori sweep", ok, detail);
}

void criterion8() {
  const int N = 256;
  const int K = 64;
  const auto b = make_basis(interval(1.0, N), K);
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst_lib = 1e300;
  double worst_oracle = 1e300;
  bool all = true;
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd g(N - 1);
    for (auto& v : g) v = uni(rng);
    const auto r = check_weak_mp(b, GridFn(b->domain_ptr(), g));
    all = all && r.passed;
    worst_lib = std::min(worst_lib, r.metric / g.maxCoeff());
    worst_oracle = std::min(worst_oracle, oracle::dense_B_apply(N, K, g).minCoeff() / g.maxCoeff());
  }
  const bool ok = all && worst_lib >= -kWeakMpRel && worst_oracle >= -kWeakMpRel;
  report(8, "weak maximum principle", ok,
         fmt("worst min(Bg)/sup g: library %.3e, dense oracle %.3e (floor %.0e)", worst_lib, worst_oracle,
             -kWeakMpRel));
}

void criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  const double s0 = best_trace_constant(2);
  const double q1 = extremal_quotient({2, 1.0, {}}, 200.0, 4096);
  const double q2 = extremal_quotient({2, 2.0, {}}, 200.0, 4096);
  const double secs = seconds_since(t0);
  const double agree = std::abs(q2 - q1) / q1;
  const bool ok = q1 >= kExtremalLo * s0 && q1 <= kExtremalHi * s0 && agree <= kExtremalEpsAgree && secs < kRuntime9;
  report(9, "trace-Sobolev extremal", ok,
         fmt("Q(1)/S0 %.5f (need [%.2f, %.2f]) eps 1 vs 2 gap %.4f (tol %.2f) %.2fs", q1 / s0, kExtremalLo,
             kExtremalHi, agree, kExtremalEpsAgree, secs));
}

void criterion10() {
  const int K = 16;
  const auto coarse = make_basis(interval(1.0, 512), K);
  const auto fine = make_basis(interval(1.0, 1024), K);
  std::mt19937_64 rng(1010);
  double worst = 0.0;
  double qmin = 1e300;
  double qmax = 0.0;
  bool sane = true;
  for (int t = 0; t < 50; ++t) {
    const auto c = oracle::random_coeffs(rng, K);
    const double q1 = hardy_quotient(from(coarse, c));
    const double q2 = hardy_quotient(from(fine, c));
    sane = sane && std::isfinite(q1) && std::isfinite(q2) && q1 > 0.0 && q2 > 0.0;
    worst = std::max(worst, std::abs(q2 - q1) / q1);
    qmin = std::min(qmin, q1);
    qmax = std::max(qmax, q1);
  }
  report(10, "Hardy stability", sane && worst < kHardyChange,
         fmt("quotients in [%.4f, %.4f], max change N 512->1024 %.2e (tol %.2f)", qmin, qmax, worst, kHardyChange));
}

void criterion11() {
  const auto a = stability_margin(make_interval(1.0, 8), 1.0);
  const auto b = stability_margin(make_interval(1.0, 8), 10.0);
  const auto c = stability_margin(make_interval(pi / 20, 8), 10.0);
  bool ok = a.passed && a.metric == pi - 1.0 && !b.passed && b.metric == pi - 10.0 && c.passed &&
            std::abs(c.metric - 10.0) <= 1e-12;
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> len(0.05, 20.0);
  std::uniform_real_distribution<double> coef(0.0, 10.0);
  int increased = 0;
  for (int t = 0; t < 10; ++t) {
    const double L = len(rng);
    const double cm = coef(rng);
    if (stability_margin(make_interval(L / 2, 8), cm).metric > stability_margin(make_interval(L, 8), cm).metric) {
      ++increased;
    }
  }
  ok = ok && increased == 10;
  report(11, "stability margin", ok,
         fmt("margins %.6f / %.6f / %.6f, halving L increased it in %d/10", a.metric, b.metric, c.metric, increased));
}

void criterion12() {
  const std::vector<std::string> args{"solve", "--domain", "interval:1:256", "--p", "2", "--modes", "64",
                                      "--seed", "7", "--perturbation", "0.1", "--format", "json"};
  std::ostringstream o1, e1, o2, e2;
  const int c1 = cli::run(args, o1, e1);
  const int c2 = cli::run(args, o2, e2);
  const bool ok = c1 == 0 && c2 == 0 && !o1.str().empty() && o1.str() == o2.str();
  report(12, "determinism", ok,
         fmt("exit %d/%d, %zu bytes, identical=%d", c1, c2, o1.str().size(), o1.str() == o2.str()));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3,  criterion4,
                                                    criterion5, criterion6, criterion7,  criterion8,
                                                    criterion9, criterion10, criterion11, criterion12};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), "(exception)", false, e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
