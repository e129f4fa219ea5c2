#include "halflap/nonlinear.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace halflap {

namespace {

// |x|^(p-1) x, the derivative of |x|^(p+1)/(p+1); equals x^p for x >= 0.
Eigen::VectorXd odd_power(const Eigen::VectorXd& x, double p) {
  return x.unaryExpr([p](double v) { return std::copysign(std::pow(std::abs(v), p), v); });
}

// Folds negative grid values by absolute value, then rescales onto the
// constraint sphere int |w|^(p+1) = 1.
SpectralFn retract(const SpectralFn& b, double p, bool fold) {
  GridFn u = synthesize(b);
  SpectralFn out = b;
  if (fold && u.min() < 0.0) {
    out = analyze(GridFn(u.domain_ptr(), u.values().cwiseAbs()), b.basis_ptr());
    u = synthesize(out);
  }
  const double mass = lp_integral(u, p + 1.0);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw std::runtime_error("constraint integral degenerated to " + std::to_string(mass));
  }
  return out.scaled(std::pow(mass, -1.0 / (p + 1.0)));
}

SpectralFn projected_nonlinearity(const SpectralFn& f, double p) {
  const GridFn u = synthesize(f);
  return analyze(GridFn(u.domain_ptr(), odd_power(u.values(), p)), f.basis_ptr());
}

double symmetry_defect(const GridFn& u) {
  double defect = 0.0;
  for (int a = 0; a < u.domain().dimension(); ++a) {
    defect = std::max(defect, (u.values() - reflect(u, a).values()).cwiseAbs().maxCoeff());
  }
  return defect;
}

SpectralFn initial_guess(const BasisPtr& basis, const SolveConfig& cfg) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(basis->size());
  b[0] = 1.0;
  if (cfg.init_perturbation > 0.0) {
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int k = 1; k < basis->size(); ++k) b[k] = cfg.init_perturbation * uni(rng) / (k + 1);
  }
  return {basis, std::move(b)};
}

}  // namespace

double critical_exponent(int n) {
  if (n < 1) throw std::domain_error("critical_exponent: dimension must be at least 1");
  if (n == 1) return std::numeric_limits<double>::infinity();
  return static_cast<double>(n + 1) / (n - 1);
}

void validate_config(const EigenBasis& basis, const SolveConfig& cfg) {
  const auto& dom = basis.domain();
  if (!std::isfinite(cfg.p) || cfg.p < kMinExponent) {
    throw RejectedConfig("exponent p = " + std::to_string(cfg.p) + " is below the floor " +
                         std::to_string(kMinExponent));
  }
  const double crit = critical_exponent(dom.dimension());
  if (cfg.p >= crit) {
    throw RejectedConfig("exponent p = " + std::to_string(cfg.p) +
                         " is not subcritical (critical exponent " + std::to_string(crit) + ")");
  }
  if (cfg.p >= kNearCriticalFraction * crit && !cfg.allow_near_critical) {
    throw RejectedConfig("exponent p = " + std::to_string(cfg.p) +
                         " is near critical; set allow_near_critical to run it as a diagnostic");
  }
  if (cfg.modes != basis.size()) throw RejectedConfig("mode count does not match the basis");
  for (int a = 0; a < dom.dimension(); ++a) {
    if (dom.grid_count(a) < kDealiasFactor * basis.max_frequency(a)) {
      throw RejectedConfig("grid count " + std::to_string(dom.grid_count(a)) + " on axis " +
                           std::to_string(a) + " is below " + std::to_string(kDealiasFactor) +
                           " x highest frequency " + std::to_string(basis.max_frequency(a)));
    }
  }
  if (!(cfg.tol_residual > 0.0)) throw RejectedConfig("tol_residual must be positive");
  if (cfg.max_iter < 1) throw RejectedConfig("max_iter must be at least 1");
  if (cfg.polish_iters < 0) throw RejectedConfig("polish_iters must be nonnegative");
  if (!(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0)) {
    throw RejectedConfig("backtrack_factor must lie in (0, 1)");
  }
  if (!std::isfinite(cfg.step_init)) throw RejectedConfig("step_init must be finite");
  if (!(cfg.init_perturbation >= 0.0)) throw RejectedConfig("init_perturbation must be nonnegative");
  if (!(cfg.grad_tol > 0.0)) throw RejectedConfig("grad_tol must be positive");
}

BasisPtr solver_basis(const DomainPtr& domain, const SolveConfig& cfg) {
  BasisPtr basis;
  try {
    basis = make_basis(domain, cfg.modes);
  } catch (const AliasingError& e) {
    throw RejectedConfig(e.what());
  }
  validate_config(*basis, cfg);
  return basis;
}

double lp_integral(const GridFn& w, double q) {
  return w.values().array().abs().pow(q).sum() * w.domain().quad_weight();
}

Minimizer minimize_I0(const DomainPtr& domain, const SolveConfig& cfg) {
  return minimize_I0(initial_guess(solver_basis(domain, cfg), cfg), cfg);
}

Minimizer minimize_I0(const SpectralFn& start, const SolveConfig& cfg) {
  validate_config(start.basis(), cfg);
  const double p = cfg.p;
  const Eigen::VectorXd& sqrt_lam = start.basis().sqrt_lambdas();
  const double step0 = cfg.step_init > 0.0 ? cfg.step_init : 0.5 / sqrt_lam[sqrt_lam.size() - 1];

  SpectralFn w = retract(start, p, true);
  double energy = v0_norm_sq(w);
  Minimizer out{w, energy, {energy}, 0, false, 0.0};

  for (int it = 0; it < cfg.max_iter; ++it) {
    // Tangent gradient of the Lagrangian; multiplier = energy on the sphere.
    const Eigen::VectorXd grad =
        w.coeffs().cwiseProduct(sqrt_lam) - energy * projected_nonlinearity(w, p).coeffs();
    out.grad_norm = grad.norm();
    if (out.grad_norm <= cfg.grad_tol * energy) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    for (double step = step0; step >= step0 * 1e-12; step *= cfg.backtrack_factor) {
      SpectralFn trial = retract(SpectralFn(w.basis_ptr(), w.coeffs() - step * grad), p, true);
      const double trial_energy = v0_norm_sq(trial);
      if (trial_energy <= energy) {
        w = std::move(trial);
        energy = trial_energy;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stalled: no descent at any step size
    out.energy_trace.push_back(energy);
    out.iterations = it + 1;
  }
  out.w = w;
  out.I0 = energy;
  return out;
}

SpectralFn rescale_to_solution(const SpectralFn& w, double I0, double p) {
  if (!(I0 > 0.0)) throw std::domain_error("rescale_to_solution: I0 must be positive");
  if (!(p > 1.0)) throw std::domain_error("rescale_to_solution: p must exceed 1");
  return w.scaled(std::pow(I0, 1.0 / (p - 1.0)));
}

double residual(const SpectralFn& u, double p) {
  GridFn grid = synthesize(u);
  const double sup = grid.sup_norm();
  if (grid.values().size() && grid.min() < -1e-10 * sup) {
    throw SignViolation("residual: solution has negative value " + std::to_string(grid.min()));
  }
  const Eigen::VectorXd power = grid.values().cwiseMax(0.0).array().pow(p).matrix();
  return (synthesize(apply_A_half(u)).values() - power).cwiseAbs().maxCoeff();
}

double galerkin_residual(const SpectralFn& u, double p) {
  const Eigen::VectorXd defect = apply_A_half(u).coeffs() - projected_nonlinearity(u, p).coeffs();
  return synthesize(SpectralFn(u.basis_ptr(), defect)).sup_norm();
}

SolveReport solve(const DomainPtr& domain, const SolveConfig& cfg) {
  const double p = cfg.p;
  Minimizer min = minimize_I0(domain, cfg);

  // The plain iteration u <- B_half P(u^p) is repelled along u itself, so the
  // polish iterates on the normalized minimizer and rescales afterwards.
  SpectralFn w = min.w;
  auto residual_of = [p](const SpectralFn& v) {
    return galerkin_residual(rescale_to_solution(v, v0_norm_sq(v), p), p);
  };
  double res = residual_of(w);
  double damping = 1.0;
  int polish = 0;
  const double target = 1e-3 * cfg.tol_residual;
  while (polish < cfg.polish_iters && res > target && damping > 1e-4) {
    ++polish;
    const SpectralFn image = retract(apply_B_half(projected_nonlinearity(w, p)), p, false);
    const SpectralFn trial =
        retract(SpectralFn(w.basis_ptr(), (1.0 - damping) * w.coeffs() + damping * image.coeffs()), p, false);
    const double trial_res = residual_of(trial);
    if (trial_res < res) {
      w = trial;
      res = trial_res;
    } else {
      damping *= 0.5;
    }
  }

  const double I0 = v0_norm_sq(w);
  SpectralFn u = rescale_to_solution(w, I0, p);
  GridFn grid = synthesize(u);
  double defect = std::numeric_limits<double>::quiet_NaN();
  try {
    defect = residual(u, p);
  } catch (const SignViolation&) {
  }
  const double sup = grid.sup_norm();
  const double pos_min = grid.min();
  const double sym = symmetry_defect(grid);
  const bool ok = min.converged && std::isfinite(res) && res <= cfg.tol_residual;
  return SolveReport{
      .p = p,
      .solution = std::move(u),
      .solution_grid = std::move(grid),
      .I0 = I0,
      .multiplier = I0,
      .residual_inf = res,
      .truncation_defect = defect,
      .sup_norm = sup,
      .positivity_min = pos_min,
      .symmetry_defect = sym,
      .iterations = min.iterations,
      .polish_iterations = polish,
      .minimizer_converged = min.converged,
      .converged = ok,
      .energy_trace = std::move(min.energy_trace),
  };
}

std::vector<SweepRow> sweep(const DomainPtr& domain, std::span<const double> exponents,
                            const SolveConfig& cfg, unsigned threads) {
  std::vector<SweepRow> rows(exponents.size());
  if (rows.empty()) return rows;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      SweepRow& row = rows[i];
      row.p = exponents[i];
      SolveConfig row_cfg = cfg;
      row_cfg.p = exponents[i];
      try {
        auto report = std::make_shared<const SolveReport>(solve(domain, row_cfg));
        row.sup_norm = report->sup_norm;
        row.residual = report->residual_inf;
        row.converged = report->converged;
        row.report = std::move(report);
      } catch (const std::exception& e) {
        row.sup_norm = std::numeric_limits<double>::quiet_NaN();
        row.residual = std::numeric_limits<double>::quiet_NaN();
        row.converged = false;
        row.error = e.what();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

}  // namespace halflap
