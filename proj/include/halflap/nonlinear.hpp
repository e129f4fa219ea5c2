#pragma once

#include "halflap/spectral.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace halflap {

struct RejectedConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SignViolation : std::domain_error {
  using std::domain_error::domain_error;
};

/// Exponents below this are rejected: the rescaling exponent 1/(p-1) blows up as p -> 1.
inline constexpr double kMinExponent = 1.1;
/// Exponents at or above this fraction of the critical one need allow_near_critical.
inline constexpr double kNearCriticalFraction = 0.95;
/// Grid count per axis must be at least this multiple of the highest frequency used.
inline constexpr int kDealiasFactor = 4;

struct SolveConfig {
  double p = 2.0;
  int modes = 64;
  int max_iter = 20000;
  double tol_residual = 1e-8;
  /// Initial line-search step; <= 0 selects 0.5 / sqrt(lambda_K).
  double step_init = 0.0;
  double backtrack_factor = 0.5;
  int polish_iters = 200;
  std::uint64_t rng_seed = 0;
  /// Amplitude of the seeded random perturbation added to phi_1 at start.
  double init_perturbation = 0.0;
  bool allow_near_critical = false;
  /// Minimizer stops once |tangent gradient|_2 <= grad_tol * energy.
  double grad_tol = 1e-6;
};

/// (n+1)/(n-1) for n >= 2, +infinity for n = 1.
double critical_exponent(int n);

/// Throws RejectedConfig when cfg is not admissible on the basis.
void validate_config(const EigenBasis& basis, const SolveConfig& cfg);

/// Builds the K-mode basis for cfg, translating aliasing failures into RejectedConfig.
BasisPtr solver_basis(const DomainPtr& domain, const SolveConfig& cfg);

/// Integral of |w|^q over the grid.
double lp_integral(const GridFn& w, double q);

struct Minimizer {
  SpectralFn w;
  double I0 = 0.0;
  /// Energy after the start point and after every accepted step.
  std::vector<double> energy_trace;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
};

/// Projected-gradient descent of v0_norm_sq on the sphere int |w|^(p+1) = 1
/// with backtracking, absolute-value folding and renormalization each step.
Minimizer minimize_I0(const DomainPtr& domain, const SolveConfig& cfg);
Minimizer minimize_I0(const SpectralFn& start, const SolveConfig& cfg);

/// u = I0^(1/(p-1)) w. Throws std::domain_error unless I0 > 0.
SpectralFn rescale_to_solution(const SpectralFn& w, double I0, double p);

/// Pointwise defect sup |synth(A_half u) - synth(u)^p| on the grid. Throws
/// SignViolation if u dips below -1e-10 sup|u|; smaller negatives clamp to 0.
double residual(const SpectralFn& u, double p);

/// Defect of the K-mode Galerkin equation A_half b = P_K(|u|^(p-1) u), measured
/// as a sup norm on the grid. This is the equation solve() drives to zero.
double galerkin_residual(const SpectralFn& u, double p);

struct SolveReport {
  double p = 0.0;
  SpectralFn solution;
  GridFn solution_grid;
  double I0 = 0.0;
  double multiplier = 0.0;
  double residual_inf = 0.0;
  /// residual(); NaN when the sign check fails.
  double truncation_defect = 0.0;
  double sup_norm = 0.0;
  double positivity_min = 0.0;
  /// max over axes of sup |u - reflect(u, axis)|.
  double symmetry_defect = 0.0;
  int iterations = 0;
  int polish_iterations = 0;
  bool minimizer_converged = false;
  bool converged = false;
  std::vector<double> energy_trace;
};

/// minimize_I0 -> rescale_to_solution -> damped normalized fixed-point polish.
SolveReport solve(const DomainPtr& domain, const SolveConfig& cfg);

struct SweepRow {
  double p = 0.0;
  double sup_norm = 0.0;
  double residual = 0.0;
  bool converged = false;
  /// Non-empty when the row's config was rejected or the solve threw.
  std::string error;
  std::shared_ptr<const SolveReport> report;
};

/// One independent solve per exponent, rows in input order. threads = 0 uses
/// the machine's hardware concurrency.
std::vector<SweepRow> sweep(const DomainPtr& domain, std::span<const double> exponents,
                            const SolveConfig& cfg, unsigned threads = 0);

}  // namespace halflap
