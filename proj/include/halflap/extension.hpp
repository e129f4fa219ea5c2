#pragma once

#include "halflap/spectral.hpp"

#include <vector>

namespace halflap {

struct TruncationError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Harmonic extension v(x,y) = sum_k b_k phi_k(x) exp(-sqrt(lambda_k) y) of a
/// trace on the half-cylinder Omega x (0, inf), vanishing on the lateral wall.
class ExtensionField {
 public:
  explicit ExtensionField(SpectralFn trace) : trace_(std::move(trace)) {}

  const SpectralFn& trace() const { return trace_; }
  /// Coefficients of v(., y). Throws std::domain_error for y < 0.
  SpectralFn slice(double y) const;
  GridFn at(double y) const { return synthesize(slice(y)); }
  /// Upper bound exp(-sqrt(lambda_1) y) * sum_k |b_k| max|phi_k| on sup|v(., y)|.
  double decay_bound(double y) const;

 private:
  SpectralFn trace_;
};

GridFn evaluate_extension(const SpectralFn& f, double y);

/// Dirichlet energy of the extension over the whole half-cylinder, in closed form.
double dirichlet_energy(const SpectralFn& f);

/// One-sided difference -(v(., h) - v(., 0)) / h of the extension at the base.
GridFn dtn_fd(const SpectralFn& f, double h);

/// Best constant (n-1) sigma_n^(1/n) / 2 of the half-space trace-Sobolev
/// inequality, sigma_n the area of the unit n-sphere in R^(n+1).
double best_trace_constant(int n);

/// Bubble U(x,y) = eps^((n-1)/2) / |(x - x0, y + eps)|^(n-1).
struct ExtremalProfile {
  int n = 2;
  double epsilon = 1.0;
  std::vector<double> x0;
};

/// Trace-Sobolev Rayleigh quotient of the profile on {|x - x0| <= R, 0 <= y <= R}
/// by composite trapezoid in (rho, y): M/2 uniform panels on [0, 10 eps], M/2
/// geometrically stretched panels beyond. Only n = 2 is implemented.
double extremal_quotient(const ExtremalProfile& profile, double radius, int resolution);

/// Trapezoid nodes used by extremal_quotient, exposed for tests.
std::vector<double> stretched_nodes(double epsilon, double radius, int resolution);

}  // namespace halflap
