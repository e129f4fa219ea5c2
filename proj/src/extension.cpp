#include "halflap/extension.hpp"

#include <cmath>
#include <numbers>

namespace halflap {

SpectralFn ExtensionField::slice(double y) const {
  if (!(y >= 0.0)) throw std::domain_error("extension height must be nonnegative");
  if (y == 0.0) return trace_;
  const Eigen::VectorXd decay = (-y * trace_.basis().sqrt_lambdas().array()).exp();
  return {trace_.basis_ptr(), trace_.coeffs().cwiseProduct(decay)};
}

double ExtensionField::decay_bound(double y) const {
  const auto& modes = trace_.basis().modes();
  double acc = 0.0;
  for (int k = 0; k < trace_.size(); ++k) {
    acc += std::abs(trace_.coeffs()[k]) * modes.col(k).cwiseAbs().maxCoeff();
  }
  return std::exp(-trace_.basis().sqrt_lambdas()[0] * y) * acc;
}

GridFn evaluate_extension(const SpectralFn& f, double y) { return ExtensionField(f).at(y); }

double dirichlet_energy(const SpectralFn& f) { return v0_norm_sq(f); }

GridFn dtn_fd(const SpectralFn& f, double h) {
  if (!(h > 0.0)) throw std::domain_error("dtn_fd: step must be positive");
  const ExtensionField v(f);
  // Differencing coefficients first keeps f = 0 exactly zero.
  const Eigen::VectorXd diff = (v.slice(0.0).coeffs() - v.slice(h).coeffs()) / h;
  return synthesize(SpectralFn(f.basis_ptr(), diff));
}

double best_trace_constant(int n) {
  if (n < 2) throw std::domain_error("best_trace_constant: requires n >= 2");
  const double half = (n + 1) / 2.0;
  const double sphere_area = 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
  return (n - 1) * std::pow(sphere_area, 1.0 / n) / 2.0;
}

std::vector<double> stretched_nodes(double epsilon, double radius, int resolution) {
  const double core = std::min(10.0 * epsilon, radius);
  const int m_core = radius > core ? resolution / 2 : resolution;
  const int m_tail = resolution - m_core;

  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(resolution) + 1);
  for (int i = 0; i <= m_core; ++i) t.push_back(core * i / m_core);
  if (m_tail == 0) return t;

  // First tail panel matches the core spacing; ratio q solves h0 (q^m - 1)/(q - 1) = R - core.
  const double h0 = core / m_core;
  const double span = radius - core;
  auto covered = [&](double q) { return h0 * (std::pow(q, m_tail) - 1.0) / (q - 1.0); };
  if (h0 * m_tail >= span) {
    // Uniform spacing already reaches R; no stretching needed.
    for (int i = 1; i <= m_tail; ++i) t.push_back(core + span * i / m_tail);
    return t;
  }
  double lo = 1.0;
  double hi = 2.0;
  while (covered(hi) < span) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (covered(mid) > span ? hi : lo) = mid;
  }
  const double q = 0.5 * (lo + hi);
  double width = h0;
  double x = core;
  for (int i = 1; i < m_tail; ++i) {
    x += width;
    t.push_back(x);
    width *= q;
  }
  t.push_back(radius);
  return t;
}

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double d = t[i + 1] - t[i];
    w[i] += 0.5 * d;
    w[i + 1] += 0.5 * d;
  }
  return w;
}

}  // namespace

double extremal_quotient(const ExtremalProfile& profile, double radius, int resolution) {
  if (profile.n != 2) throw std::invalid_argument("extremal_quotient: only n = 2 is implemented");
  if (!(profile.epsilon > 0.0)) throw std::invalid_argument("extremal_quotient: epsilon must be positive");
  if (!profile.x0.empty() && profile.x0.size() != 2) {
    throw std::invalid_argument("extremal_quotient: center must have n components");
  }
  if (resolution < 64) throw std::invalid_argument("extremal_quotient: resolution must be at least 64");
  if (!(radius > profile.epsilon)) {
    throw TruncationError("extremal_quotient: truncation radius must exceed epsilon");
  }
  const double eps = profile.epsilon;
  const double two_pi = 2.0 * std::numbers::pi;

  // The quotient is translation invariant, so integrate about x0 in polar form.
  const std::vector<double> nodes = stretched_nodes(eps, radius, resolution);
  const std::vector<double> w = trapezoid_weights(nodes);

  // n = 2: |grad U|^2 = eps / |(x, y + eps)|^4 and U(x, 0)^4 = eps^2 / (rho^2 + eps^2)^2.
  double energy = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double rho = nodes[i];
    if (rho == 0.0) continue;
    double column = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double s = rho * rho + (nodes[j] + eps) * (nodes[j] + eps);
      column += w[j] * eps / (s * s);
    }
    energy += w[i] * rho * column;
  }
  energy *= two_pi;

  double trace = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double s = nodes[i] * nodes[i] + eps * eps;
    trace += w[i] * nodes[i] * eps * eps / (s * s);
  }
  trace *= two_pi;

  // 2^# = 4 for n = 2, so the denominator is trace^(2/4).
  return energy / std::sqrt(trace);
}

}  // namespace halflap
