#pragma once

// Test-only reference computations. Everything here is written directly from
// the analytic sine formulas with plain loops and dense matrices; none of it
// calls into the spectral machinery it is used to check.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// sqrt(2/L) sin(k pi x / L)
inline double sine_mode(double L, int k, double x) { return std::sqrt(2.0 / L) * std::sin(k * pi * x / L); }

inline double sine_mode_dx(double L, int k, double x) {
  return std::sqrt(2.0 / L) * (k * pi / L) * std::cos(k * pi * x / L);
}

/// Direct quadrature sum_i f(x_i) phi_k(x_i) h over the interior nodes of (0, L).
template <typename F>
double direct_coefficient(F&& f, double L, int N, int k) {
  const double h = L / N;
  double acc = 0.0;
  for (int i = 1; i < N; ++i) acc += f(i * h) * sine_mode(L, k, i * h);
  return acc * h;
}

/// Trapezoid quadrature of |grad v|^2 for v(x,y) = sum_k b_k phi_k(x) exp(-k pi y / L)
/// on (0, L) x (0, Y) with an nx x ny panel grid, derivatives from the series.
inline double cylinder_energy(const std::vector<double>& b, double L, double Y, int nx, int ny) {
  const double hx = L / nx;
  const double hy = Y / ny;
  double total = 0.0;
  for (int iy = 0; iy <= ny; ++iy) {
    const double y = iy * hy;
    const double wy = (iy == 0 || iy == ny) ? 0.5 * hy : hy;
    for (int ix = 0; ix <= nx; ++ix) {
      const double x = ix * hx;
      const double wx = (ix == 0 || ix == nx) ? 0.5 * hx : hx;
      double vx = 0.0;
      double vy = 0.0;
      for (std::size_t k = 0; k < b.size(); ++k) {
        const int freq = static_cast<int>(k) + 1;
        const double decay = std::exp(-freq * pi / L * y);
        vx += b[k] * sine_mode_dx(L, freq, x) * decay;
        vy += -b[k] * (freq * pi / L) * sine_mode(L, freq, x) * decay;
      }
      total += wx * wy * (vx * vx + vy * vy);
    }
  }
  return total;
}

struct DenseFixedPoint {
  double I0 = 0.0;
  double residual = 0.0;
  Eigen::VectorXd u;
};

/// Normalized fixed point w <- B(w^p)/|B(w^p)|_{p+1} on the unit interval using
/// the dense (N-1) x (N-1) matrix B = Phi diag(1/sqrt(lambda)) Phi^T h with
/// K = N-1 modes, then u = I0^(1/(p-1)) w.
inline DenseFixedPoint dense_fixed_point(int N, double p, int iters = 400) {
  const int n = N - 1;
  const double h = 1.0 / N;
  Eigen::MatrixXd phi(n, n);
  Eigen::VectorXd inv_sqrt(n);
  Eigen::VectorXd sqrt_lam(n);
  for (int k = 1; k <= n; ++k) {
    sqrt_lam[k - 1] = k * pi;
    inv_sqrt[k - 1] = 1.0 / (k * pi);
    for (int i = 1; i <= n; ++i) phi(i - 1, k - 1) = sine_mode(1.0, k, i * h);
  }
  const Eigen::MatrixXd B = phi * inv_sqrt.asDiagonal() * phi.transpose() * h;
  const Eigen::MatrixXd A = phi * sqrt_lam.asDiagonal() * phi.transpose() * h;

  auto normalize = [&](Eigen::VectorXd w) {
    const double mass = w.array().abs().pow(p + 1.0).sum() * h;
    return Eigen::VectorXd(w * std::pow(mass, -1.0 / (p + 1.0)));
  };
  Eigen::VectorXd w = normalize(phi.col(0));
  for (int it = 0; it < iters; ++it) w = normalize(B * w.array().pow(p).matrix());

  DenseFixedPoint out;
  out.I0 = w.dot(A * w) * h;
  out.u = std::pow(out.I0, 1.0 / (p - 1.0)) * w;
  out.residual = (A * out.u - out.u.array().pow(p).matrix()).cwiseAbs().maxCoeff();
  return out;
}

/// Dense B on the truncated basis applied to g, for the weak maximum principle.
inline Eigen::VectorXd dense_B_apply(int N, int K, const Eigen::VectorXd& g) {
  const double h = 1.0 / N;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(N - 1);
  for (int k = 1; k <= K; ++k) {
    double c = 0.0;
    for (int i = 1; i < N; ++i) c += g[i - 1] * sine_mode(1.0, k, i * h);
    c *= h / (k * pi);
    for (int i = 1; i < N; ++i) out[i - 1] += c * sine_mode(1.0, k, i * h);
  }
  return out;
}

/// I0 of the dense normalized fixed point at N = 64 (K = 63), p = 2 on (0,1),
/// computed independently with numpy before the library existed.
inline constexpr double kReferenceI0_p2 = 2.7142243775270583;

inline std::vector<double> random_coeffs(std::mt19937_64& rng, int K, double decay = 1.0) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> b(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) b[static_cast<std::size_t>(k)] = uni(rng) / std::pow(k + 1.0, decay);
  return b;
}

}  // namespace oracle
