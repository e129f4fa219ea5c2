#pragma once

#include "halflap/basis.hpp"

namespace halflap {

struct UndefinedQuotient : std::domain_error {
  using std::domain_error::domain_error;
};

/// A trace function u = sum_k b_k phi_k held as its first K eigencoefficients.
class SpectralFn {
 public:
  SpectralFn(BasisPtr basis, Eigen::VectorXd coeffs);
  static SpectralFn zeros(BasisPtr basis);
  static SpectralFn unit(BasisPtr basis, int k);

  const EigenBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  SpectralFn scaled(double c) const { return {basis_, c * coeffs_}; }

 private:
  BasisPtr basis_;
  Eigen::VectorXd coeffs_;
};

/// b_k = <u, phi_k>.
SpectralFn analyze(const GridFn& u, const BasisPtr& basis);
GridFn synthesize(const SpectralFn& f);

// All operators are diagonal in the eigenbasis.
SpectralFn apply_A_half(const SpectralFn& f);
SpectralFn apply_B_half(const SpectralFn& f);
SpectralFn apply_inv_laplacian(const SpectralFn& f);

/// sum_k b_k^2 sqrt(lambda_k).
double v0_norm_sq(const SpectralFn& f);

/// (sum_i u_i^2 / d_i * weight) / v0_norm_sq(f). Throws UndefinedQuotient on f = 0.
double hardy_quotient(const SpectralFn& f);

}  // namespace halflap
