#include "halflap/spectral.hpp"

namespace halflap {

SpectralFn::SpectralFn(BasisPtr basis, Eigen::VectorXd coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw std::invalid_argument("SpectralFn: null basis");
  if (coeffs_.size() != basis_->size()) {
    throw std::invalid_argument("SpectralFn: " + std::to_string(coeffs_.size()) +
                                " coefficients for a basis of " + std::to_string(basis_->size()) +
                                " modes");
  }
  if (!coeffs_.allFinite()) throw std::invalid_argument("SpectralFn: non-finite coefficient");
}

SpectralFn SpectralFn::zeros(BasisPtr basis) {
  const int k = basis->size();
  return {std::move(basis), Eigen::VectorXd::Zero(k)};
}

SpectralFn SpectralFn::unit(BasisPtr basis, int k) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis->size());
  c[k] = 1.0;
  return {std::move(basis), std::move(c)};
}

SpectralFn analyze(const GridFn& u, const BasisPtr& basis) {
  require_same_domain(u.domain(), basis->domain(), "analyze");
  Eigen::VectorXd b = basis->modes().transpose() * u.values();
  b *= u.domain().quad_weight();
  return {basis, std::move(b)};
}

GridFn synthesize(const SpectralFn& f) {
  return GridFn(f.basis().domain_ptr(), f.basis().modes() * f.coeffs());
}

SpectralFn apply_A_half(const SpectralFn& f) {
  return {f.basis_ptr(), f.coeffs().cwiseProduct(f.basis().sqrt_lambdas())};
}

SpectralFn apply_B_half(const SpectralFn& f) {
  return {f.basis_ptr(), f.coeffs().cwiseQuotient(f.basis().sqrt_lambdas())};
}

SpectralFn apply_inv_laplacian(const SpectralFn& f) {
  return {f.basis_ptr(), f.coeffs().cwiseQuotient(f.basis().lambdas())};
}

double v0_norm_sq(const SpectralFn& f) {
  return f.coeffs().cwiseAbs2().dot(f.basis().sqrt_lambdas());
}

double hardy_quotient(const SpectralFn& f) {
  const double energy = v0_norm_sq(f);
  if (!(energy > 0.0)) throw UndefinedQuotient("hardy_quotient: zero function");
  const GridFn u = synthesize(f);
  const GridFn d = boundary_distance(u.domain_ptr());
  const double trace = u.values().cwiseAbs2().cwiseQuotient(d.values()).sum() * u.domain().quad_weight();
  return trace / energy;
}

}  // namespace halflap
