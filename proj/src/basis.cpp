#include "halflap/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace halflap {

namespace {

void validate_axis(double length, int count) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidDomain("domain length must be positive and finite, got " + std::to_string(length));
  }
  if (count < kMinGridCount) {
    throw InvalidDomain("grid count must be at least " + std::to_string(kMinGridCount) + ", got " +
                        std::to_string(count));
  }
}

// sqrt(2/L) sin(j pi x / L) at the interior nodes x = i h, i = 1..N-1.
Eigen::VectorXd sine_samples(double length, int count, int freq) {
  Eigen::VectorXd s(count - 1);
  const double scale = std::sqrt(2.0 / length);
  for (int i = 1; i < count; ++i) {
    s[i - 1] = scale * std::sin(std::numbers::pi * freq * i / count);
  }
  return s;
}

}  // namespace

std::size_t DiscreteDomain::node_count() const {
  std::size_t n = 1;
  for (int a = 0; a < dimension(); ++a) n *= static_cast<std::size_t>(interior_count(a));
  return n;
}

double DiscreteDomain::quad_weight() const {
  double w = 1.0;
  for (int a = 0; a < dimension(); ++a) w *= spacing(a);
  return w;
}

std::array<int, 2> DiscreteDomain::node_index(std::size_t flat) const {
  if (dimension() == 1) return {static_cast<int>(flat), 0};
  const auto m1 = static_cast<std::size_t>(interior_count(1));
  return {static_cast<int>(flat / m1), static_cast<int>(flat % m1)};
}

std::size_t DiscreteDomain::flat_index(std::array<int, 2> idx) const {
  if (dimension() == 1) return static_cast<std::size_t>(idx[0]);
  return static_cast<std::size_t>(idx[0]) * static_cast<std::size_t>(interior_count(1)) +
         static_cast<std::size_t>(idx[1]);
}

double DiscreteDomain::coordinate(std::size_t flat, int axis) const {
  return (node_index(flat)[static_cast<std::size_t>(axis)] + 1) * spacing(axis);
}

DiscreteDomain make_interval(double length, int grid_count) {
  validate_axis(length, grid_count);
  return DiscreteDomain(DomainKind::interval, {length}, {grid_count});
}

DiscreteDomain make_rectangle(double length0, double length1, int grid_count0, int grid_count1) {
  validate_axis(length0, grid_count0);
  validate_axis(length1, grid_count1);
  return DiscreteDomain(DomainKind::rectangle, {length0, length1}, {grid_count0, grid_count1});
}

GridFn::GridFn(DomainPtr domain, Eigen::VectorXd values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (!domain_) throw std::invalid_argument("GridFn: null domain");
  if (static_cast<std::size_t>(values_.size()) != domain_->node_count()) {
    throw DomainMismatch("GridFn: value count " + std::to_string(values_.size()) +
                         " does not match node count " + std::to_string(domain_->node_count()));
  }
  if (!values_.allFinite()) throw std::invalid_argument("GridFn: non-finite value");
}

GridFn GridFn::zeros(DomainPtr domain) {
  const auto n = static_cast<Eigen::Index>(domain->node_count());
  return GridFn(std::move(domain), Eigen::VectorXd::Zero(n));
}

int EigenBasis::max_frequency(int axis) const {
  int m = 0;
  for (const auto& f : freqs_) m = std::max(m, f[static_cast<std::size_t>(axis)]);
  return m;
}

GridFn EigenBasis::mode(int k) const { return GridFn(domain_, modes_.col(k)); }

int aliasing_bound(const DiscreteDomain& domain) {
  int bound = domain.grid_count(0) - 1;
  for (int a = 1; a < domain.dimension(); ++a) bound = std::min(bound, domain.grid_count(a) - 1);
  return bound;
}

EigenBasis eigenpairs(DomainPtr domain, int mode_count) {
  if (!domain) throw std::invalid_argument("eigenpairs: null domain");
  if (mode_count < 1) throw AliasingError("mode count must be at least 1");
  if (mode_count > aliasing_bound(*domain)) {
    throw AliasingError("mode count " + std::to_string(mode_count) + " exceeds aliasing bound " +
                        std::to_string(aliasing_bound(*domain)));
  }
  const double pi = std::numbers::pi;

  EigenBasis basis;
  basis.domain_ = domain;
  basis.lambdas_.resize(mode_count);
  basis.modes_.resize(static_cast<Eigen::Index>(domain->node_count()), mode_count);

  if (domain->dimension() == 1) {
    const double len = domain->length(0);
    for (int k = 1; k <= mode_count; ++k) {
      basis.lambdas_[k - 1] = (k * pi / len) * (k * pi / len);
      basis.modes_.col(k - 1) = sine_samples(len, domain->grid_count(0), k);
      basis.freqs_.push_back({k, 0});
    }
  } else {
    const double l0 = domain->length(0);
    const double l1 = domain->length(1);
    // The K smallest tensor eigenvalues use frequencies j, k <= K on each axis.
    std::vector<std::tuple<double, int, int>> pairs;
    for (int j = 1; j <= mode_count; ++j) {
      for (int k = 1; k <= mode_count; ++k) {
        pairs.emplace_back((j * pi / l0) * (j * pi / l0) + (k * pi / l1) * (k * pi / l1), j, k);
      }
    }
    std::sort(pairs.begin(), pairs.end());
    for (int m = 0; m < mode_count; ++m) {
      const auto [lam, j, k] = pairs[static_cast<std::size_t>(m)];
      basis.lambdas_[m] = lam;
      const Eigen::VectorXd s0 = sine_samples(l0, domain->grid_count(0), j);
      const Eigen::VectorXd s1 = sine_samples(l1, domain->grid_count(1), k);
      const Eigen::Index m1 = s1.size();
      for (Eigen::Index i0 = 0; i0 < s0.size(); ++i0) {
        basis.modes_.col(m).segment(i0 * m1, m1) = s0[i0] * s1;
      }
      basis.freqs_.push_back({j, k});
    }
  }
  basis.sqrt_lambdas_ = basis.lambdas_.cwiseSqrt();
  return basis;
}

BasisPtr make_basis(DomainPtr domain, int mode_count) {
  return std::make_shared<const EigenBasis>(eigenpairs(std::move(domain), mode_count));
}

GridFn boundary_distance(const DomainPtr& domain) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(domain->node_count()));
  for (std::size_t n = 0; n < domain->node_count(); ++n) {
    double dist = std::numeric_limits<double>::infinity();
    for (int a = 0; a < domain->dimension(); ++a) {
      const double x = domain->coordinate(n, a);
      dist = std::min({dist, x, domain->length(a) - x});
    }
    d[static_cast<Eigen::Index>(n)] = dist;
  }
  return GridFn(domain, std::move(d));
}

void require_same_domain(const DiscreteDomain& a, const DiscreteDomain& b, const char* what) {
  if (!(a == b)) throw DomainMismatch(std::string(what) + ": functions live on different domains");
}

double inner_product(const GridFn& u, const GridFn& w) {
  require_same_domain(u.domain(), w.domain(), "inner_product");
  return u.values().dot(w.values()) * u.domain().quad_weight();
}

GridFn reflect(const GridFn& u, int axis) {
  const auto& dom = u.domain();
  if (axis < 0 || axis >= dom.dimension()) {
    throw std::out_of_range("reflect: axis " + std::to_string(axis) + " out of range");
  }
  const int last = dom.interior_count(axis) - 1;
  Eigen::VectorXd out(u.values().size());
  for (std::size_t n = 0; n < dom.node_count(); ++n) {
    auto idx = dom.node_index(n);
    idx[static_cast<std::size_t>(axis)] = last - idx[static_cast<std::size_t>(axis)];
    out[static_cast<Eigen::Index>(n)] = u[dom.flat_index(idx)];
  }
  return GridFn(u.domain_ptr(), std::move(out));
}

GridFn neg_laplacian_fd(const GridFn& u) {
  const auto& dom = u.domain();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(u.values().size());
  for (std::size_t n = 0; n < dom.node_count(); ++n) {
    const auto idx = dom.node_index(n);
    double acc = 0.0;
    for (int a = 0; a < dom.dimension(); ++a) {
      const double h = dom.spacing(a);
      auto lo = idx;
      auto hi = idx;
      --lo[static_cast<std::size_t>(a)];
      ++hi[static_cast<std::size_t>(a)];
      const double ul = lo[static_cast<std::size_t>(a)] >= 0 ? u[dom.flat_index(lo)] : 0.0;
      const double uh = hi[static_cast<std::size_t>(a)] < dom.interior_count(a) ? u[dom.flat_index(hi)] : 0.0;
      acc += (2.0 * u[n] - ul - uh) / (h * h);
    }
    out[static_cast<Eigen::Index>(n)] = acc;
  }
  return GridFn(u.domain_ptr(), std::move(out));
}

}  // namespace halflap
