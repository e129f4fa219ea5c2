#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace halflap {

struct InvalidDomain : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct AliasingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class DomainKind { interval, rectangle };

/// Interval (0,L) or rectangle (0,L1)x(0,L2) sampled on a uniform grid that
/// excludes the boundary. Axis a has grid_count(a) subdivisions and
/// grid_count(a)-1 interior nodes at i*h, i = 1..N-1.
///
/// Nodes are stored row-major: the flat index of (i0, i1) is i0*(N1-1) + i1.
class DiscreteDomain {
 public:
  DomainKind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(lengths_.size()); }
  double length(int axis) const { return lengths_.at(axis); }
  int grid_count(int axis) const { return counts_.at(axis); }
  double spacing(int axis) const { return length(axis) / grid_count(axis); }
  int interior_count(int axis) const { return grid_count(axis) - 1; }
  std::size_t node_count() const;
  double quad_weight() const;

  /// Multi-index of a flat node index (unused axes are 0).
  std::array<int, 2> node_index(std::size_t flat) const;
  std::size_t flat_index(std::array<int, 2> idx) const;
  double coordinate(std::size_t flat, int axis) const;

  bool operator==(const DiscreteDomain& other) const = default;

 private:
  friend DiscreteDomain make_interval(double, int);
  friend DiscreteDomain make_rectangle(double, double, int, int);
  DiscreteDomain(DomainKind kind, std::vector<double> lengths, std::vector<int> counts)
      : kind_(kind), lengths_(std::move(lengths)), counts_(std::move(counts)) {}

  DomainKind kind_;
  std::vector<double> lengths_;
  std::vector<int> counts_;
};

using DomainPtr = std::shared_ptr<const DiscreteDomain>;

inline constexpr int kMinGridCount = 8;

DiscreteDomain make_interval(double length, int grid_count);
DiscreteDomain make_rectangle(double length0, double length1, int grid_count0, int grid_count1);

/// Samples of a function on the interior nodes of a domain.
class GridFn {
 public:
  GridFn(DomainPtr domain, Eigen::VectorXd values);
  static GridFn zeros(DomainPtr domain);

  const DiscreteDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }
  double min() const { return values_.minCoeff(); }

 private:
  DomainPtr domain_;
  Eigen::VectorXd values_;
};

/// Ordered Dirichlet eigenpairs of the domain, sampled on the grid.
/// modes() is node_count x K, column k holding phi_{k+1}.
class EigenBasis {
 public:
  const DiscreteDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  int size() const { return static_cast<int>(lambdas_.size()); }
  const Eigen::VectorXd& lambdas() const { return lambdas_; }
  const Eigen::VectorXd& sqrt_lambdas() const { return sqrt_lambdas_; }
  const Eigen::MatrixXd& modes() const { return modes_; }
  /// 1-based frequency per axis of mode k (0-based k); axis 1 is 0 on intervals.
  std::array<int, 2> frequencies(int k) const { return freqs_.at(static_cast<std::size_t>(k)); }
  /// Largest 1D frequency used along an axis.
  int max_frequency(int axis) const;
  GridFn mode(int k) const;

 private:
  friend EigenBasis eigenpairs(DomainPtr, int);
  EigenBasis() = default;

  DomainPtr domain_;
  Eigen::VectorXd lambdas_;
  Eigen::VectorXd sqrt_lambdas_;
  Eigen::MatrixXd modes_;
  std::vector<std::array<int, 2>> freqs_;
};

using BasisPtr = std::shared_ptr<const EigenBasis>;

/// Largest admissible mode count K for the domain: min(N_a) - 1.
int aliasing_bound(const DiscreteDomain& domain);

/// Analytic sine eigenpairs sorted by lambda ascending; ties broken by
/// lexicographic (j, k). Throws AliasingError when K exceeds aliasing_bound.
EigenBasis eigenpairs(DomainPtr domain, int mode_count);
BasisPtr make_basis(DomainPtr domain, int mode_count);

GridFn boundary_distance(const DomainPtr& domain);

/// Discrete L2 pairing sum u_i w_i * weight.
double inner_product(const GridFn& u, const GridFn& w);

/// Mirror image across the midline of an axis (i -> N-2-i). An involution.
GridFn reflect(const GridFn& u, int axis);

/// Centered five-point (three-point in 1D) approximation of -Laplacian with
/// zero Dirichlet values outside the interior grid.
GridFn neg_laplacian_fd(const GridFn& u);

void require_same_domain(const DiscreteDomain& a, const DiscreteDomain& b, const char* what);

}  // namespace halflap
