#include "halflap/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace halflap {

namespace {

void require_axis(const GridFn& u, int axis, const char* what) {
  if (axis < 0 || axis >= u.domain().dimension()) {
    throw std::out_of_range(std::string(what) + ": axis " + std::to_string(axis) + " out of range");
  }
}

std::string fmt_detail(const char* label, double value) {
  std::ostringstream os;
  os.precision(6);
  os << label << " = " << value;
  return os.str();
}

}  // namespace

CheckReport check_weak_mp(const BasisPtr& basis, const GridFn& g) {
  if (g.values().size() && g.min() < 0.0) {
    throw PreconditionError("check_weak_mp: data must be nonnegative, min = " + std::to_string(g.min()));
  }
  const GridFn u = synthesize(apply_B_half(analyze(g, basis)));
  const double sup_g = g.sup_norm();
  const double floor = -kWeakMpTol * sup_g;
  const double min_u = u.values().size() ? u.min() : 0.0;
  return {"weak_mp", min_u >= floor, min_u, floor, fmt_detail("sup g", sup_g)};
}

CheckReport check_positivity(const GridFn& u) {
  const double min_u = u.min();
  const bool zero = u.sup_norm() == 0.0;
  return {"positivity", zero || min_u > 0.0, min_u, 0.0, zero ? "identically zero" : ""};
}

CheckReport check_symmetry(const GridFn& u, int axis, double rel_tol) {
  require_axis(u, axis, "check_symmetry");
  const double defect = (u.values() - reflect(u, axis).values()).cwiseAbs().maxCoeff();
  const double tol = rel_tol * u.sup_norm();
  return {"symmetry_axis" + std::to_string(axis), defect <= tol, defect, tol, ""};
}

CheckReport check_monotonicity(const GridFn& u, int axis) {
  require_axis(u, axis, "check_monotonicity");
  const auto& dom = u.domain();
  const double mid = 0.5 * dom.length(axis);
  const auto ax = static_cast<std::size_t>(axis);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < dom.node_count(); ++n) {
    auto idx = dom.node_index(n);
    if (dom.coordinate(n, axis) <= mid || idx[ax] + 1 >= dom.interior_count(axis)) continue;
    ++idx[ax];
    worst = std::max(worst, u[dom.flat_index(idx)] - u[n]);
  }
  const double tol = kMonotonicityTol * u.sup_norm();
  return {"monotonicity_axis" + std::to_string(axis), worst <= tol, worst, tol,
          "max forward difference past the midline"};
}

CheckReport check_hopf(const GridFn& u) {
  const auto& dom = u.domain();
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < dom.node_count(); ++n) {
    const auto idx = dom.node_index(n);
    for (int a = 0; a < dom.dimension(); ++a) {
      const int i = idx[static_cast<std::size_t>(a)];
      if (i == 0 || i == dom.interior_count(a) - 1) smallest = std::min(smallest, u[n] / dom.spacing(a));
    }
  }
  const double floor = kHopfFloor * u.sup_norm();
  return {"hopf", smallest > 0.0 && smallest >= floor, smallest, floor,
          "min inward boundary quotient u(h)/h"};
}

CheckReport stability_margin(const DiscreteDomain& domain, double c_minus_inf) {
  if (!(c_minus_inf >= 0.0)) throw PreconditionError("stability_margin: c_minus_inf must be nonnegative");
  double lambda1 = 0.0;
  for (int a = 0; a < domain.dimension(); ++a) {
    lambda1 += std::pow(std::numbers::pi / domain.length(a), 2);
  }
  const double margin = std::sqrt(lambda1) - c_minus_inf;
  return {"stability_margin", margin > 0.0, margin, 0.0, fmt_detail("sqrt(lambda_1)", std::sqrt(lambda1))};
}

std::vector<CheckReport> check_battery(const SolveReport& report, int weak_mp_samples, std::uint64_t seed) {
  const GridFn& u = report.solution_grid;
  const BasisPtr& basis = report.solution.basis_ptr();
  std::vector<CheckReport> out;
  out.push_back(check_positivity(u));
  for (int a = 0; a < u.domain().dimension(); ++a) out.push_back(check_symmetry(u, a));
  for (int a = 0; a < u.domain().dimension(); ++a) out.push_back(check_monotonicity(u, a));
  out.push_back(check_hopf(u));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  CheckReport worst{"weak_mp", true, std::numeric_limits<double>::infinity(), 0.0, ""};
  bool all_passed = true;
  for (int s = 0; s < weak_mp_samples; ++s) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(u.domain().node_count()));
    for (auto& v : g) v = uni(rng);
    CheckReport r = check_weak_mp(basis, GridFn(u.domain_ptr(), std::move(g)));
    all_passed = all_passed && r.passed;
    if (r.metric < worst.metric) worst = r;
  }
  worst.passed = all_passed;
  if (weak_mp_samples > 0) {
    worst.detail = std::to_string(weak_mp_samples) + " seeded samples; " + worst.detail;
    out.push_back(worst);
  }
  out.push_back(stability_margin(u.domain(), 0.0));
  return out;
}

}  // namespace halflap
