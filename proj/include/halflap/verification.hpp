#pragma once

#include "halflap/nonlinear.hpp"

#include <string>
#include <vector>

namespace halflap {

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Outcome of one qualitative check; `passed` is decided by comparing
/// `metric` with `tolerance` in the direction documented per check.
struct CheckReport {
  std::string name;
  bool passed = false;
  double metric = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Relative floor for the weak maximum principle: min B_half g >= -kWeakMpTol * sup g.
inline constexpr double kWeakMpTol = 1e-8;
inline constexpr double kSymmetryTol = 1e-8;
inline constexpr double kMonotonicityTol = 1e-10;
inline constexpr double kHopfFloor = 1e-6;

/// u = synth(B_half analyze(g)) for g >= 0; passes iff min u >= -kWeakMpTol sup g.
CheckReport check_weak_mp(const BasisPtr& basis, const GridFn& g);

/// Passes iff min u > 0, or u vanishes identically. metric = min u.
CheckReport check_positivity(const GridFn& u);

/// metric = sup |u - reflect(u, axis)|; passes iff metric <= rel_tol * sup|u|.
CheckReport check_symmetry(const GridFn& u, int axis, double rel_tol = kSymmetryTol);

/// Worst forward difference along the axis over nodes past the midline;
/// passes iff it is <= kMonotonicityTol * sup|u|.
CheckReport check_monotonicity(const GridFn& u, int axis);

/// Smallest inward one-sided quotient u(first interior node)/h over all faces;
/// passes iff it is >= kHopfFloor * sup|u| and positive.
CheckReport check_hopf(const GridFn& u);

/// metric = sqrt(lambda_1) - c_minus_inf; passes iff metric > 0.
CheckReport stability_margin(const DiscreteDomain& domain, double c_minus_inf);

/// Full battery on a solve: positivity, symmetry and monotonicity on every
/// axis, Hopf, plus the weak maximum principle on `weak_mp_samples` seeded
/// nonnegative random data and the stability margin for c = 0.
std::vector<CheckReport> check_battery(const SolveReport& report, int weak_mp_samples, std::uint64_t seed);

}  // namespace halflap
