#pragma once

#include <span>
#include <vector>

#include "dfc/map_spec.hpp"

namespace dfc {

/// A minimal-period orbit x_0..x_{T-1} with f(x_j) = x_{(j+1) mod T},
/// anchored at its smallest point.
struct Cycle {
  int period = 0;
  std::vector<double> points;
  std::vector<double> multipliers;  // f'(x_j)
  double multiplier_product = 0.0;  // prod of multipliers
};

struct CycleSearchOptions {
  /// Two roots belong to the same orbit when within this distance.
  double orbit_tol = 1e-8;
  /// |f^d(x) - x| below this for a proper divisor d of T disqualifies x.
  double period_tol = 1e-8;
  double bisection_width = 1e-12;
  int newton_iterations = 20;
};

/// f^n(x).
double iterate_map(const MapSpec& m, double x, int n);

/// All minimal-period-T orbits of m on m.domain(), from a sign-change scan of
/// f^T(x) - x on `grid_points` uniformly spaced points, bisection, Newton
/// polish, orbit grouping and minimal-period filtering. Sorted by anchor.
std::vector<Cycle> find_cycles(const MapSpec& m, int period, int grid_points,
                               const CycleSearchOptions& options = {});

struct Multipliers {
  std::vector<double> values;
  double product = 1.0;
};

/// f' at each orbit point and their product. Throws DomainError when
/// |f(p_j) - p_{(j+1) mod T}| exceeds `tol`.
Multipliers multiplier_of(const MapSpec& m, std::span<const double> points, double tol = 1e-8);

}  // namespace dfc
