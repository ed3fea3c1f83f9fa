#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dfc/cycle.hpp"
#include "dfc/gains.hpp"
#include "dfc/map_spec.hpp"

namespace dfc {

/// Time series of x(k+1) = a_1 f(x(k)) + a_2 f(x(k-T)) + ... + a_N f(x(k-(N-1)T)).
///
/// `states` starts with the M = (N-1)T + 1 history values (the last of them is
/// x(0)) followed by x(1), x(2), .... `controls[k]` is u(k) = x(k+1) - f(x(k)).
struct Trajectory {
  std::vector<double> states;
  std::vector<double> controls;
  std::size_t history_length = 0;
  bool converged = false;
  bool diverged = false;
  /// Smallest k such that every x(k'), k' >= k, lies within tol of the orbit.
  std::optional<std::size_t> settle_step;
  Cycle target;

  /// x(k) for k >= -(M-1).
  double x(long k) const { return states[static_cast<std::size_t>(k + static_cast<long>(history_length) - 1)]; }
  std::size_t steps() const { return controls.size(); }
};

/// min_j |x - x_j*|.
double distance_to_orbit(double x, const Cycle& target);

/// Runs `steps` controlled iterations. Converged iff the last 10 T states are
/// within `tol` of the orbit set. A non-finite state or a map domain error
/// truncates the run with diverged = true.
Trajectory simulate(const MapSpec& m, const GainVector& a, int period,
                    std::span<const double> init_history, std::size_t steps, const Cycle& target,
                    double tol = 1e-6);

/// History of length (N-1)T + 1 that sits on the orbit, phased so the newest
/// entry is target.points[0].
std::vector<double> orbit_history(const Cycle& target, int n);

struct BasinOptions {
  std::size_t samples = 500;
  std::size_t steps = 5000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Fraction of constant initial histories, drawn uniformly from the map
/// domain, that converge to `target`. Seed-deterministic for any worker count.
double basin_fraction(const MapSpec& m, const GainVector& a, int period, const Cycle& target,
                      const BasinOptions& options = {});

}  // namespace dfc
