#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "dfc/gains.hpp"
#include "dfc/polynomial.hpp"

namespace dfc {

enum class JuryVerdict { Stable, Unstable, Degenerate };

/// Jury table reduction: p(1) > 0, (-1)^n p(-1) > 0, then one row pair per
/// degree with |a_0| < a_n required at each. A vanishing pivot gives
/// Degenerate. The sign of p is normalized so the leading coefficient is
/// positive.
JuryVerdict jury_test(const Polynomial& p);

/// jury_test with Degenerate resolved by the root moduli.
bool jury_stable(const Polynomial& p);

double spectral_radius(const Polynomial& p);

/// Band around the unit circle in which a verdict is reported as marginal.
inline constexpr double kMarginalBand = 1e-6;

struct StabilityReport {
  Polynomial polynomial;
  double spectral_radius = 0.0;
  bool schur_stable = false;  // spectral_radius < 1 - margin
  bool jury_verdict = false;
  bool marginal = false;      // |spectral_radius - 1| <= kMarginalBand
  bool reduced_precision = false;
  std::vector<std::complex<double>> roots;
};

StabilityReport analyze_stability(const Polynomial& p, double margin = 1e-9);

/// Lower end of the stable multiplier range for T = 1: stable boundary
/// crossings satisfy 1/mu = h(theta) = sum_k a_k e^{-ik theta} with
/// Im h = 0, and gamma = 1 / inf Re h over those theta. Returns -infinity
/// when that infimum is non-negative.
double gamma_t1(const GainVector& a, int theta_grid = 100000);

/// Every real mu at which char_poly_closed(n, period, a, mu) has a root on
/// the unit circle: with lambda = e^{i theta}, H(theta) = q(lambda)^T lambda^{-M}
/// must be real and mu = 1 / Re H. Zeros of Im H are located by a sign-change
/// scan on `theta_grid` points of (0, 2 pi) plus bisection; theta = 0 always
/// contributes mu = 1. Sorted ascending.
std::vector<double> unit_circle_multipliers(int n, int period, const GainVector& a,
                                            int theta_grid = 0);

struct MuInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = 1.0;
  GainScheme scheme = GainScheme::Custom;
  int n = 1;
  int period = 1;
  /// Isolated mu in (lo, hi) where a root touches the unit circle without
  /// leaving the disc. Schur stability fails exactly at these points.
  std::vector<double> touches;
};

/// Range of mu around 0 on which char_poly_closed is Schur stable, up to
/// isolated tangencies. Endpoints are located by marching out from mu = 0 and
/// bisecting the spectral_radius = 1 crossing to `tol`; `lo` is -infinity
/// when no crossing exists above `mu_floor`. Roots can also touch the unit
/// circle and turn back without a sign change in spectral_radius - 1; those
/// mu are found among unit_circle_multipliers and listed in `touches`.
MuInterval stable_mu_interval(int n, int period, const GainVector& a,
                              GainScheme scheme = GainScheme::Custom, double tol = 1e-10,
                              double mu_floor = -1e6);

struct IntervalScan {
  bool connected = true;
  /// Grid points whose stability disagrees with membership in the interval.
  std::vector<double> mismatches;
};

/// Checks a MuInterval against a uniform mu grid on [scan_lo, 1].
IntervalScan scan_mu_interval(const MuInterval& interval, const GainVector& a, double scan_lo,
                              int grid);

/// Smallest N <= n_max whose scheme gains give spectral radius < 1 - 1e-9,
/// or nullopt. mu >= 1 is never stabilizable.
std::optional<int> min_N_to_stabilize(int period, double mu, GainScheme scheme, int n_max);

}  // namespace dfc
