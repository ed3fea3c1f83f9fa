#include "dfc/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "dfc/error.hpp"
#include "dfc/roots.hpp"
#include "dfc/spectrum.hpp"

namespace dfc {

JuryVerdict jury_test(const Polynomial& p) {
  if (p.degree() < 1) throw DomainError("Jury test needs degree >= 1");
  const double sign = p.leading() > 0.0 ? 1.0 : -1.0;
  const Polynomial q = sign * p;
  const int n = q.degree();

  const double at_one = q(1.0);
  const double at_minus_one = (n % 2 == 0 ? 1.0 : -1.0) * q(-1.0);
  if (at_one < 0.0 || at_minus_one < 0.0) return JuryVerdict::Unstable;
  if (at_one == 0.0 || at_minus_one == 0.0) return JuryVerdict::Unstable;

  constexpr double pivot_tol = 1e-13;
  std::vector<double> c(q.coeffs().begin(), q.coeffs().end());
  while (c.size() > 1) {
    const std::size_t k = c.size() - 1;
    const double lead = c[k];
    const double tail = c[0];
    const double gap = std::abs(lead) - std::abs(tail);
    if (std::abs(gap) <= pivot_tol * std::abs(lead)) return JuryVerdict::Degenerate;
    if (gap < 0.0) return JuryVerdict::Unstable;
    // Next table row: (a_n p(z) - a_0 p*(z)) / z, normalized to a unit leading term.
    std::vector<double> next(k);
    for (std::size_t j = 0; j < k; ++j) next[j] = lead * c[j + 1] - tail * c[k - 1 - j];
    const double scale = next.back();
    if (scale <= 0.0) return JuryVerdict::Degenerate;
    for (double& v : next) v /= scale;
    c = std::move(next);
  }
  return JuryVerdict::Stable;
}

bool jury_stable(const Polynomial& p) {
  switch (jury_test(p)) {
    case JuryVerdict::Stable: return true;
    case JuryVerdict::Unstable: return false;
    case JuryVerdict::Degenerate: break;
  }
  return spectral_radius(p) < 1.0;
}

double spectral_radius(const Polynomial& p) {
  double r = 0.0;
  for (const auto& z : poly_roots(p)) r = std::max(r, std::abs(z));
  return r;
}

StabilityReport analyze_stability(const Polynomial& p, double margin) {
  StabilityReport report;
  report.polynomial = p;
  RootSet rs = find_roots(p);
  report.reduced_precision = rs.reduced_precision;
  report.roots = std::move(rs.roots);
  for (const auto& z : report.roots) {
    report.spectral_radius = std::max(report.spectral_radius, std::abs(z));
  }
  report.schur_stable = report.spectral_radius < 1.0 - margin;
  report.marginal = std::abs(report.spectral_radius - 1.0) <= kMarginalBand;
  const JuryVerdict jv = jury_test(p);
  report.jury_verdict =
      jv == JuryVerdict::Degenerate ? report.spectral_radius < 1.0 : jv == JuryVerdict::Stable;
  return report;
}

namespace {

// Angles in (0, 2 pi) where Im F(theta) = 0: simple zeros by sign change and
// bisection, double zeros (tangencies) as local minima of |Im F| refined by
// golden-section search and accepted when numerically zero.
template <typename F>
std::vector<double> real_axis_angles(F&& f, int grid) {
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> theta(grid + 1), im(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    theta[i] = two_pi * i / grid;
    im[i] = f(theta[i]).imag();
  }
  std::vector<double> out;
  for (int i = 1; i < grid; ++i) {
    if (im[i] == 0.0) {
      out.push_back(theta[i]);
      continue;
    }
    if (i + 1 < grid && im[i + 1] != 0.0 && (im[i] < 0.0) != (im[i + 1] < 0.0)) {
      double lo = theta[i], hi = theta[i + 1], g_lo = im[i];
      for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = f(mid).imag();
        if (g == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((g < 0.0) == (g_lo < 0.0)) {
          lo = mid;
          g_lo = g;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
      continue;
    }
    const bool local_min = std::abs(im[i]) < std::abs(im[i - 1]) &&
                           std::abs(im[i]) <= std::abs(im[i + 1]) &&
                           (im[i - 1] < 0.0) == (im[i] < 0.0) &&
                           (im[i + 1] < 0.0) == (im[i] < 0.0);
    if (!local_min) continue;
    constexpr double golden = 0.6180339887498949;
    double a = theta[i - 1], b = theta[i + 1];
    double c = b - golden * (b - a), d = a + golden * (b - a);
    double fc = std::abs(f(c).imag()), fd = std::abs(f(d).imag());
    for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - golden * (b - a);
        fc = std::abs(f(c).imag());
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + golden * (b - a);
        fd = std::abs(f(d).imag());
      }
    }
    const double best = fc < fd ? c : d;
    const auto value = f(best);
    if (std::abs(value.imag()) <= 1e-12 * (1.0 + std::abs(value))) out.push_back(best);
  }
  return out;
}

}  // namespace

double gamma_t1(const GainVector& a, int theta_grid) {
  if (theta_grid < 10000) throw DomainError("theta grid must have at least 10^4 points");
  // h(theta) = sum_k a_k e^{-ik theta}; 1/mu = h on the unit circle.
  auto h = [&](double theta) {
    std::complex<double> s = 0.0;
    for (std::size_t k = 1; k <= a.size(); ++k) s += a.a(k) * std::polar(1.0, -(k * theta));
    return s;
  };
  const std::vector<double> zeros = real_axis_angles(h, theta_grid);
  if (zeros.empty()) throw DomainError("no zero of Im h on (0, 2 pi)");
  double inf_re = std::numeric_limits<double>::infinity();
  for (double theta : zeros) inf_re = std::min(inf_re, h(theta).real());
  if (inf_re >= 0.0) return -std::numeric_limits<double>::infinity();
  return 1.0 / inf_re;
}

std::vector<double> unit_circle_multipliers(int n, int period, const GainVector& a,
                                            int theta_grid) {
  const Polynomial q = gain_polynomial(a);
  const int dim = static_cast<int>(state_dimension(n, period));
  if (theta_grid <= 0) theta_grid = std::max(20000, 2000 * dim);
  auto h = [&](double theta) {
    return std::pow(q(std::polar(1.0, theta)), period) * std::polar(1.0, -dim * theta);
  };
  double scale = 0.0;
  for (double x : a.coeffs()) scale += std::abs(x);
  const double vanish = 1e-9 * std::pow(scale, period);
  std::vector<double> out{1.0};
  for (double theta : real_axis_angles(h, theta_grid)) {
    // Where q itself vanishes on the circle, p = lambda^M there for every mu.
    const auto hv = h(theta);
    if (std::abs(hv) > vanish) out.push_back(1.0 / hv.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool stable_at(int n, int period, const GainVector& a, double mu) {
  return spectral_radius(char_poly_closed(n, period, a, mu)) < 1.0;
}

// Crossing between a stable `inside` and an unstable `outside`.
double bisect_boundary(int n, int period, const GainVector& a, double inside, double outside,
                       double tol) {
  while (std::abs(outside - inside) > tol) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    if (stable_at(n, period, a, mid)) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

}  // namespace

MuInterval stable_mu_interval(int n, int period, const GainVector& a, GainScheme scheme,
                              double tol, double mu_floor) {
  MuInterval out;
  out.scheme = scheme;
  out.n = n;
  out.period = period;

  // mu = 0 gives p = lambda^M, always stable. mu = 1 gives p(1) = 0.
  double inside = 0.0;
  out.hi = 1.0;
  for (double mu = 0.125; mu < 1.0; mu += 0.125) {
    if (!stable_at(n, period, a, mu)) {
      out.hi = bisect_boundary(n, period, a, inside, mu, tol);
      break;
    }
    inside = mu;
  }
  if (out.hi == 1.0) out.hi = bisect_boundary(n, period, a, inside, 1.0, tol);

  inside = 0.0;
  out.lo = -std::numeric_limits<double>::infinity();
  while (inside > mu_floor) {
    const double step = std::max(0.25, std::abs(inside) / 256.0);
    const double mu = std::max(inside - step, mu_floor);
    if (!stable_at(n, period, a, mu)) {
      out.lo = bisect_boundary(n, period, a, inside, mu, tol);
      break;
    }
    inside = mu;
  }

  for (double mu : unit_circle_multipliers(n, period, a)) {
    if (mu - out.lo <= tol || out.hi - mu <= tol) continue;
    if (spectral_radius(char_poly_closed(n, period, a, mu)) < 1.0 - 1e-9) continue;
    if (out.touches.empty() || mu - out.touches.back() > 1e-6 * (1.0 + std::abs(mu))) {
      out.touches.push_back(mu);
    }
  }
  return out;
}

IntervalScan scan_mu_interval(const MuInterval& interval, const GainVector& a, double scan_lo,
                              int grid) {
  if (grid < 2) throw DomainError("scan grid must have at least 2 points");
  IntervalScan scan;
  const double guard = 1e-6;
  for (int i = 0; i < grid; ++i) {
    const double mu = scan_lo + (1.0 - scan_lo) * i / (grid - 1);
    if (std::abs(mu - interval.lo) <= guard || std::abs(mu - interval.hi) <= guard) continue;
    const bool inside = mu > interval.lo && mu < interval.hi;
    if (stable_at(interval.n, interval.period, a, mu) != inside) {
      scan.connected = false;
      scan.mismatches.push_back(mu);
    }
  }
  return scan;
}

std::optional<int> min_N_to_stabilize(int period, double mu, GainScheme scheme, int n_max) {
  if (mu >= 1.0) return std::nullopt;
  for (int n = 1; n <= n_max; ++n) {
    const GainVector a = make_gains(scheme, n);
    if (spectral_radius(char_poly_closed(n, period, a, mu)) < 1.0 - 1e-9) return n;
  }
  return std::nullopt;
}

}  // namespace dfc
