#include "dfc/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dfc/error.hpp"

namespace dfc {
namespace {

// g(x) = f^T(x) - x together with g'(x).
Dual return_map(const MapSpec& m, double x, int period) {
  Dual y = Dual::variable(x);
  for (int i = 0; i < period; ++i) y = m.raw(y);
  return y - Dual::variable(x);
}

double return_gap(const MapSpec& m, double x, int period) {
  return iterate_map(m, x, period) - x;
}

double bisect(const MapSpec& m, double lo, double hi, double g_lo, int period, double width) {
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = return_gap(m, mid, period);
    if (g_mid == 0.0) return mid;
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Newton on g from the bisection root; kept only if it stays near the bracket
// and does not increase |g|.
double polish(const MapSpec& m, double root, double lo, double hi, int period, int iterations) {
  double x = root;
  double best = std::abs(return_gap(m, root, period));
  double best_x = root;
  const double slack = 1e-9 * (1.0 + std::abs(root));
  for (int it = 0; it < iterations && best > 0.0; ++it) {
    const Dual g = return_map(m, x, period);
    if (g.deriv == 0.0 || !std::isfinite(g.deriv)) break;
    const double next = x - g.value / g.deriv;
    if (!std::isfinite(next) || next < lo - slack || next > hi + slack) break;
    const double r = std::abs(return_gap(m, next, period));
    if (r < best) {
      best = r;
      best_x = next;
    }
    if (next == x) break;
    x = next;
  }
  return best_x;
}

bool has_shorter_period(const MapSpec& m, double x, int period, double tol) {
  for (int d = 1; d < period; ++d) {
    if (period % d == 0 && std::abs(iterate_map(m, x, d) - x) <= tol) return true;
  }
  return false;
}

}  // namespace

double iterate_map(const MapSpec& m, double x, int n) {
  for (int i = 0; i < n; ++i) x = eval_map(m, x);
  return x;
}

std::vector<Cycle> find_cycles(const MapSpec& m, int period, int grid_points,
                               const CycleSearchOptions& options) {
  if (period < 1) throw DomainError("period must be >= 1");
  if (grid_points < 100) throw DomainError("grid must have at least 100 points");

  const Interval dom = m.domain();
  const double step = (dom.hi - dom.lo) / (grid_points - 1);
  std::vector<double> xs(grid_points), gs(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    xs[i] = i + 1 == grid_points ? dom.hi : dom.lo + i * step;
    try {
      gs[i] = return_gap(m, xs[i], period);
    } catch (const DomainError&) {
      gs[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }

  std::vector<double> roots;
  for (int i = 0; i < grid_points; ++i) {
    if (gs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < grid_points && std::isfinite(gs[i]) && std::isfinite(gs[i + 1]) &&
        gs[i + 1] != 0.0 && (gs[i] < 0.0) != (gs[i + 1] < 0.0)) {
      const double r = bisect(m, xs[i], xs[i + 1], gs[i], period, options.bisection_width);
      roots.push_back(polish(m, r, xs[i], xs[i + 1], period, options.newton_iterations));
    }
  }
  std::sort(roots.begin(), roots.end());

  std::vector<Cycle> cycles;
  auto known = [&](double x) {
    for (const Cycle& c : cycles) {
      for (double p : c.points) {
        if (std::abs(p - x) <= options.orbit_tol * (1.0 + std::abs(p))) return true;
      }
    }
    return false;
  };

  // Roots are visited in ascending order; each orbit is still rotated onto its
  // smallest point in case that point's root was missed by the scan.
  for (double root : roots) {
    if (known(root)) continue;
    if (has_shorter_period(m, root, period, options.period_tol)) continue;
    Cycle c;
    c.period = period;
    c.points.reserve(period);
    double x = root;
    for (int j = 0; j < period; ++j) {
      c.points.push_back(x);
      x = eval_map(m, x);
    }
    if (std::abs(x - root) > options.orbit_tol * (1.0 + std::abs(root))) continue;
    std::rotate(c.points.begin(), std::min_element(c.points.begin(), c.points.end()),
                c.points.end());
    Multipliers mu = multiplier_of(m, c.points, options.orbit_tol);
    c.multipliers = std::move(mu.values);
    c.multiplier_product = mu.product;
    cycles.push_back(std::move(c));
  }
  return cycles;
}

Multipliers multiplier_of(const MapSpec& m, std::span<const double> points, double tol) {
  if (points.empty()) throw DomainError("orbit must contain at least one point");
  Multipliers out;
  out.values.reserve(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    const Dual y = eval_map_dual(m, points[j]);
    const double next = points[(j + 1) % points.size()];
    if (std::abs(y.value - next) > tol * (1.0 + std::abs(points[j]))) {
      throw DomainError("points do not form an orbit: |f(x_" + std::to_string(j) +
                        ") - x_" + std::to_string((j + 1) % points.size()) + "| too large");
    }
    out.values.push_back(y.deriv);
    out.product *= y.deriv;
  }
  return out;
}

}  // namespace dfc
