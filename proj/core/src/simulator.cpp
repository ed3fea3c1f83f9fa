#include "dfc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "dfc/error.hpp"
#include "dfc/random.hpp"
#include "dfc/spectrum.hpp"

namespace dfc {

double distance_to_orbit(double x, const Cycle& target) {
  double d = std::numeric_limits<double>::infinity();
  for (double p : target.points) d = std::min(d, std::abs(x - p));
  return d;
}

Trajectory simulate(const MapSpec& m, const GainVector& a, int period,
                    std::span<const double> init_history, std::size_t steps, const Cycle& target,
                    double tol) {
  const int n = static_cast<int>(a.size());
  const std::size_t hist = state_dimension(n, period);
  if (init_history.size() != hist) {
    throw DomainError("initial history must have (N-1)T+1 = " + std::to_string(hist) + " values");
  }
  const std::size_t window = 10 * static_cast<std::size_t>(period);
  if (steps < window) throw DomainError("steps must be at least 10 T");
  if (target.points.empty()) throw DomainError("target orbit is empty");

  Trajectory tr;
  tr.target = target;
  tr.history_length = hist;
  tr.states.assign(init_history.begin(), init_history.end());
  tr.states.reserve(hist + steps);
  tr.controls.reserve(steps);

  // f at every stored state, computed once.
  std::vector<double> images;
  images.reserve(hist + steps);
  try {
    for (double x : tr.states) images.push_back(eval_map(m, x));
    for (std::size_t k = 0; k < steps; ++k) {
      const std::size_t now = tr.states.size() - 1;
      double next = 0.0;
      for (int j = 1; j <= n; ++j) {
        next += a.a(j) * images[now - static_cast<std::size_t>(j - 1) * period];
      }
      if (!std::isfinite(next)) throw OverflowError("state is not finite");
      tr.controls.push_back(next - images[now]);
      tr.states.push_back(next);
      images.push_back(eval_map(m, next));
    }
  } catch (const DomainError&) {
    tr.diverged = true;
    return tr;
  }

  // Walk back from the end while states stay near the orbit.
  std::size_t first_near = tr.states.size();
  while (first_near > hist - 1 && distance_to_orbit(tr.states[first_near - 1], target) <= tol) {
    --first_near;
  }
  const std::size_t near_count = tr.states.size() - first_near;
  tr.converged = near_count >= window;
  if (tr.converged) tr.settle_step = first_near - (hist - 1);
  return tr;
}

std::vector<double> orbit_history(const Cycle& target, int n) {
  const int period = static_cast<int>(target.points.size());
  const std::size_t hist = state_dimension(n, period);
  std::vector<double> h(hist);
  // h.back() is x(0) = points[0]; h[i] is x(i - (hist - 1)).
  for (std::size_t i = 0; i < hist; ++i) {
    const long k = static_cast<long>(i) - static_cast<long>(hist - 1);
    const long idx = ((k % period) + period) % period;
    h[i] = target.points[static_cast<std::size_t>(idx)];
  }
  return h;
}

double basin_fraction(const MapSpec& m, const GainVector& a, int period, const Cycle& target,
                      const BasinOptions& options) {
  if (options.samples == 0) throw DomainError("samples must be positive");
  const CounterRng rng(options.seed);
  const std::size_t hist = state_dimension(static_cast<int>(a.size()), period);
  const Interval dom = m.domain();

  auto run_range = [&](std::size_t begin, std::size_t end) {
    std::size_t hits = 0;
    std::vector<double> history(hist);
    for (std::size_t i = begin; i < end; ++i) {
      const double x0 = dom.lo + (dom.hi - dom.lo) * rng.uniform(i);
      std::fill(history.begin(), history.end(), x0);
      if (simulate(m, a, period, history, options.steps, target, options.tol).converged) ++hits;
    }
    return hits;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, options.samples));
  std::vector<std::size_t> hits(workers, 0);
  std::vector<std::thread> pool;
  const std::size_t chunk = (options.samples + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(options.samples, w * chunk);
    const std::size_t end = std::min(options.samples, begin + chunk);
    if (w + 1 == workers) {
      hits[w] = run_range(begin, end);
    } else {
      pool.emplace_back([&, w, begin, end] { hits[w] = run_range(begin, end); });
    }
  }
  for (auto& t : pool) t.join();
  std::size_t total = 0;
  for (std::size_t h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(options.samples);
}

}  // namespace dfc
