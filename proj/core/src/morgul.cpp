#include "dfc/morgul.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "dfc/error.hpp"

namespace dfc {
namespace {

void check(int period, std::span<const double> multipliers) {
  if (period < 1 || period > 30) throw DomainError("T must be in 1..30");
  if (multipliers.size() != static_cast<std::size_t>(period)) {
    throw DomainError("expected " + std::to_string(period) + " multipliers");
  }
}

}  // namespace

Polynomial morgul_char_poly(int period, std::span<const double> multipliers, double gain) {
  check(period, multipliers);
  std::vector<double> shifted(multipliers.begin(), multipliers.end());
  for (double& b : shifted) b += gain;

  // Sum over l-subsets of the complementary products, by subset enumeration.
  std::vector<double> subset_sum(static_cast<std::size_t>(period) + 1, 0.0);
  const unsigned long subsets = 1ul << period;
  for (unsigned long mask = 0; mask < subsets; ++mask) {
    double prod = 1.0;
    int chosen = 0;
    for (int i = 0; i < period; ++i) {
      if (mask & (1ul << i)) {
        ++chosen;
      } else {
        prod *= shifted[i];
      }
    }
    subset_sum[chosen] += prod;
  }

  std::vector<double> c(static_cast<std::size_t>(period) + 2, 0.0);
  c[period + 1] = 1.0;
  for (int l = 0; l <= period; ++l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    c[period - l] = -sign * std::pow(gain, l) * subset_sum[l];
  }
  return Polynomial(std::move(c));
}

RealMatrix morgul_jacobian_product(int period, std::span<const double> multipliers, double gain) {
  check(period, multipliers);
  const std::size_t dim = static_cast<std::size_t>(period) + 1;
  auto step = [&](double mu) {
    RealMatrix s(dim, dim);
    for (std::size_t i = 0; i + 1 < dim; ++i) s(i, i + 1) = 1.0;
    s(dim - 1, 0) += -gain;
    s(dim - 1, dim - 1) += mu + gain;
    return s;
  };
  RealMatrix j = step(multipliers[0]);
  for (int t = 1; t < period; ++t) j = step(multipliers[t]) * j;
  return j;
}

}  // namespace dfc
