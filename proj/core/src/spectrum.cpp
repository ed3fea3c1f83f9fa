#include "dfc/spectrum.hpp"

#include <cmath>
#include <string>

#include "dfc/error.hpp"

namespace dfc {
namespace {

void check_shape(int n, int period, const GainVector& a) {
  if (n < 1 || period < 1) throw DomainError("N and T must be positive");
  if (a.size() != static_cast<std::size_t>(n)) {
    throw DomainError("gain vector has " + std::to_string(a.size()) + " entries, expected N = " +
                      std::to_string(n));
  }
}

void check_multipliers(int period, std::span<const double> multipliers) {
  if (multipliers.size() != static_cast<std::size_t>(period)) {
    throw DomainError("expected T = " + std::to_string(period) + " multipliers, got " +
                      std::to_string(multipliers.size()));
  }
}

}  // namespace

std::size_t state_dimension(int n, int period) {
  return static_cast<std::size_t>(n - 1) * static_cast<std::size_t>(period) + 1;
}

Polynomial gain_polynomial(const GainVector& a) {
  const std::size_t n = a.size();
  std::vector<double> q(n);
  for (std::size_t k = 0; k < n; ++k) q[k] = a.a(n - k);
  return Polynomial(std::move(q));
}

Polynomial char_poly_closed(int n, int period, const GainVector& a, double mu) {
  check_shape(n, period, a);
  const int dim = static_cast<int>(state_dimension(n, period));
  return Polynomial::monomial(dim) - mu * gain_polynomial(a).pow(period);
}

RealMatrix step_jacobian(int n, int period, const GainVector& a, double mu_at_step) {
  check_shape(n, period, a);
  const std::size_t dim = state_dimension(n, period);
  RealMatrix s(dim, dim);
  for (std::size_t i = 0; i + 1 < dim; ++i) s(i, i + 1) = 1.0;
  for (int k = 1; k <= n; ++k) {
    const std::size_t col = dim - static_cast<std::size_t>(k - 1) * period;  // 1-based
    s(dim - 1, col - 1) += a.a(k) * mu_at_step;
  }
  return s;
}

RealMatrix jacobian_via_chain(int n, int period, const GainVector& a,
                              std::span<const double> multipliers) {
  check_shape(n, period, a);
  check_multipliers(period, multipliers);
  RealMatrix j = step_jacobian(n, period, a, multipliers[0]);
  for (int t = 1; t < period; ++t) j = step_jacobian(n, period, a, multipliers[t]) * j;
  return j;
}

RealMatrix build_jacobian(int n, int period, const GainVector& a,
                          std::span<const double> multipliers) {
  check_shape(n, period, a);
  check_multipliers(period, multipliers);
  const long dim = static_cast<long>(state_dimension(n, period));
  const long T = period;
  const long first_update_row = static_cast<long>(n - 2) * T + 2;
  RealMatrix j(dim, dim);
  for (long i = 1; i <= dim; ++i) {
    for (long c = 1; c <= dim; ++c) {
      double v = 0.0;
      if (c == i + T) {
        v = 1.0;
      } else if (i >= first_update_row) {
        const long r = i - first_update_row + 1;
        const long s = (c - 1) % T + 1;
        if (s <= r) {
          v = a.a(static_cast<std::size_t>(n - (c - 1) / T)) * std::pow(a.a(1), r - s);
          for (long k = s; k <= r; ++k) v *= multipliers[k - 1];
        }
      }
      j(i - 1, c - 1) = v;
    }
  }
  return j;
}

Polynomial char_poly_faddeev(const RealMatrix& m) {
  if (!m.square()) throw DomainError("characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  if (n > kMaxFaddeevDimension) {
    throw DomainError("matrix dimension " + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(kMaxFaddeevDimension));
  }
  // M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  RealMatrix acc(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    RealMatrix next = m * acc;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    c[n - k] = -(m * next).trace() / static_cast<double>(k);
    acc = std::move(next);
  }
  return Polynomial(std::move(c));
}

}  // namespace dfc
