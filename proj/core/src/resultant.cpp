#include "dfc/resultant.hpp"

#include <cmath>

#include "dfc/error.hpp"

namespace dfc {

RealMatrix sylvester_matrix(const Polynomial& f, const Polynomial& g) {
  if (f.is_zero() || g.is_zero()) throw DomainError("Sylvester matrix of a zero polynomial");
  const int n = f.degree();
  const int m = g.degree();
  if (n < 1 || m < 1) throw DomainError("Sylvester matrix needs degrees >= 1");
  const auto size = static_cast<std::size_t>(n + m);
  RealMatrix s(size, size);
  for (int row = 0; row < m; ++row) {
    for (int k = 0; k <= n; ++k) s(row, row + k) = f[n - k];
  }
  for (int row = 0; row < n; ++row) {
    for (int k = 0; k <= m; ++k) s(m + row, row + k) = g[m - k];
  }
  return s;
}

double resultant(const Polynomial& f, const Polynomial& g) {
  return determinant(sylvester_matrix(f, g));
}

double normalized_discriminant(const Polynomial& p) {
  if (p.degree() < 2) throw DomainError("discriminant needs degree >= 2");
  const Polynomial dp = p.derivative();
  const int n = p.degree();
  const double scale = std::pow(p.norm2(), n - 1) * std::pow(dp.norm2(), n);
  return std::abs(resultant(p, dp)) / scale;
}

bool has_repeated_roots(const Polynomial& p, double tol) {
  if (p.degree() < 2) return false;
  return normalized_discriminant(p) <= tol;
}

}  // namespace dfc
