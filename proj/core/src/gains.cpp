#include "dfc/gains.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dfc/error.hpp"

namespace dfc {

GainVector::GainVector(std::vector<double> coeffs, double tol) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("gain vector needs at least one coefficient");
  const double sum = std::accumulate(coeffs_.begin(), coeffs_.end(), 0.0);
  if (!(std::abs(sum - 1.0) <= tol)) {
    throw DomainError("gain coefficients must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

GainScheme parse_gain_scheme(std::string_view name) {
  if (name == "uniform") return GainScheme::Uniform;
  if (name == "dk2013") return GainScheme::Dk2013;
  if (name == "custom") return GainScheme::Custom;
  throw DomainError("unknown gain scheme '" + std::string(name) + "'");
}

std::string_view to_string(GainScheme scheme) {
  switch (scheme) {
    case GainScheme::Uniform: return "uniform";
    case GainScheme::Dk2013: return "dk2013";
    case GainScheme::Custom: return "custom";
  }
  return "?";
}

GainVector gains_uniform(int n) {
  if (n < 1) throw DomainError("N must be >= 1");
  return GainVector(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

GainVector gains_dk2013(int n) {
  if (n < 1) throw DomainError("N must be >= 1");
  const double np1 = n + 1.0;
  const double scale = 2.0 * std::tan(std::numbers::pi / (2.0 * np1));
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) {
    a[j - 1] = scale * (1.0 - j / np1) * std::sin(std::numbers::pi * j / np1);
  }
  const double sum = std::accumulate(a.begin(), a.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) throw std::logic_error("dk2013 gains do not sum to 1");
  return GainVector(std::move(a), 1e-9);
}

GainVector make_gains(GainScheme scheme, int n) {
  switch (scheme) {
    case GainScheme::Uniform: return gains_uniform(n);
    case GainScheme::Dk2013: return gains_dk2013(n);
    case GainScheme::Custom: break;
  }
  throw DomainError("custom gains must be given explicitly");
}

}  // namespace dfc
