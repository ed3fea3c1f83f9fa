#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace dfc {

/// Feedback weights a_1..a_N on f(x(k)), f(x(k-T)), ..., f(x(k-(N-1)T)).
/// The weights always sum to one.
class GainVector {
 public:
  /// Throws DomainError if `coeffs` is empty or its sum differs from 1 by
  /// more than `tol`.
  explicit GainVector(std::vector<double> coeffs, double tol = 1e-12);

  std::size_t size() const { return coeffs_.size(); }
  /// 1-based access matching the usual a_1..a_N naming.
  double a(std::size_t j) const { return coeffs_[j - 1]; }
  std::span<const double> coeffs() const { return coeffs_; }

 private:
  std::vector<double> coeffs_;
};

enum class GainScheme { Uniform, Dk2013, Custom };

GainScheme parse_gain_scheme(std::string_view name);
std::string_view to_string(GainScheme scheme);

/// a_j = 1/N.
GainVector gains_uniform(int n);

/// a_j = 2 tan(pi / (2(N+1))) (1 - j/(N+1)) sin(pi j / (N+1)).
GainVector gains_dk2013(int n);

/// Generator for the non-custom schemes.
GainVector make_gains(GainScheme scheme, int n);

}  // namespace dfc
