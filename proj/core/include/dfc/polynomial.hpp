#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace dfc {

/// Real polynomial in lambda, coefficients in ascending degree order
/// (coeffs()[k] multiplies lambda^k). Trailing zeros are trimmed, so the
/// leading coefficient is nonzero unless the polynomial is identically zero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial monomial(int degree, double coeff = 1.0);

  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> z) const;

  Polynomial derivative() const;
  Polynomial pow(int n) const;
  double norm2() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);

 private:
  void trim();
  std::vector<double> coeffs_;
};

}  // namespace dfc
