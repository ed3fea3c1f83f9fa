#pragma once

#include <cmath>

namespace dfc {

/// Forward-mode dual number: value + deriv * eps with eps^2 = 0.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT: implicit lift of constants
  constexpr Dual(double v, double d) : value(v), deriv(d) {}

  static constexpr Dual variable(double v) { return {v, 1.0}; }
};

constexpr Dual operator+(Dual a, Dual b) { return {a.value + b.value, a.deriv + b.deriv}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.value - b.value, a.deriv - b.deriv}; }
constexpr Dual operator-(Dual a) { return {-a.value, -a.deriv}; }
constexpr Dual operator*(Dual a, Dual b) {
  return {a.value * b.value, a.value * b.deriv + a.deriv * b.value};
}
constexpr Dual operator/(Dual a, Dual b) {
  return {a.value / b.value, (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)};
}

inline Dual sin(Dual a) { return {std::sin(a.value), std::cos(a.value) * a.deriv}; }
inline Dual cos(Dual a) { return {std::cos(a.value), -std::sin(a.value) * a.deriv}; }
inline Dual exp(Dual a) {
  const double e = std::exp(a.value);
  return {e, e * a.deriv};
}
inline Dual tanh(Dual a) {
  const double t = std::tanh(a.value);
  return {t, (1.0 - t * t) * a.deriv};
}
// At a.value == 0 this is the right-hand derivative |a.deriv|.
inline Dual abs(Dual a) {
  if (a.value > 0.0) return a;
  if (a.value < 0.0) return -a;
  return {0.0, std::abs(a.deriv)};
}

/// Integer power. Negative exponents require a nonzero base (checked by the caller).
inline Dual ipow(Dual a, int n) {
  if (n == 0) return {1.0, 0.0};
  const double lower = std::pow(a.value, n - 1);
  return {lower * a.value, n * lower * a.deriv};
}

inline double ipow(double a, int n) { return std::pow(a, n); }

}  // namespace dfc
