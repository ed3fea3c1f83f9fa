#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "dfc/dual.hpp"
#include "dfc/expression.hpp"

namespace dfc {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Built-in families:
///   logistic(r):  r x (1 - x),  default r = 4,  domain [0, 1]
///   quadratic(c): x^2 + c,      default c = -2, domain [-2, 2]
///   cubic(b):     b x - x^3,    default b = 3,  domain [-2, 2]
struct BuiltinMap {
  enum class Family { Logistic, Quadratic, Cubic };
  Family family;
  double parameter;
};

/// A scalar map f: R -> R together with the interval it is studied on.
/// Immutable after construction.
class MapSpec {
 public:
  MapSpec(BuiltinMap builtin, Interval domain);
  MapSpec(Expr expression, Interval domain);

  const Interval& domain() const { return domain_; }
  bool is_builtin() const { return std::holds_alternative<BuiltinMap>(kind_); }
  const std::variant<BuiltinMap, Expr>& kind() const { return kind_; }

  /// Human-readable designator ("logistic:r=4" or the printed expression).
  std::string describe() const;

  /// Unchecked evaluation, shared by the checked entry points below.
  double raw(double x) const;
  Dual raw(Dual x) const;

 private:
  std::variant<BuiltinMap, Expr> kind_;
  Interval domain_;
};

/// Parses "name:key=val,..." for built-ins, otherwise an expression in `x`.
/// `params` binds named parameters of expressions (and may override built-in
/// parameters). `domain` overrides the family default when given.
MapSpec parse_map(std::string_view source, const std::map<std::string, double>& params = {},
                  const Interval* domain = nullptr);

/// f(x). Throws DomainError on division by zero and OverflowError when the
/// result is not finite.
double eval_map(const MapSpec& m, double x);

/// f'(x) by dual-number propagation.
double eval_map_deriv(const MapSpec& m, double x);

/// (f(x), f'(x)) in one pass.
Dual eval_map_dual(const MapSpec& m, double x);

}  // namespace dfc
