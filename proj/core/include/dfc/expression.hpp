#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dfc/dual.hpp"

namespace dfc {

/// Immutable expression tree over a single variable `x`.
///
/// Grammar (whitespace ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' ['-'] integer)*
///   primary := number | 'x' | param | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | exp | tanh | abs
class Expr {
 public:
  enum class Kind { Constant, Variable, Parameter, Add, Sub, Mul, Div, Neg, Pow, Call };
  enum class Func { Sin, Cos, Exp, Tanh, Abs };

  struct Node {
    explicit Node(Kind k) : kind(k) {}

    Kind kind;
    double value = 0.0;   // Constant; bound value for Parameter
    std::string name;     // Parameter
    int exponent = 0;     // Pow
    Func func = Func::Sin;  // Call
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }

  double eval(double x) const;
  Dual eval(Dual x) const;

  /// Fully parenthesized text that parses back to an equivalent tree.
  std::string to_string() const;

 private:
  NodePtr root_;
};

/// Parses `source`, binding named parameters from `params`. Throws ParseError
/// on syntax errors, unknown identifiers and non-integer exponents.
Expr parse_expression(std::string_view source, const std::map<std::string, double>& params = {});

}  // namespace dfc
