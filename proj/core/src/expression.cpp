#include "dfc/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "dfc/error.hpp"

namespace dfc {
namespace {

using Node = Expr::Node;
using NodePtr = Expr::NodePtr;
using Kind = Expr::Kind;
using Func = Expr::Func;

NodePtr make(Node node) { return std::make_shared<const Node>(std::move(node)); }

NodePtr binary(Kind kind, NodePtr lhs, NodePtr rhs) {
  Node n{kind};
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return make(std::move(n));
}

bool lookup_func(std::string_view name, Func& out) {
  static const std::pair<std::string_view, Func> table[] = {
      {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp},
      {"tanh", Func::Tanh}, {"abs", Func::Abs}};
  for (const auto& [n, f] : table) {
    if (n == name) {
      out = f;
      return true;
    }
  }
  return false;
}

class Parser {
 public:
  Parser(std::string_view src, const std::map<std::string, double>& params)
      : src_(src), params_(params) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = binary(Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      Node n{Kind::Neg};
      n.lhs = unary();
      return make(std::move(n));
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    while (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      bool negative = false;
      if (pos_ < src_.size() && src_[pos_] == '-') {
        negative = true;
        ++pos_;
      }
      const std::size_t digits = pos_;
      double v = 0.0;
      if (!scan_number(v)) {
        pos_ = digits;
        fail("expected integer exponent");
      }
      if (v != std::floor(v) || std::abs(v) > 1024.0) {
        pos_ = start;
        fail("non-integer exponent");
      }
      Node n{Kind::Pow};
      n.lhs = base;
      n.exponent = static_cast<int>(negative ? -v : v);
      base = make(std::move(n));
    }
    return base;
  }

  bool scan_number(double& out) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    if (pos_ == start) return false;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, out);
    if (ec != std::errc() || ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return true;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      Node n{Kind::Constant};
      scan_number(n.value);
      return make(std::move(n));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(src_.substr(start, pos_ - start));
      Func f;
      if (lookup_func(name, f)) {
        expect('(');
        Node n{Kind::Call};
        n.func = f;
        n.lhs = expr();
        expect(')');
        return make(std::move(n));
      }
      if (name == "x") return make(Node{Kind::Variable});
      const auto it = params_.find(name);
      if (it == params_.end()) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      Node n{Kind::Parameter};
      n.name = name;
      n.value = it->second;
      return make(std::move(n));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
};

template <typename S>
S apply(Func f, S a) {
  using std::abs, std::cos, std::exp, std::sin, std::tanh;
  switch (f) {
    case Func::Sin: return sin(a);
    case Func::Cos: return cos(a);
    case Func::Exp: return exp(a);
    case Func::Tanh: return tanh(a);
    case Func::Abs: return abs(a);
  }
  return a;
}

double value_of(double v) { return v; }
double value_of(const Dual& d) { return d.value; }

template <typename S>
S evaluate(const Node& n, S x) {
  switch (n.kind) {
    case Kind::Constant:
    case Kind::Parameter:
      return S(n.value);
    case Kind::Variable:
      return x;
    case Kind::Add: return evaluate(*n.lhs, x) + evaluate(*n.rhs, x);
    case Kind::Sub: return evaluate(*n.lhs, x) - evaluate(*n.rhs, x);
    case Kind::Mul: return evaluate(*n.lhs, x) * evaluate(*n.rhs, x);
    case Kind::Div: {
      const S den = evaluate(*n.rhs, x);
      if (value_of(den) == 0.0) throw DomainError("division by zero");
      return evaluate(*n.lhs, x) / den;
    }
    case Kind::Neg: return -evaluate(*n.lhs, x);
    case Kind::Pow: {
      const S base = evaluate(*n.lhs, x);
      if (n.exponent < 0 && value_of(base) == 0.0) throw DomainError("division by zero");
      return ipow(base, n.exponent);
    }
    case Kind::Call: return apply(n.func, evaluate(*n.lhs, x));
  }
  return x;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Tanh: return "tanh";
    case Func::Abs: return "abs";
  }
  return "?";
}

void print(const Node& n, std::ostringstream& os) {
  switch (n.kind) {
    case Kind::Constant: {
      char buf[32];
      const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, std::abs(n.value));
      if (n.value < 0) os << "(-" << std::string_view(buf, end - buf) << ')';
      else os << std::string_view(buf, end - buf);
      return;
    }
    case Kind::Variable: os << 'x'; return;
    case Kind::Parameter: os << n.name; return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const char op = n.kind == Kind::Add ? '+' : n.kind == Kind::Sub ? '-' : n.kind == Kind::Mul ? '*' : '/';
      os << '(';
      print(*n.lhs, os);
      os << op;
      print(*n.rhs, os);
      os << ')';
      return;
    }
    case Kind::Neg:
      os << "(-";
      print(*n.lhs, os);
      os << ')';
      return;
    case Kind::Pow:
      os << '(';
      print(*n.lhs, os);
      os << '^' << n.exponent << ')';
      return;
    case Kind::Call:
      os << func_name(n.func) << '(';
      print(*n.lhs, os);
      os << ')';
      return;
  }
}

}  // namespace

double Expr::eval(double x) const { return evaluate(*root_, x); }
Dual Expr::eval(Dual x) const { return evaluate(*root_, x); }

std::string Expr::to_string() const {
  std::ostringstream os;
  print(*root_, os);
  return os.str();
}

Expr parse_expression(std::string_view source, const std::map<std::string, double>& params) {
  return Expr(Parser(source, params).parse());
}

}  // namespace dfc
