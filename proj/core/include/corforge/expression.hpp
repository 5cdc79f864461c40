#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace corforge {

/// Immutable expression tree in the single variable t over the grammar
/// { numbers, t, +, -, *, /, ^integer, sin, cos, exp, sqrt, ( ) }.
/// Small enough to differentiate in closed form, which keeps every
/// coefficient derivative exact and every run reproducible.
class Expr {
 public:
  Expr() = default;

  static Expr constant(double value);
  static Expr time();

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;

  static Expr pow(const Expr& base, int exponent);
  static Expr sin(const Expr& arg);
  static Expr cos(const Expr& arg);
  static Expr exp(const Expr& arg);
  static Expr sqrt(const Expr& arg);

  bool valid() const { return node_ != nullptr; }
  double eval(double t) const;
  Expr derivative() const;
  std::string str() const;

  struct Node;  // defined in expression.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend Expr parse_expression(std::string_view);
  std::shared_ptr<const Node> node_;
};

/// Parses the grammar above; throws ParseError naming the offending token
/// and its character offset.
Expr parse_expression(std::string_view source);

/// A scenario coefficient f(t): parsed expression plus its symbolic
/// derivative, both fixed at construction.
class CoefficientFn {
 public:
  CoefficientFn() = default;
  explicit CoefficientFn(std::string_view source);
  explicit CoefficientFn(Expr expr, std::string label = "");

  double value(double t) const { return expr_.eval(t); }
  double derivative(double t) const { return deriv_.eval(t); }

  /// The derivative as a coefficient in its own right (so the grammar can be
  /// differentiated twice where a second derivative is needed).
  CoefficientFn derivative_fn() const;

  const std::string& source() const { return source_; }
  const Expr& expr() const { return expr_; }

 private:
  Expr expr_;
  Expr deriv_;
  std::string source_;
};

}  // namespace corforge
