#pragma once

#include <compare>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corforge/rational.hpp"

namespace corforge {

/// One named real function of time, or its first derivative (dotted=true).
/// Higher derivatives are deliberately outside the grammar.
struct TimeSymbol {
  std::string base;
  bool dotted = false;

  friend auto operator<=>(const TimeSymbol&, const TimeSymbol&) = default;
};

/// Product of time symbols, kept sorted; the empty product is the constant 1.
using SymbolMonomial = std::vector<TimeSymbol>;

/// Numeric binding of a symbol set: base name -> (value, dot value).
using SymbolBindings = std::map<std::string, std::pair<double, double>>;

/// Polynomial in the time symbols with exact Gaussian-rational coefficients.
/// Canonical form: monomials sorted, zero coefficients removed, so equality
/// is plain term-by-term comparison.
class ScalarExpr {
 public:
  ScalarExpr() = default;

  static ScalarExpr zero() { return ScalarExpr(); }
  static ScalarExpr one() { return constant(ComplexRational(1)); }
  static ScalarExpr constant(ComplexRational c);
  /// The symbol itself (alpha) or its dot-derivative (alpha with dotted=true).
  static ScalarExpr symbol(const std::string& base, bool dotted = false);

  bool is_zero() const { return terms_.empty(); }

  ScalarExpr operator-() const;
  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);

  ScalarExpr scaled(const ComplexRational& c) const;
  ScalarExpr div_int(std::int64_t k) const;

  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
    return a.terms_ == b.terms_;
  }

  /// Numeric value with every symbol bound; throws DomainError on a missing
  /// binding so coefficient typos surface instead of silently reading zero.
  std::complex<double> eval(const SymbolBindings& bindings) const;

  /// Rendering convention: dotted symbols print as ad(name), the imaginary
  /// unit as i, e.g. "3*ad(alpha)*beta+ad(gamma)".
  std::string str() const;

  /// True when every term's coefficient is negative under the (re, then im)
  /// sign convention; lets the printer factor the sign out front.
  bool all_terms_negative() const;

  const std::vector<std::pair<SymbolMonomial, ComplexRational>>& terms() const {
    return terms_;
  }

 private:
  void add_term(const SymbolMonomial& m, const ComplexRational& c);

  // sorted by monomial, no zero coefficients
  std::vector<std::pair<SymbolMonomial, ComplexRational>> terms_;
};

}  // namespace corforge
