#pragma once

#include <Eigen/Dense>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "corforge/scalar_expr.hpp"

namespace corforge {

/// Normal-ordered basis word x^a p^b (every x to the left of every p),
/// for the canonical pair with [x, p] = i and hbar = 1.
struct WeylMonomial {
  int x_pow = 0;
  int p_pow = 0;

  int degree() const { return x_pow + p_pow; }
  friend auto operator<=>(const WeylMonomial&, const WeylMonomial&) = default;
};

/// Normal-ordered noncommutative polynomial in x, p with ScalarExpr
/// coefficients. Canonical: no identically-zero coefficients stored.
class WeylPolynomial {
 public:
  WeylPolynomial() = default;

  static WeylPolynomial zero() { return {}; }
  static WeylPolynomial identity() { return monomial(0, 0, ScalarExpr::one()); }
  static WeylPolynomial x() { return monomial(1, 0, ScalarExpr::one()); }
  static WeylPolynomial p() { return monomial(0, 1, ScalarExpr::one()); }
  static WeylPolynomial monomial(int x_pow, int p_pow,
                                 ScalarExpr coeff = ScalarExpr::one());

  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  friend WeylPolynomial operator+(const WeylPolynomial& a, const WeylPolynomial& b);
  friend WeylPolynomial operator-(const WeylPolynomial& a, const WeylPolynomial& b);
  WeylPolynomial operator-() const;
  WeylPolynomial scaled(const ScalarExpr& c) const;
  WeylPolynomial div_int(std::int64_t k) const;

  friend bool operator==(const WeylPolynomial& a, const WeylPolynomial& b) {
    return a.terms_ == b.terms_;
  }

  const std::map<WeylMonomial, ScalarExpr>& terms() const { return terms_; }
  ScalarExpr coefficient(int x_pow, int p_pow) const;

  /// Substitutes matrices for x and p and numeric values for the symbols.
  /// Powers use the given (typically truncated) matrices, so the result
  /// carries the usual basis-edge truncation artifacts.
  Eigen::MatrixXcd to_matrix(const Eigen::MatrixXcd& x_op,
                             const Eigen::MatrixXcd& p_op,
                             const SymbolBindings& bindings) const;

  /// Terms in descending (x_pow, p_pow) order: x first, then p^3, p^2, ...
  std::string str() const;

 private:
  void add_term(const WeylMonomial& m, const ScalarExpr& c);

  std::map<WeylMonomial, ScalarExpr> terms_;

  friend WeylPolynomial normal_order(const WeylPolynomial&, const WeylPolynomial&);
};

/// Product of two normal-ordered polynomials, reordered to normal form with
/// the exact rewrite p*x = x*p - i. Bilinear and associative.
WeylPolynomial normal_order(const WeylPolynomial& left, const WeylPolynomial& right);

/// [A, B] = normal_order(A,B) - normal_order(B,A).
WeylPolynomial commutator(const WeylPolynomial& a, const WeylPolynomial& b);

/// e^A B e^{-A} = sum_k ad_A^k(B) / k!, summed exactly. The series must
/// terminate within max_depth applications of ad_A; otherwise throws
/// NonTerminatingSeries. The single-monomial generators used by the factor
/// maps terminate at depth <= 3, so the default cap flags misuse, not a
/// tolerance problem.
WeylPolynomial adjoint_conjugate(const WeylPolynomial& a, const WeylPolynomial& b,
                                 int max_depth = 32);

/// One exponential Dyson factor exp(f(t) * K): a named real coefficient
/// (carrying its dot-derivative symbol implicitly) and a generator that is a
/// single monomial in x only or p only, times a possibly imaginary constant.
struct SymbolicFactor {
  std::string coefficient;
  WeylPolynomial generator;
};

/// Composite Coriolis operators for the ordered factor list (first factor
/// applied first, i.e. innermost). Returns chain[n-1] = Sigma_n for n=1..N:
///   Sigma_N     = i * fdot_N * K_N
///   Sigma_n     = i * fdot_n * K_n + e^{-f_n K_n} Sigma_{n+1} e^{f_n K_n}
/// chain[0] is the full Coriolis operator i * Omega^{-1} * dOmega/dt.
std::vector<WeylPolynomial> composite_coriolis_symbolic(
    const std::vector<SymbolicFactor>& factors, int max_depth = 32);

}  // namespace corforge
