#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <string>

#include "corforge/expression.hpp"

namespace corforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// e^A by scaling-and-squaring with a (13,13) Pade core (lower orders for
/// small norms). Relative accuracy ~1e-13 for moderate norms; throws
/// Overflow when the result leaves the representable range.
Matrix matrix_exp(const Matrix& a);

/// A^{-1} with an invertibility check; throws SingularFactor naming `what`.
Matrix invert(const Matrix& a, const std::string& what);

/// Truncated position/momentum pair in the d-dimensional number basis:
/// x = (a + a^dag)/sqrt(2), p = i (a^dag - a)/sqrt(2). Both exactly
/// Hermitian; the commutator picks up the usual truncation defect
/// [x,p] = i (I - d E_{d-1,d-1}).
struct OscOperators {
  Matrix x;
  Matrix p;
};
OscOperators build_osc_operators(int dimension);

/// Hermiticity / positivity snapshot of one matrix. When the matrix is not
/// numerically Hermitian (residual > 1e-10) the positivity verdict is not
/// applicable and min_eigenvalue refers to the Hermitian part regardless.
struct OperatorDiagnostics {
  double hermiticity_residual = 0.0;  // ||A - A^dag||_F
  bool hermitian = false;             // residual <= 1e-10
  double min_eigenvalue = 0.0;        // of (A + A^dag)/2
  bool positive_definite = false;     // hermitian && min_eigenvalue > 0
};
OperatorDiagnostics diagnostics(const Matrix& a);

/// One evaluated Dyson factor: Omega(t), its time derivative, and the
/// single-factor Coriolis operator i * Omega^{-1} * dOmega/dt.
struct FactorSample {
  Matrix omega;
  Matrix omega_dot;
  Matrix coriolis;
};

/// A time-dependent invertible factor of the Dyson map.
class Factor {
 public:
  virtual ~Factor() = default;
  virtual Matrix omega(double t) const = 0;
  virtual FactorSample sample(double t) const = 0;
  virtual const std::string& label() const { return label_; }

 protected:
  explicit Factor(std::string label) : label_(std::move(label)) {}
  std::string label_;
};

/// Omega(t) = exp(f(t) K) with a constant generator K. Because f(t)K
/// commutes with f(s)K the derivative is exact:
///   dOmega/dt = fdot(t) K Omega(t),  coriolis = i fdot(t) K.
class SeparableFactor final : public Factor {
 public:
  SeparableFactor(std::string label, Matrix generator, CoefficientFn coefficient);

  Matrix omega(double t) const override;
  FactorSample sample(double t) const override;

  const Matrix& generator() const { return generator_; }
  const CoefficientFn& coefficient() const { return coefficient_; }

 private:
  Matrix generator_;
  CoefficientFn coefficient_;
};

/// Arbitrary sampler Omega(t) with no closed-form derivative; the derivative
/// and Coriolis operator fall back to central finite differences, which makes
/// this the clearly lower-accuracy escape hatch (O(h^2) truncation).
class GeneralFactor final : public Factor {
 public:
  using Sampler = std::function<Matrix(double)>;

  GeneralFactor(std::string label, Sampler sampler, double fd_step = 1e-5);

  Matrix omega(double t) const override;
  FactorSample sample(double t) const override;

 private:
  Sampler sampler_;
  double fd_step_;
};

/// Central difference (Omega(t+h) - Omega(t-h)) / (2h); O(h^2) truncation
/// error. This is the independent oracle against which the exact separable
/// derivatives are checked.
Matrix finite_diff_derivative(const Factor& factor, double t, double h);

}  // namespace corforge
