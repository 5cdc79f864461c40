#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corforge/evolution.hpp"
#include "corforge/weyl.hpp"

namespace corforge {

/// Reparametrized-time couplings for the wrong-sign quartic generator:
///   g(t) = 1 / (4 sigma^3),
///   m(t) = (4 c2 + sigmadot^2 - 2 sigma sigmaddot) / (4 sigma^2).
/// sigma must stay positive on the scenario interval.
struct SigmaParametrization {
  CoefficientFn sigma;
  double c2 = 0.0;

  CoefficientFn coupling() const;  // g(t)
  CoefficientFn mass() const;      // m(t)

  /// Samples sigma on [start, end]; throws DomainError on sigma <= 0.
  void validate(double start, double end, int samples = 101) const;
};

/// One additive term c(t) * K of a Hamiltonian or generator.
struct OperatorTerm {
  CoefficientFn coefficient;
  Matrix matrix;
};

struct Observable {
  std::string name;
  Matrix matrix;
  int defined_in_picture = 0;  // representative at grid.start in this picture
};

/// A complete runnable configuration: map, dynamics, initial data, grid.
struct ModelScenario {
  std::string name;
  int dimension = 0;
  std::vector<std::shared_ptr<const Factor>> factors;  // first-applied first
  HamiltonianInput::Mode hamiltonian_mode = HamiltonianInput::Mode::top_down;
  std::vector<OperatorTerm> hamiltonian_terms;
  int picture = 0;
  Vector initial_ket;  // picture-`picture` ket at grid.start
  std::vector<Vector> ensemble_kets;
  std::vector<double> ensemble_weights;
  std::vector<Observable> observables;
  TimeGrid grid;

  /// Filled when every factor generator is a monomial in x only or p only,
  /// enabling the exact symbolic Coriolis route.
  std::vector<SymbolicFactor> symbolic_factors;

  /// Rebuilds the (stationary) Hamiltonian at another truncation dimension;
  /// set for oscillator-basis scenarios so spectra get a convergence column.
  std::function<Matrix(int)> hamiltonian_builder;

  FactorizedDysonMap dyson_map() const;
  HamiltonianInput hamiltonian_input() const;
};

/// Two-dimensional toy with non-commuting factors exp(a t X), exp(b t Z) and
/// the conventional Hamiltonian Z; the default regression scenario. All
/// three pictures j = 0, 1, 2 are nontrivial whenever a, b != 0.
ModelScenario build_two_level_toy(double a, double b);

/// Four-factor map [exp(i delta p), exp(i gamma p^2), exp(beta p^3),
/// exp(alpha x)] over the truncated oscillator pair, with the bottom-up
/// wrong-sign generator G = p^2 + m/4 x^2 - g/16 x^4 and (m, g) derived from
/// the sigma parametrization. The Hermiticity of the derived conventional
/// Hamiltonian is reported, not assumed.
ModelScenario build_fring_tenney_scenario(int dimension, CoefficientFn alpha,
                                          CoefficientFn beta, CoefficientFn gamma,
                                          CoefficientFn delta,
                                          const SigmaParametrization& param);

/// Hermitian partner of the wrong-sign quartic oscillator:
///   p^4 / (64 g) - p / 2 + 16 g x^2
/// in the d-dimensional number basis.
Matrix build_jones_mateo(double coupling, int dimension);

/// Wraps the partner Hamiltonian into a stationary scenario (identity map).
ModelScenario build_jones_mateo_scenario(double coupling, int dimension);

/// k eigenvalues of smallest real part, sorted by real part. Real to solver
/// accuracy for Hermitian input.
std::vector<Complex> spectrum_lowest(const Matrix& a, int k);

}  // namespace corforge
