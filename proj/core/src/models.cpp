#include "corforge/models.hpp"

#include <algorithm>
#include <cmath>

#include "corforge/errors.hpp"

namespace corforge {

CoefficientFn SigmaParametrization::coupling() const {
  const Expr s = sigma.expr();
  return CoefficientFn(Expr::constant(1.0) / (Expr::constant(4.0) * Expr::pow(s, 3)));
}

CoefficientFn SigmaParametrization::mass() const {
  const Expr s = sigma.expr();
  const Expr sdot = s.derivative();
  const Expr sddot = sdot.derivative();
  const Expr numerator = Expr::constant(4.0 * c2) + sdot * sdot -
                         Expr::constant(2.0) * s * sddot;
  return CoefficientFn(numerator / (Expr::constant(4.0) * Expr::pow(s, 2)));
}

void SigmaParametrization::validate(double start, double end, int samples) const {
  for (int k = 0; k < samples; ++k) {
    const double t = start + (end - start) * k / (samples - 1);
    if (!(sigma.value(t) > 0.0))
      throw DomainError("sigma(t) must stay positive; failed at t=" +
                        std::to_string(t));
  }
}

FactorizedDysonMap ModelScenario::dyson_map() const {
  return FactorizedDysonMap(factors);
}

HamiltonianInput ModelScenario::hamiltonian_input() const {
  HamiltonianInput input;
  input.mode = hamiltonian_mode;
  const auto terms = hamiltonian_terms;  // captured by value; scenario may die
  const int d = dimension;
  input.op = [terms, d](double t) {
    Matrix acc = Matrix::Zero(d, d);
    for (const OperatorTerm& term : terms) acc += term.coefficient.value(t) * term.matrix;
    return acc;
  };
  return input;
}

ModelScenario build_two_level_toy(double a, double b) {
  ModelScenario sc;
  sc.name = "two-level";
  sc.dimension = 2;

  Matrix pauli_x(2, 2), pauli_z(2, 2);
  pauli_x << 0, 1, 1, 0;
  pauli_z << 1, 0, 0, -1;

  sc.factors.push_back(std::make_shared<SeparableFactor>(
      "omega1", pauli_x, CoefficientFn(Expr::constant(a) * Expr::time())));
  sc.factors.push_back(std::make_shared<SeparableFactor>(
      "omega2", pauli_z, CoefficientFn(Expr::constant(b) * Expr::time())));

  sc.hamiltonian_mode = HamiltonianInput::Mode::top_down;
  sc.hamiltonian_terms.push_back({CoefficientFn(Expr::constant(1.0)), pauli_z});

  sc.picture = 0;
  sc.initial_ket = Vector(2);
  sc.initial_ket << Complex(1.0 / std::sqrt(2.0), 0.0), Complex(1.0 / std::sqrt(2.0), 0.0);

  Vector e0(2), e1(2);
  e0 << Complex(1, 0), Complex(0, 0);
  e1 << Complex(0, 0), Complex(1, 0);
  sc.ensemble_kets = {e0, e1};
  sc.ensemble_weights = {0.7, 0.3};

  sc.observables.push_back({"sx", pauli_x, 2});
  sc.observables.push_back({"sz", pauli_z, 2});

  sc.grid.start = 0.0;
  sc.grid.end = 1.0;
  sc.grid.step = 1e-3;
  sc.grid.method = TimeGrid::Method::rk4;
  return sc;
}

ModelScenario build_fring_tenney_scenario(int dimension, CoefficientFn alpha,
                                          CoefficientFn beta, CoefficientFn gamma,
                                          CoefficientFn delta,
                                          const SigmaParametrization& param) {
  if (dimension < 8)
    throw ValidationError("the anharmonic scenario needs dimension >= 8");

  ModelScenario sc;
  sc.name = "fring-tenney";
  sc.dimension = dimension;
  sc.grid.start = 0.0;
  sc.grid.end = 1.0;
  // The generator norm grows with the truncation dimension; this step keeps
  // the fixed-step integrator deep in its convergent regime for d <= 24.
  sc.grid.step = 2e-3;
  sc.grid.method = TimeGrid::Method::rk4;
  param.validate(sc.grid.start, sc.grid.end);

  const OscOperators osc = build_osc_operators(dimension);
  const Complex i_unit(0.0, 1.0);
  const Matrix p2 = osc.p * osc.p;
  const Matrix p3 = p2 * osc.p;
  const Matrix x2 = osc.x * osc.x;
  const Matrix x4 = x2 * x2;

  sc.factors.push_back(std::make_shared<SeparableFactor>(
      "delta", (i_unit * osc.p).eval(), delta));
  sc.factors.push_back(std::make_shared<SeparableFactor>(
      "gamma", (i_unit * p2).eval(), gamma));
  sc.factors.push_back(std::make_shared<SeparableFactor>("beta", p3, beta));
  sc.factors.push_back(std::make_shared<SeparableFactor>("alpha", osc.x, alpha));

  // Bottom-up: the picture-0 generator G = p^2 + m/4 x^2 - g/16 x^4.
  sc.hamiltonian_mode = HamiltonianInput::Mode::bottom_up;
  const CoefficientFn mass = param.mass();
  const CoefficientFn coupling = param.coupling();
  sc.hamiltonian_terms.push_back({CoefficientFn(Expr::constant(1.0)), p2});
  sc.hamiltonian_terms.push_back(
      {CoefficientFn(mass.expr() / Expr::constant(4.0)), x2});
  sc.hamiltonian_terms.push_back(
      {CoefficientFn(-coupling.expr() / Expr::constant(16.0)), x4});

  sc.picture = 0;
  sc.initial_ket = Vector::Zero(dimension);
  sc.initial_ket(0) = Complex(1, 0);

  sc.observables.push_back({"x", osc.x, 0});

  const ComplexRational ci = ComplexRational::i();
  sc.symbolic_factors = {
      {"delta", WeylPolynomial::monomial(0, 1, ScalarExpr::constant(ci))},
      {"gamma", WeylPolynomial::monomial(0, 2, ScalarExpr::constant(ci))},
      {"beta", WeylPolynomial::monomial(0, 3)},
      {"alpha", WeylPolynomial::monomial(1, 0)},
  };
  return sc;
}

Matrix build_jones_mateo(double coupling, int dimension) {
  if (!(coupling > 0.0))
    throw ValidationError("the partner Hamiltonian needs coupling g > 0");
  if (dimension < 16)
    throw ValidationError("the partner Hamiltonian needs dimension >= 16");
  const OscOperators osc = build_osc_operators(dimension);
  const Matrix p2 = osc.p * osc.p;
  const Matrix p4 = p2 * p2;
  const Matrix x2 = osc.x * osc.x;
  return p4 / (64.0 * coupling) - 0.5 * osc.p + 16.0 * coupling * x2;
}

ModelScenario build_jones_mateo_scenario(double coupling, int dimension) {
  ModelScenario sc;
  sc.name = "jones-mateo";
  sc.dimension = dimension;

  const Matrix h = build_jones_mateo(coupling, dimension);
  const Matrix id = Matrix::Identity(dimension, dimension);
  sc.factors.push_back(std::make_shared<SeparableFactor>(
      "identity", id, CoefficientFn(Expr::constant(0.0))));

  sc.hamiltonian_mode = HamiltonianInput::Mode::top_down;
  sc.hamiltonian_terms.push_back({CoefficientFn(Expr::constant(1.0)), h});
  sc.hamiltonian_builder = [coupling](int d) { return build_jones_mateo(coupling, d); };

  // Low-lying eigenstates as initial data: the quartic momentum term puts
  // the top of the spectrum near 2.3e3 at d=64, so broad-band states (e.g.
  // number-basis vectors) would pin the stable step far below what the
  // low-energy physics needs.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("partner-Hamiltonian eigensolve failed");
  sc.picture = 1;
  sc.initial_ket = solver.eigenvectors().col(0);
  sc.ensemble_kets = {solver.eigenvectors().col(0), solver.eigenvectors().col(1)};
  sc.ensemble_weights = {0.7, 0.3};

  const OscOperators osc = build_osc_operators(dimension);
  sc.observables.push_back({"x", osc.x, 1});

  sc.grid.start = 0.0;
  sc.grid.end = 0.1;
  sc.grid.step = 1e-3;  // step * ||h|| < 2.8 keeps RK4 stable at d = 64
  sc.grid.method = TimeGrid::Method::rk4;
  return sc;
}

std::vector<Complex> spectrum_lowest(const Matrix& a, int k) {
  if (k < 1 || k > a.rows())
    throw ValidationError("spectrum_lowest: k out of range");
  Eigen::ComplexEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("spectrum_lowest: eigensolver failed");
  std::vector<Complex> values(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + a.rows());
  std::sort(values.begin(), values.end(), [](const Complex& lhs, const Complex& rhs) {
    if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
    return lhs.imag() < rhs.imag();
  });
  values.resize(static_cast<std::size_t>(k));
  return values;
}

}  // namespace corforge
