#include <doctest.h>

#include <cmath>

#include "corforge/errors.hpp"
#include "corforge/models.hpp"

using namespace corforge;

namespace {

SymbolBindings linear_bindings(double t) {
  // The builtin coefficient set alpha=0.05t, beta=0.008t, gamma=0.03t,
  // delta=0.04t evaluated with its dot-values.
  return {{"alpha", {0.05 * t, 0.05}},
          {"beta", {0.008 * t, 0.008}},
          {"gamma", {0.03 * t, 0.03}},
          {"delta", {0.04 * t, 0.04}}};
}

ModelScenario builtin_fring_tenney(int d) {
  SigmaParametrization param{CoefficientFn("1+t^2"), 0.0};
  return build_fring_tenney_scenario(d, CoefficientFn("0.05*t"), CoefficientFn("0.008*t"),
                                     CoefficientFn("0.03*t"), CoefficientFn("0.04*t"),
                                     param);
}

double interior_residual(int d, double t) {
  const ModelScenario sc = builtin_fring_tenney(d);
  const FactorizedDysonMap map = sc.dyson_map();
  const Matrix numeric = composite_coriolis_chain(map, t)[0];

  const OscOperators osc = build_osc_operators(d);
  const std::vector<WeylPolynomial> chain =
      composite_coriolis_symbolic(sc.symbolic_factors);
  const Matrix symbolic = chain[0].to_matrix(osc.x, osc.p, linear_bindings(t));

  const int half = d / 2;
  return (numeric - symbolic).topLeftCorner(half, half).norm();
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("sigma parametrization: constant and quadratic clocks") {
  SigmaParametrization flat{CoefficientFn("1"), 0.0};
  CHECK(flat.coupling().value(0.3) == doctest::Approx(0.25));
  CHECK(flat.mass().value(0.3) == doctest::Approx(0.0));

  SigmaParametrization quad{CoefficientFn("1+t^2"), 0.0};
  // At t=1: sigma=2, sigmadot=2, sigmaddot=2:
  //   g = 1/(4*8) = 1/32,  m = (0 + 4 - 2*2*2)/(4*4) = -1/4.
  CHECK(quad.coupling().value(1.0) == doctest::Approx(1.0 / 32.0));
  CHECK(quad.mass().value(1.0) == doctest::Approx(-0.25));

  SigmaParametrization with_c2{CoefficientFn("1+t^2"), 0.5};
  CHECK(with_c2.mass().value(1.0) == doctest::Approx((2.0 + 4.0 - 8.0) / 16.0));

  SigmaParametrization invalid{CoefficientFn("t-2"), 0.0};
  CHECK_THROWS_AS(invalid.validate(0.0, 1.0), DomainError);
}

TEST_CASE("two-level toy: stationary limit and single active factor") {
  const ModelScenario frozen = build_two_level_toy(0.0, 0.0);
  const FactorizedDysonMap map = frozen.dyson_map();
  for (const Matrix& sigma : composite_coriolis_chain(map, 0.8))
    CHECK(sigma.norm() == 0.0);

  const ModelScenario one = build_two_level_toy(0.3, 0.0);
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const Matrix sigma1 = composite_coriolis_chain(one.dyson_map(), 0.5)[0];
  CHECK((sigma1 - Complex(0, 0.3) * x).norm() < 1e-12);
}

TEST_CASE("two-level toy: non-commuting factors break the naive sum") {
  const ModelScenario sc = build_two_level_toy(0.3, 0.2);
  const FactorizedDysonMap map = sc.dyson_map();
  const double t = 1.0;
  const Matrix sigma1 = composite_coriolis_chain(map, t)[0];
  const Matrix naive =
      map.factor(1).sample(t).coriolis + map.factor(2).sample(t).coriolis;
  CHECK((sigma1 - naive).norm() > 1e-3);
}

TEST_CASE("two-level toy satisfies the scenario contract") {
  const ModelScenario sc = build_two_level_toy(0.3, 0.2);
  CHECK(sc.dimension == 2);
  CHECK(sc.factors.size() == 2);
  CHECK(sc.picture == 0);
  CHECK(sc.hamiltonian_mode == HamiltonianInput::Mode::top_down);
  CHECK(sc.ensemble_weights.size() == 2);
  CHECK(sc.ensemble_weights[0] + sc.ensemble_weights[1] == doctest::Approx(1.0));
  const Matrix h = sc.hamiltonian_input().op(0.7);
  CHECK((h - h.adjoint()).norm() == 0.0);
}

TEST_CASE("anharmonic scenario assembles the wrong-sign generator") {
  SigmaParametrization flat{CoefficientFn("1"), 0.0};  // g = 1/4, m = 0
  const ModelScenario sc = build_fring_tenney_scenario(
      16, CoefficientFn("0.05*t"), CoefficientFn("0.008*t"), CoefficientFn("0.03*t"),
      CoefficientFn("0.04*t"), flat);
  CHECK(sc.hamiltonian_mode == HamiltonianInput::Mode::bottom_up);
  CHECK(sc.factors.size() == 4);
  CHECK(sc.symbolic_factors.size() == 4);
  CHECK(sc.factors[0]->label() == "delta");
  CHECK(sc.factors[3]->label() == "alpha");

  const OscOperators osc = build_osc_operators(16);
  const Matrix p2 = osc.p * osc.p;
  const Matrix x2 = osc.x * osc.x;
  const Matrix expected = p2 - (0.25 / 16.0) * x2 * x2;
  CHECK((sc.hamiltonian_input().op(0.9) - expected).norm() < 1e-12);

  CHECK_THROWS_AS(build_fring_tenney_scenario(4, CoefficientFn("t"), CoefficientFn("t"),
                                              CoefficientFn("t"), CoefficientFn("t"),
                                              flat),
                  ValidationError);
}

TEST_CASE("matrix-level Coriolis converges to the symbolic closed form inside") {
  const double coarse = interior_residual(16, 0.7);
  const double fine = interior_residual(64, 0.7);
  CHECK(fine < 1e-3);
  CHECK(fine < coarse);
}

TEST_CASE("partner Hamiltonian: Hermitian, convergent, cube-root scaling") {
  const Matrix h64 = build_jones_mateo(1.0, 64);
  CHECK((h64 - h64.adjoint()).norm() <= 1e-10);

  const Matrix h96 = build_jones_mateo(1.0, 96);
  const std::vector<Complex> e64 = spectrum_lowest(h64, 5);
  const std::vector<Complex> e96 = spectrum_lowest(h96, 5);
  for (int n = 0; n < 5; ++n) {
    CHECK(std::abs(e64[n].imag()) <= 1e-9);
    CHECK(std::abs(e64[n] - e96[n]) <= 1e-6);
  }

  for (double g : {0.5, 2.0}) {
    const std::vector<Complex> eg = spectrum_lowest(build_jones_mateo(g, 96), 5);
    const double scale = std::cbrt(g);
    for (int n = 0; n < 5; ++n) {
      const double expected = scale * e96[n].real();
      CHECK(std::abs(eg[n].real() - expected) <= 1e-5 * std::abs(expected));
    }
  }

  CHECK_THROWS_AS(build_jones_mateo(-1.0, 64), ValidationError);
  CHECK_THROWS_AS(build_jones_mateo(1.0, 8), ValidationError);
}

TEST_CASE("lowest spectrum: explicit diagonal and the harmonic ladder") {
  Matrix diag = Matrix::Zero(3, 3);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  diag(2, 2) = 2.0;
  const std::vector<Complex> two = spectrum_lowest(diag, 2);
  CHECK(std::abs(two[0] - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(two[1] - Complex(2, 0)) < 1e-12);

  const OscOperators osc = build_osc_operators(64);
  const Matrix harmonic = osc.p * osc.p + osc.x * osc.x;
  const std::vector<Complex> ladder = spectrum_lowest(harmonic, 3);
  CHECK(std::abs(ladder[0] - Complex(1, 0)) <= 1e-8);
  CHECK(std::abs(ladder[1] - Complex(3, 0)) <= 1e-8);
  CHECK(std::abs(ladder[2] - Complex(5, 0)) <= 1e-8);

  CHECK_THROWS_AS(spectrum_lowest(diag, 0), ValidationError);
  CHECK_THROWS_AS(spectrum_lowest(diag, 4), ValidationError);
}

TEST_CASE("the hybrid ladder is isospectral on the partner scenario") {
  const ModelScenario sc = build_jones_mateo_scenario(1.0, 32);
  const FactorizedDysonMap map = sc.dyson_map();
  const Matrix h = sc.hamiltonian_input().op(0.0);
  const std::vector<Matrix> hams = descend_hamiltonians(map, h, 0.5);
  const std::vector<Complex> top = spectrum_lowest(hams.back(), 4);
  const std::vector<Complex> bottom = spectrum_lowest(hams.front(), 4);
  for (int n = 0; n < 4; ++n) CHECK(std::abs(top[n] - bottom[n]) < 1e-8);
}

}  // TEST_SUITE
