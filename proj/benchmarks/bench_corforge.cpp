#include <benchmark/benchmark.h>

#include "corforge/models.hpp"

using namespace corforge;

namespace {

Matrix random_like(int d, unsigned seed) {
  Matrix m(d, d);
  unsigned state = seed;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      state = state * 1664525u + 1013904223u;
      const double re = (state >> 8) * (1.0 / 16777216.0) - 0.5;
      state = state * 1664525u + 1013904223u;
      const double im = (state >> 8) * (1.0 / 16777216.0) - 0.5;
      m(r, c) = Complex(re, im);
    }
  return m;
}

}  // namespace

static void BM_matrix_exp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Matrix a = random_like(d, 7);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_exp(a));
}
BENCHMARK(BM_matrix_exp)->Arg(8)->Arg(16)->Arg(64);

static void BM_coriolis_chain_two_level(benchmark::State& state) {
  const ModelScenario sc = build_two_level_toy(0.3, 0.2);
  const FactorizedDysonMap map = sc.dyson_map();
  for (auto _ : state)
    benchmark::DoNotOptimize(composite_coriolis_chain(map, 0.7));
}
BENCHMARK(BM_coriolis_chain_two_level);

static void BM_coriolis_chain_anharmonic(benchmark::State& state) {
  SigmaParametrization param{CoefficientFn("1+t^2"), 0.0};
  const ModelScenario sc = build_fring_tenney_scenario(
      static_cast<int>(state.range(0)), CoefficientFn("0.05*t"),
      CoefficientFn("0.008*t"), CoefficientFn("0.03*t"), CoefficientFn("0.04*t"),
      param);
  const FactorizedDysonMap map = sc.dyson_map();
  for (auto _ : state)
    benchmark::DoNotOptimize(composite_coriolis_chain(map, 0.7));
}
BENCHMARK(BM_coriolis_chain_anharmonic)->Arg(16)->Arg(32);

static void BM_coriolis_symbolic(benchmark::State& state) {
  const ScalarExpr i = ScalarExpr::constant(ComplexRational::i());
  const std::vector<SymbolicFactor> factors = {
      {"delta", WeylPolynomial::monomial(0, 1, i)},
      {"gamma", WeylPolynomial::monomial(0, 2, i)},
      {"beta", WeylPolynomial::monomial(0, 3)},
      {"alpha", WeylPolynomial::monomial(1, 0)},
  };
  for (auto _ : state)
    benchmark::DoNotOptimize(composite_coriolis_symbolic(factors));
}
BENCHMARK(BM_coriolis_symbolic);

static void BM_simulate_two_level(benchmark::State& state) {
  ModelScenario sc = build_two_level_toy(0.3, 0.2);
  sc.grid.step = 1e-2;
  const FactorizedDysonMap map = sc.dyson_map();
  const HamiltonianInput input = sc.hamiltonian_input();
  StatePair s0;
  s0.picture = 0;
  s0.ket = sc.initial_ket;
  s0.conjugate = map.metric(0, 0.0) * s0.ket;
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_schrodinger(map, input, 0, s0, sc.grid));
}
BENCHMARK(BM_simulate_two_level);

static void BM_density_step(benchmark::State& state) {
  ModelScenario sc = build_two_level_toy(0.3, 0.2);
  sc.grid.step = 1e-2;
  const FactorizedDysonMap map = sc.dyson_map();
  const HamiltonianInput input = sc.hamiltonian_input();
  Ensemble ens;
  ens.weights = sc.ensemble_weights;
  for (const Vector& ket : sc.ensemble_kets) {
    StatePair s;
    s.picture = 0;
    s.ket = ket;
    s.conjugate = map.metric(0, 0.0) * ket;
    ens.states.push_back(s);
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_density(map, input, 0, ens, sc.grid));
}
BENCHMARK(BM_density_step);

BENCHMARK_MAIN();
