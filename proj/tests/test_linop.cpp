#include <doctest.h>

#include <cmath>
#include <random>

#include "corforge/errors.hpp"
#include "corforge/linop.hpp"

using namespace corforge;

namespace {

// Platform-stable uniform doubles in [lo, hi) from the exactly-specified
// mt19937 bit stream.
class Uniform {
 public:
  explicit Uniform(std::uint32_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) {
    const double u = (rng_() >> 5) * (1.0 / 134217728.0);  // 27 bits
    return lo + (hi - lo) * u;
  }
  Matrix matrix(int d, double scale) {
    Matrix m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        m(r, c) = Complex((*this)(-scale, scale), (*this)(-scale, scale));
    return m;
  }

 private:
  std::mt19937 rng_;
};

// Truncated Taylor series; independent of the Pade/squaring path.
Matrix exp_taylor(const Matrix& a, int terms) {
  Matrix sum = Matrix::Identity(a.rows(), a.cols());
  Matrix power = sum;
  for (int k = 1; k <= terms; ++k) {
    power = (power * a) / static_cast<double>(k);
    sum += power;
  }
  return sum;
}

}  // namespace

TEST_SUITE("linop") {

TEST_CASE("matrix_exp: zero, diagonal, involution closed forms") {
  CHECK((matrix_exp(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() == 0.0);

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = -2.0;
  const Matrix ed = matrix_exp(diag);
  CHECK(std::abs(ed(0, 0) - Complex(std::exp(1.0), 0)) < 1e-14);
  CHECK(std::abs(ed(1, 1) - Complex(std::exp(-2.0), 0)) < 1e-14);
  CHECK(std::abs(ed(0, 1)) == 0.0);

  // exp(i theta X) = cos(theta) I + i sin(theta) X for the involution X.
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const double theta = 0.7;
  const Matrix got = matrix_exp(Complex(0, theta) * x);
  const Matrix expected =
      std::cos(theta) * Matrix::Identity(2, 2) + Complex(0, std::sin(theta)) * x;
  CHECK((got - expected).norm() < 1e-14);
}

TEST_CASE("matrix_exp matches the Taylor oracle at small norm") {
  Uniform rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const int d = 2 + trial % 7;
    Matrix a = rng.matrix(d, 0.3);
    CHECK((matrix_exp(a) - exp_taylor(a, 30)).norm() < 1e-13);
  }
}

TEST_CASE("matrix_exp(A) * matrix_exp(-A) = I for norms up to 5") {
  Uniform rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 2 + trial % 15;
    Matrix a = rng.matrix(d, 5.0 / d);  // keeps ||A|| around a few
    const Matrix lhs = matrix_exp(a) * matrix_exp(-a);
    CHECK((lhs - Matrix::Identity(d, d)).norm() < 1e-10);
  }
}

TEST_CASE("matrix_exp accuracy survives the scaled regime") {
  // Normal matrix with known exponential: A = V D V^{-1} has exp = V e^D V^{-1}.
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const double theta = 40.0;  // norm ~40, forces several squarings
  const Matrix got = matrix_exp(Complex(0, theta) * x);
  const Matrix expected =
      std::cos(theta) * Matrix::Identity(2, 2) + Complex(0, std::sin(theta)) * x;
  CHECK((got - expected).norm() < 1e-12);
}

TEST_CASE("matrix_exp overflow handling") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1e4;  // e^{1e4} is far beyond double range
  CHECK_THROWS_AS(matrix_exp(a), Overflow);

  Matrix nan_mat = Matrix::Zero(2, 2);
  nan_mat(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matrix_exp(nan_mat), Overflow);
}

TEST_CASE("separable factor: stationary, polynomial and trig coefficients") {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;

  const SeparableFactor constant("const", z, CoefficientFn("2"));
  const FactorSample cs = constant.sample(0.8);
  CHECK(cs.coriolis.norm() == 0.0);
  CHECK(cs.omega_dot.norm() == 0.0);

  const SeparableFactor quad("quad", z, CoefficientFn("t^2"));
  const FactorSample qs = quad.sample(1.0);
  // coriolis = i * 2t * K at t=1.
  CHECK(std::abs(qs.coriolis(0, 0) - Complex(0, 2)) < 1e-15);
  CHECK(std::abs(qs.coriolis(1, 1) - Complex(0, -2)) < 1e-15);

  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const SeparableFactor trig("trig", x, CoefficientFn("sin(t)"));
  const FactorSample ts = trig.sample(0.3);
  const Matrix fd = finite_diff_derivative(trig, 0.3, 1e-5);
  const Matrix coriolis_fd = Complex(0, 1) * invert(ts.omega, "trig") * fd;
  CHECK((ts.coriolis - coriolis_fd).norm() < 1e-8);
}

TEST_CASE("finite differences cross-check the exact separable derivative") {
  Uniform rng(37);
  Matrix k = rng.matrix(4, 0.6);
  const SeparableFactor factor("rand", k, CoefficientFn("0.5*t+0.2*sin(3*t)"));
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const FactorSample s = factor.sample(t);
    CHECK((s.omega_dot - finite_diff_derivative(factor, t, 1e-4)).norm() < 1e-7);
    const Matrix coriolis_fd = Complex(0, 1) * invert(s.omega, "rand") *
                               finite_diff_derivative(factor, t, 1e-5);
    CHECK((s.coriolis - coriolis_fd).norm() < 1e-7);
  }

  const GeneralFactor constant("const", [](double) { return Matrix::Identity(3, 3); });
  CHECK(finite_diff_derivative(constant, 0.5, 1e-5).norm() <= 1e-10);

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  const GeneralFactor scalar_exp(
      "exp", [diag](double t) -> Matrix { return matrix_exp(t * diag); });
  const Matrix fd = finite_diff_derivative(scalar_exp, 0.0, 1e-5);
  CHECK((fd - diag).norm() < 1e-9);
}

TEST_CASE("general factor coriolis agrees with the separable one") {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  const SeparableFactor exact("exact", x, CoefficientFn("0.4*t^2"));
  const GeneralFactor sampled(
      "sampled", [x](double t) -> Matrix { return matrix_exp((0.4 * t * t) * x); });
  for (double t : {0.2, 0.7}) {
    CHECK((exact.sample(t).coriolis - sampled.sample(t).coriolis).norm() < 1e-7);
  }
}

TEST_CASE("oscillator pair: smallest truncation and commutator defect") {
  const OscOperators two = build_osc_operators(2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(two.x(0, 1) - Complex(inv_sqrt2, 0)) < 1e-15);
  CHECK(std::abs(two.x(1, 0) - Complex(inv_sqrt2, 0)) < 1e-15);
  CHECK(std::abs(two.p(0, 1) - Complex(0, -inv_sqrt2)) < 1e-15);
  CHECK(std::abs(two.p(1, 0) - Complex(0, inv_sqrt2)) < 1e-15);

  for (int d : {2, 5, 16, 64}) {
    const OscOperators ops = build_osc_operators(d);
    CHECK((ops.x - ops.x.adjoint()).norm() == 0.0);
    CHECK((ops.p - ops.p.adjoint()).norm() == 0.0);
    Matrix defect = Matrix::Identity(d, d);
    defect(d - 1, d - 1) = Complex(1.0 - d, 0.0);
    CHECK((ops.x * ops.p - ops.p * ops.x - Complex(0, 1) * defect).norm() <= 1e-12);
  }

  CHECK_THROWS_AS(build_osc_operators(1), ValidationError);
}

TEST_CASE("diagnostics: Gram positivity, nilpotent residual, identity") {
  Uniform rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 15;
    const Matrix omega =
        rng.matrix(d, 1.0) + 2.0 * Matrix::Identity(d, d);  // well-conditioned
    const OperatorDiagnostics diag = diagnostics(omega.adjoint() * omega);
    CHECK(diag.hermitian);
    CHECK(diag.positive_definite);
  }

  Matrix nilpotent = Matrix::Zero(2, 2);
  nilpotent(0, 1) = 1.0;
  const OperatorDiagnostics nd = diagnostics(nilpotent);
  CHECK(nd.hermiticity_residual == doctest::Approx(std::sqrt(2.0)));
  CHECK_FALSE(nd.hermitian);
  CHECK_FALSE(nd.positive_definite);

  const OperatorDiagnostics id = diagnostics(Matrix::Identity(3, 3));
  CHECK(id.hermiticity_residual == 0.0);
  CHECK(id.min_eigenvalue == doctest::Approx(1.0));
  CHECK(id.positive_definite);
}

TEST_CASE("invert rejects singular input") {
  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(invert(singular, "test"), SingularFactor);

  Matrix ok(2, 2);
  ok << 2, 0, 0, 4;
  CHECK((invert(ok, "test") * ok - Matrix::Identity(2, 2)).norm() < 1e-14);
}

}  // TEST_SUITE
