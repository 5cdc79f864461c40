#include <doctest.h>

#include <cmath>

#include "corforge/errors.hpp"
#include "corforge/expression.hpp"

using namespace corforge;

TEST_SUITE("expression") {

TEST_CASE("parses and evaluates the full grammar") {
  CHECK(parse_expression("1+2*3").eval(0.0) == doctest::Approx(7.0));
  CHECK(parse_expression("(1+2)*3").eval(0.0) == doctest::Approx(9.0));
  CHECK(parse_expression("2*t^3").eval(2.0) == doctest::Approx(16.0));
  CHECK(parse_expression("-t+4").eval(1.0) == doctest::Approx(3.0));
  CHECK(parse_expression("sin(t)^2+cos(t)^2").eval(0.7) == doctest::Approx(1.0));
  CHECK(parse_expression("exp(2*t)").eval(0.5) == doctest::Approx(std::exp(1.0)));
  CHECK(parse_expression("sqrt(t)").eval(9.0) == doctest::Approx(3.0));
  CHECK(parse_expression("1/(4*t^2)").eval(2.0) == doctest::Approx(1.0 / 16.0));
  CHECK(parse_expression("t^-2").eval(2.0) == doctest::Approx(0.25));
  CHECK(parse_expression("1.5e-2*t").eval(10.0) == doctest::Approx(0.15));
}

TEST_CASE("symbolic derivatives match hand results") {
  const CoefficientFn quad("0.3*t^2");
  CHECK(quad.derivative(1.0) == doctest::Approx(0.6));
  CHECK(quad.derivative(5.0) == doctest::Approx(3.0));

  const CoefficientFn trig("sin(2*t)");
  CHECK(trig.derivative(0.0) == doctest::Approx(2.0));
  CHECK(trig.derivative(0.4) == doctest::Approx(2.0 * std::cos(0.8)));

  const CoefficientFn quotient("t/(1+t^2)");
  // d/dt t/(1+t^2) = (1 - t^2)/(1+t^2)^2
  CHECK(quotient.derivative(2.0) == doctest::Approx(-3.0 / 25.0));

  // d/dt sqrt(1+t^2) = t / sqrt(1+t^2)
  const CoefficientFn root("sqrt(1+t^2)");
  CHECK(root.derivative(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)));

  const CoefficientFn expo("exp(-t^2)");
  CHECK(expo.derivative(1.0) == doctest::Approx(-2.0 * std::exp(-1.0)));
}

TEST_CASE("derivatives agree with central differences across the grammar") {
  const char* sources[] = {"t^3-2*t",  "sin(t)*cos(2*t)", "exp(t/2)+sqrt(t+2)",
                           "1/(1+t^2)", "(t+1)^4/(t+3)",  "cos(t^2)"};
  for (const char* src : sources) {
    const CoefficientFn f(src);
    for (double t : {0.1, 0.6, 1.3, 2.2}) {
      const double h = 1e-6;
      const double fd = (f.value(t + h) - f.value(t - h)) / (2.0 * h);
      CHECK(f.derivative(t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("second derivatives via a second grammar pass") {
  const CoefficientFn sigma("1+t^2");
  const CoefficientFn sigma_dot = sigma.derivative_fn();
  CHECK(sigma_dot.value(3.0) == doctest::Approx(6.0));
  CHECK(sigma_dot.derivative(3.0) == doctest::Approx(2.0));

  const CoefficientFn wave("sin(2*t)");
  const CoefficientFn wave_dot = wave.derivative_fn();
  CHECK(wave_dot.derivative(0.3) == doctest::Approx(-4.0 * std::sin(0.6)));
}

TEST_CASE("parse errors carry position and token") {
  CHECK_THROWS_WITH_AS(parse_expression("2*"), doctest::Contains("offset"), ParseError);
  CHECK_THROWS_WITH_AS(parse_expression("sin 3"), doctest::Contains("'('"), ParseError);
  CHECK_THROWS_WITH_AS(parse_expression("1+bogus"), doctest::Contains("bogus"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_expression("t^t"), doctest::Contains("integer exponent"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_expression("(1+2"), doctest::Contains("')'"), ParseError);
  CHECK_THROWS_AS(parse_expression("1 2"), ParseError);
}

TEST_CASE("coefficient echoes its source") {
  const CoefficientFn f("0.5*sin(t)");
  CHECK(f.source() == "0.5*sin(t)");
}

}  // TEST_SUITE
