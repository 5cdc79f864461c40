#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "corforge/errors.hpp"
#include "corforge/weyl.hpp"

using namespace corforge;

namespace {

// Independent normal-ordering oracle: operator words as strings over
// {'x','p'} with exact coefficients, rewritten one "px" -> "xp" - i at a
// time until every word is sorted. No binomial shortcuts, no shared code
// with the implementation path it checks.
using WordPoly = std::map<std::string, ComplexRational>;

void oracle_add(WordPoly& poly, const std::string& word, const ComplexRational& c) {
  auto [it, inserted] = poly.try_emplace(word, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) poly.erase(it);
  }
}

WordPoly oracle_normalize(const WordPoly& input) {
  WordPoly pending = input;
  WordPoly done;
  while (!pending.empty()) {
    auto it = pending.begin();
    const std::string word = it->first;
    const ComplexRational coeff = it->second;
    pending.erase(it);
    const std::size_t swap = word.find("px");
    if (swap == std::string::npos) {
      oracle_add(done, word, coeff);
      continue;
    }
    std::string swapped = word;
    swapped[swap] = 'x';
    swapped[swap + 1] = 'p';
    oracle_add(pending, swapped, coeff);
    std::string dropped = word;
    dropped.erase(swap, 2);
    oracle_add(pending, dropped, coeff * ComplexRational(Rational(0), Rational(-1)));
  }
  return done;
}

WeylPolynomial oracle_product(const WeylMonomial& lhs, const WeylMonomial& rhs) {
  std::string word;
  word.append(static_cast<std::size_t>(lhs.x_pow), 'x');
  word.append(static_cast<std::size_t>(lhs.p_pow), 'p');
  word.append(static_cast<std::size_t>(rhs.x_pow), 'x');
  word.append(static_cast<std::size_t>(rhs.p_pow), 'p');
  WordPoly start;
  oracle_add(start, word, ComplexRational(1));
  const WordPoly sorted = oracle_normalize(start);
  WeylPolynomial out;
  for (const auto& [w, c] : sorted) {
    const auto xs = static_cast<int>(std::count(w.begin(), w.end(), 'x'));
    const auto ps = static_cast<int>(w.size()) - xs;
    out = out + WeylPolynomial::monomial(xs, ps, ScalarExpr::constant(c));
  }
  return out;
}

ScalarExpr c_one() { return ScalarExpr::one(); }
ScalarExpr c_i() { return ScalarExpr::constant(ComplexRational::i()); }
ScalarExpr c_int(std::int64_t v) { return ScalarExpr::constant(ComplexRational(v)); }

}  // namespace

TEST_SUITE("weyl") {

TEST_CASE("normal_order: defining rewrite and already-ordered product") {
  const WeylPolynomial px = normal_order(WeylPolynomial::p(), WeylPolynomial::x());
  // p x = x p - i
  WeylPolynomial expected = WeylPolynomial::monomial(1, 1) +
                            WeylPolynomial::monomial(0, 0, -c_i());
  CHECK(px == expected);

  const WeylPolynomial xp = normal_order(WeylPolynomial::x(), WeylPolynomial::p());
  CHECK(xp == WeylPolynomial::monomial(1, 1));
}

TEST_CASE("normal_order: p^2 x against the repeated-rewriting oracle") {
  const WeylPolynomial got =
      normal_order(WeylPolynomial::monomial(0, 2), WeylPolynomial::x());
  // Oracle-computed: x p^2 - 2i p.
  WeylPolynomial expected = WeylPolynomial::monomial(1, 2) +
                            WeylPolynomial::monomial(0, 1, c_int(-2) * c_i());
  CHECK(got == expected);
  CHECK(got == oracle_product({0, 2}, {1, 0}));
}

TEST_CASE("normal_order: every monomial pair up to degree 4 matches the oracle") {
  for (int a1 = 0; a1 <= 2; ++a1)
    for (int b1 = 0; b1 <= 2; ++b1)
      for (int a2 = 0; a2 <= 2; ++a2)
        for (int b2 = 0; b2 <= 2; ++b2) {
          const WeylPolynomial got = normal_order(WeylPolynomial::monomial(a1, b1),
                                                  WeylPolynomial::monomial(a2, b2));
          CHECK(got == oracle_product({a1, b1}, {a2, b2}));
        }
}

TEST_CASE("normal_order is associative on all monomial triples of degree <= 4") {
  std::vector<WeylPolynomial> basis;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) basis.push_back(WeylPolynomial::monomial(a, b));
  for (const auto& lhs : basis)
    for (const auto& mid : basis)
      for (const auto& rhs : basis) {
        REQUIRE(normal_order(normal_order(lhs, mid), rhs) ==
                normal_order(lhs, normal_order(mid, rhs)));
      }
}

TEST_CASE("normal_order is bilinear over symbolic coefficients") {
  const WeylPolynomial a =
      WeylPolynomial::monomial(0, 1, ScalarExpr::symbol("alpha")) +
      WeylPolynomial::monomial(1, 0, c_i());
  const WeylPolynomial b =
      WeylPolynomial::monomial(1, 1, ScalarExpr::symbol("beta", true));
  const WeylPolynomial sum = normal_order(a + a, b);
  CHECK(sum == normal_order(a, b) + normal_order(a, b));
}

TEST_CASE("commutator: canonical pair, p^3 with x, commuting powers") {
  CHECK(commutator(WeylPolynomial::x(), WeylPolynomial::p()) ==
        WeylPolynomial::monomial(0, 0, c_i()));

  // [p^3, x] = -3i p^2, cross-checked by expanding both orders via the oracle.
  const WeylPolynomial got =
      commutator(WeylPolynomial::monomial(0, 3), WeylPolynomial::x());
  CHECK(got == WeylPolynomial::monomial(0, 2, c_int(-3) * c_i()));
  CHECK(got == oracle_product({0, 3}, {1, 0}) - oracle_product({1, 0}, {0, 3}));

  CHECK(commutator(WeylPolynomial::x(), WeylPolynomial::monomial(2, 0)).is_zero());
}

TEST_CASE("commutator antisymmetry and degree bound") {
  std::vector<WeylPolynomial> samples = {
      WeylPolynomial::monomial(2, 1),
      WeylPolynomial::monomial(1, 2, c_i()),
      WeylPolynomial::monomial(0, 3) + WeylPolynomial::monomial(1, 0),
      WeylPolynomial::monomial(2, 2, ScalarExpr::symbol("g")),
  };
  for (const auto& a : samples)
    for (const auto& b : samples) {
      const WeylPolynomial ab = commutator(a, b);
      CHECK(ab == -commutator(b, a));
      if (!ab.is_zero()) CHECK(ab.degree() <= a.degree() + b.degree() - 2);
    }
}

TEST_CASE("commutator satisfies the Jacobi identity") {
  const WeylPolynomial a = WeylPolynomial::monomial(1, 1);
  const WeylPolynomial b = WeylPolynomial::monomial(0, 2, c_i());
  const WeylPolynomial c =
      WeylPolynomial::monomial(2, 0) + WeylPolynomial::monomial(0, 1);
  const WeylPolynomial jacobi = commutator(a, commutator(b, c)) +
                                commutator(b, commutator(c, a)) +
                                commutator(c, commutator(a, b));
  CHECK(jacobi.is_zero());
}

TEST_CASE("adjoint_conjugate: translation, cubic kick, identity") {
  // e^{-i delta p} x e^{i delta p} = x - delta (series ends at k = 1).
  const WeylPolynomial shift = WeylPolynomial::monomial(
      0, 1, -c_i() * ScalarExpr::symbol("delta"));
  const WeylPolynomial moved = adjoint_conjugate(shift, WeylPolynomial::x());
  CHECK(moved == WeylPolynomial::x() -
                     WeylPolynomial::monomial(0, 0, ScalarExpr::symbol("delta")));

  // e^{-beta p^3} x e^{beta p^3} = x + 3i beta p^2.
  const WeylPolynomial cubic =
      WeylPolynomial::monomial(0, 3, -ScalarExpr::symbol("beta"));
  const WeylPolynomial kicked = adjoint_conjugate(cubic, WeylPolynomial::x());
  CHECK(kicked ==
        WeylPolynomial::x() +
            WeylPolynomial::monomial(0, 2, c_int(3) * c_i() * ScalarExpr::symbol("beta")));

  CHECK(adjoint_conjugate(WeylPolynomial::zero(), WeylPolynomial::monomial(0, 2)) ==
        WeylPolynomial::monomial(0, 2));
}

TEST_CASE("adjoint_conjugate inverts under sign flip of the exponent") {
  const std::vector<WeylPolynomial> exponents = {
      WeylPolynomial::monomial(0, 1, c_i() * ScalarExpr::symbol("u")),
      WeylPolynomial::monomial(0, 3, ScalarExpr::symbol("v")),
      WeylPolynomial::monomial(1, 0, ScalarExpr::symbol("w")),
      WeylPolynomial::monomial(2, 0, c_i()),
  };
  const std::vector<WeylPolynomial> operands = {
      WeylPolynomial::x(),
      WeylPolynomial::p(),
      WeylPolynomial::monomial(1, 2) + WeylPolynomial::monomial(2, 0),
      WeylPolynomial::monomial(0, 2, ScalarExpr::symbol("q", true)),
  };
  for (const auto& a : exponents)
    for (const auto& b : operands)
      CHECK(adjoint_conjugate(a, adjoint_conjugate(-a, b)) == b);
}

TEST_CASE("adjoint_conjugate flags a non-terminating pair") {
  // ad_{x p} never kills x: [xp, x] = -i x, so the series is infinite.
  CHECK_THROWS_AS(adjoint_conjugate(WeylPolynomial::monomial(1, 1),
                                    WeylPolynomial::x(), 8),
                  NonTerminatingSeries);
}

TEST_CASE("coriolis recursion: single factor and commuting pair") {
  const std::vector<WeylPolynomial> single = composite_coriolis_symbolic(
      {{"alpha", WeylPolynomial::x()}});
  REQUIRE(single.size() == 1);
  CHECK(single[0] ==
        WeylPolynomial::monomial(1, 0, c_i() * ScalarExpr::symbol("alpha", true)));

  // Two factors sharing the generator i p commute; the conjugation is the
  // identity and the dot-coefficients add: Sigma_1 = -(d1' + d2') p.
  const WeylPolynomial gen_ip = WeylPolynomial::monomial(0, 1, c_i());
  const std::vector<WeylPolynomial> pair =
      composite_coriolis_symbolic({{"d1", gen_ip}, {"d2", gen_ip}});
  REQUIRE(pair.size() == 2);
  const WeylPolynomial expected = WeylPolynomial::monomial(
      0, 1, -(ScalarExpr::symbol("d1", true) + ScalarExpr::symbol("d2", true)));
  CHECK(pair[0] == expected);
}

TEST_CASE("coriolis recursion reproduces the five-term closed form exactly") {
  const ScalarExpr i = c_i();
  const std::vector<SymbolicFactor> factors = {
      {"delta", WeylPolynomial::monomial(0, 1, i)},
      {"gamma", WeylPolynomial::monomial(0, 2, i)},
      {"beta", WeylPolynomial::monomial(0, 3)},
      {"alpha", WeylPolynomial::monomial(1, 0)},
  };
  const std::vector<WeylPolynomial> chain = composite_coriolis_symbolic(factors);
  REQUIRE(chain.size() == 4);

  const ScalarExpr ad = ScalarExpr::symbol("alpha", true);
  const ScalarExpr bd = ScalarExpr::symbol("beta", true);
  const ScalarExpr gd = ScalarExpr::symbol("gamma", true);
  const ScalarExpr dd = ScalarExpr::symbol("delta", true);
  const ScalarExpr beta = ScalarExpr::symbol("beta");
  const ScalarExpr gamma = ScalarExpr::symbol("gamma");
  const ScalarExpr delta = ScalarExpr::symbol("delta");

  const WeylPolynomial expected =
      WeylPolynomial::monomial(1, 0, i * ad) +                        // i x alpha'
      WeylPolynomial::monomial(0, 3, i * bd) +                        // i beta' p^3
      WeylPolynomial::monomial(0, 2, -(c_int(3) * ad * beta + gd)) +  // -(3a'b+g')p^2
      WeylPolynomial::monomial(0, 1, -(c_int(2) * i * gamma * ad + dd)) +
      WeylPolynomial::monomial(0, 0, -(i * delta * ad));
  CHECK(chain[0] == expected);

  // Coefficient-by-coefficient, zero tolerance.
  CHECK(chain[0].coefficient(1, 0) == i * ad);
  CHECK(chain[0].coefficient(0, 3) == i * bd);
  CHECK(chain[0].coefficient(0, 2) == -(c_int(3) * ad * beta + gd));
  CHECK(chain[0].coefficient(0, 1) == -(c_int(2) * i * gamma * ad + dd));
  CHECK(chain[0].coefficient(0, 0) == -(i * delta * ad));

  // The intermediate rungs printed by the CLI.
  CHECK(chain[3] == WeylPolynomial::monomial(1, 0, i * ad));
  CHECK(chain[0].str() ==
        "i*ad(alpha)*x+i*ad(beta)*p^3-(3*ad(alpha)*beta+ad(gamma))*p^2"
        "-(2*i*ad(alpha)*gamma+ad(delta))*p-i*ad(alpha)*delta");
}

TEST_CASE("recursion agrees with the product-rule expansion for N <= 4") {
  // Direct route: i Omega^{-1} dOmega/dt expanded by the product rule,
  //   Sigma_1 = sum_m Ad_{Omega_1^{-1}} ... Ad_{Omega_{m-1}^{-1}} (i fdot_m K_m),
  // with each tilde term conjugated through the factors below it separately.
  const auto product_rule_oracle = [](const std::vector<SymbolicFactor>& factors) {
    WeylPolynomial total;
    for (std::size_t m = 0; m < factors.size(); ++m) {
      WeylPolynomial term = factors[m].generator.scaled(
          c_i() * ScalarExpr::symbol(factors[m].coefficient, true));
      for (std::size_t k = m; k-- > 0;) {
        const WeylPolynomial minus_fk = factors[k].generator.scaled(
            -ScalarExpr::symbol(factors[k].coefficient));
        term = adjoint_conjugate(minus_fk, term);
      }
      total = total + term;
    }
    return total;
  };

  const WeylPolynomial gen_x = WeylPolynomial::x();
  const WeylPolynomial gen_x2 = WeylPolynomial::monomial(2, 0);
  const WeylPolynomial gen_p = WeylPolynomial::monomial(0, 1, c_i());
  const WeylPolynomial gen_p2 = WeylPolynomial::monomial(0, 2, c_i());
  const WeylPolynomial gen_p3 = WeylPolynomial::monomial(0, 3);

  const std::vector<std::vector<SymbolicFactor>> cases = {
      {{"a", gen_x}},
      {{"a", gen_p}, {"b", gen_x}},
      {{"a", gen_x2}, {"b", gen_p}, {"c", gen_x}},
      {{"a", gen_p}, {"b", gen_p2}, {"c", gen_p3}, {"d", gen_x}},
      {{"a", gen_x}, {"b", gen_p3}, {"c", gen_x2}, {"d", gen_p}},
  };
  for (const auto& factors : cases) {
    const std::vector<WeylPolynomial> chain = composite_coriolis_symbolic(factors);
    CHECK(chain[0] == product_rule_oracle(factors));
  }
}

TEST_CASE("recursion propagates the non-terminating error") {
  CHECK_THROWS_AS(composite_coriolis_symbolic(
                      {{"a", WeylPolynomial::monomial(1, 1)}, {"b", WeylPolynomial::x()}},
                      8),
                  NonTerminatingSeries);
}

}  // TEST_SUITE
