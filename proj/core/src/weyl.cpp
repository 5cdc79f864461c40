#include "corforge/weyl.hpp"

#include <algorithm>

#include "corforge/errors.hpp"

namespace corforge {

WeylPolynomial WeylPolynomial::monomial(int x_pow, int p_pow, ScalarExpr coeff) {
  WeylPolynomial w;
  if (!coeff.is_zero()) w.terms_[{x_pow, p_pow}] = std::move(coeff);
  return w;
}

int WeylPolynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

void WeylPolynomial::add_term(const WeylMonomial& m, const ScalarExpr& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

WeylPolynomial operator+(const WeylPolynomial& a, const WeylPolynomial& b) {
  WeylPolynomial w = a;
  for (const auto& [m, c] : b.terms()) w.add_term(m, c);
  return w;
}

WeylPolynomial operator-(const WeylPolynomial& a, const WeylPolynomial& b) {
  WeylPolynomial w = a;
  for (const auto& [m, c] : b.terms()) w.add_term(m, -c);
  return w;
}

WeylPolynomial WeylPolynomial::operator-() const {
  WeylPolynomial w;
  for (const auto& [m, c] : terms_) w.terms_[m] = -c;
  return w;
}

WeylPolynomial WeylPolynomial::scaled(const ScalarExpr& c) const {
  WeylPolynomial w;
  for (const auto& [m, coeff] : terms_) w.add_term(m, coeff * c);
  return w;
}

WeylPolynomial WeylPolynomial::div_int(std::int64_t k) const {
  WeylPolynomial w;
  for (const auto& [m, coeff] : terms_) w.terms_[m] = coeff.div_int(k);
  return w;
}

ScalarExpr WeylPolynomial::coefficient(int x_pow, int p_pow) const {
  auto it = terms_.find({x_pow, p_pow});
  return it == terms_.end() ? ScalarExpr::zero() : it->second;
}

namespace {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

std::int64_t factorial(int k) {
  std::int64_t r = 1;
  for (int j = 2; j <= k; ++j) r *= j;
  return r;
}

}  // namespace

WeylPolynomial normal_order(const WeylPolynomial& left, const WeylPolynomial& right) {
  WeylPolynomial out;
  for (const auto& [ml, cl] : left.terms()) {
    for (const auto& [mr, cr] : right.terms()) {
      // Normal ordering of the word x^a1 p^b1 x^a2 p^b2. Moving p^b1 through
      // x^a2 with p x = x p - i gives the exact finite sum
      //   p^m x^n = sum_k C(m,k) C(n,k) k! (-i)^k x^{n-k} p^{m-k}.
      const ScalarExpr coeff = cl * cr;
      const int m = ml.p_pow;
      const int n = mr.x_pow;
      const int kmax = std::min(m, n);
      ComplexRational ik(1);  // (-i)^k
      for (int k = 0; k <= kmax; ++k) {
        const ComplexRational weight =
            ComplexRational(binomial(m, k) * binomial(n, k) * factorial(k)) * ik;
        const WeylMonomial mono{ml.x_pow + n - k, m - k + mr.p_pow};
        out.add_term(mono, coeff.scaled(weight));
        ik = ik * ComplexRational(Rational(0), Rational(-1));
      }
    }
  }
  return out;
}

WeylPolynomial commutator(const WeylPolynomial& a, const WeylPolynomial& b) {
  return normal_order(a, b) - normal_order(b, a);
}

WeylPolynomial adjoint_conjugate(const WeylPolynomial& a, const WeylPolynomial& b,
                                 int max_depth) {
  WeylPolynomial sum = b;
  WeylPolynomial term = b;  // ad_A^k(B) / k!
  for (int k = 1; k <= max_depth; ++k) {
    term = commutator(a, term).div_int(k);
    if (term.is_zero()) return sum;
    sum = sum + term;
  }
  throw NonTerminatingSeries(
      "adjoint series did not terminate within max_depth=" +
      std::to_string(max_depth));
}

std::vector<WeylPolynomial> composite_coriolis_symbolic(
    const std::vector<SymbolicFactor>& factors, int max_depth) {
  const int n_factors = static_cast<int>(factors.size());
  std::vector<WeylPolynomial> chain(n_factors);
  WeylPolynomial above = WeylPolynomial::zero();  // Sigma_{n+1}
  for (int n = n_factors; n >= 1; --n) {
    const SymbolicFactor& f = factors[static_cast<std::size_t>(n - 1)];
    // Sigma_tilde_n = i * Omega_n^{-1} * d/dt Omega_n = i * fdot_n * K_n,
    // exact because the factor commutes with its own time derivative.
    const ScalarExpr i_fdot =
        ScalarExpr::symbol(f.coefficient, /*dotted=*/true)
            .scaled(ComplexRational::i());
    WeylPolynomial sigma = f.generator.scaled(i_fdot);
    if (!above.is_zero()) {
      const WeylPolynomial minus_fk =
          f.generator.scaled(-ScalarExpr::symbol(f.coefficient));
      sigma = sigma + adjoint_conjugate(minus_fk, above, max_depth);
    }
    chain[static_cast<std::size_t>(n - 1)] = sigma;
    above = chain[static_cast<std::size_t>(n - 1)];
  }
  return chain;
}

Eigen::MatrixXcd WeylPolynomial::to_matrix(const Eigen::MatrixXcd& x_op,
                                           const Eigen::MatrixXcd& p_op,
                                           const SymbolBindings& bindings) const {
  const auto d = x_op.rows();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [m, c] : terms_) {
    Eigen::MatrixXcd word = Eigen::MatrixXcd::Identity(d, d);
    for (int k = 0; k < m.x_pow; ++k) word = word * x_op;
    for (int k = 0; k < m.p_pow; ++k) word = word * p_op;
    acc += c.eval(bindings) * word;
  }
  return acc;
}

std::string WeylPolynomial::str() const {
  if (terms_.empty()) return "0";

  auto mono_str = [](const WeylMonomial& m) {
    std::string s;
    if (m.x_pow > 0) s += m.x_pow == 1 ? "x" : "x^" + std::to_string(m.x_pow);
    if (m.p_pow > 0) {
      if (!s.empty()) s += "*";
      s += m.p_pow == 1 ? "p" : "p^" + std::to_string(m.p_pow);
    }
    return s;
  };

  std::string out;
  bool first = true;
  // Descending (x_pow, p_pow): the x term leads, then p^3, p^2, p, constant.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string body;
    const auto& parts = c.terms();
    if (c.all_terms_negative()) {
      out += "-";
      body = parts.size() > 1 ? "(" + (-c).str() + ")" : (-c).str();
    } else {
      if (!first) out += "+";
      body = parts.size() > 1 ? "(" + c.str() + ")" : c.str();
    }
    const std::string mono = mono_str(m);
    if (mono.empty()) {
      out += body;
    } else if (body == "1") {
      out += mono;
    } else {
      out += body + "*" + mono;
    }
    first = false;
  }
  return out;
}

}  // namespace corforge
