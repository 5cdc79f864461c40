#include "corforge/scalar_expr.hpp"

#include <algorithm>
#include <sstream>

#include "corforge/errors.hpp"

namespace corforge {

ScalarExpr ScalarExpr::constant(ComplexRational c) {
  ScalarExpr e;
  if (!c.is_zero()) e.terms_.push_back({SymbolMonomial{}, c});
  return e;
}

ScalarExpr ScalarExpr::symbol(const std::string& base, bool dotted) {
  ScalarExpr e;
  e.terms_.push_back({SymbolMonomial{TimeSymbol{base, dotted}}, ComplexRational(1)});
  return e;
}

void ScalarExpr::add_term(const SymbolMonomial& m, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), m,
      [](const auto& term, const SymbolMonomial& key) { return term.first < key; });
  if (it != terms_.end() && it->first == m) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  } else {
    terms_.insert(it, {m, c});
  }
}

ScalarExpr ScalarExpr::operator-() const {
  ScalarExpr e = *this;
  for (auto& [m, c] : e.terms_) c = -c;
  return e;
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  ScalarExpr e = a;
  for (const auto& [m, c] : b.terms_) e.add_term(m, c);
  return e;
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  ScalarExpr e = a;
  for (const auto& [m, c] : b.terms_) e.add_term(m, -c);
  return e;
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  ScalarExpr e;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      SymbolMonomial m;
      m.reserve(ma.size() + mb.size());
      std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
      e.add_term(m, ca * cb);
    }
  }
  return e;
}

ScalarExpr ScalarExpr::scaled(const ComplexRational& c) const {
  ScalarExpr e;
  if (c.is_zero()) return e;
  e.terms_ = terms_;
  for (auto& [m, coeff] : e.terms_) coeff = coeff * c;
  return e;
}

ScalarExpr ScalarExpr::div_int(std::int64_t k) const {
  ScalarExpr e = *this;
  for (auto& [m, coeff] : e.terms_) coeff = coeff.div_int(k);
  return e;
}

std::complex<double> ScalarExpr::eval(const SymbolBindings& bindings) const {
  std::complex<double> acc{0.0, 0.0};
  for (const auto& [m, c] : terms_) {
    std::complex<double> term = c.to_complex();
    for (const TimeSymbol& s : m) {
      auto it = bindings.find(s.base);
      if (it == bindings.end())
        throw DomainError("unbound symbol in scalar expression: " + s.base);
      term *= s.dotted ? it->second.second : it->second.first;
    }
    acc += term;
  }
  return acc;
}

bool ScalarExpr::all_terms_negative() const {
  if (terms_.empty()) return false;
  for (const auto& [m, c] : terms_) {
    const bool neg = c.re.is_negative() || (c.re.is_zero() && c.im.is_negative());
    if (!neg) return false;
  }
  return true;
}

namespace {

std::string symbol_str(const TimeSymbol& s) {
  return s.dotted ? "ad(" + s.base + ")" : s.base;
}

// Renders |c| * monomial, e.g. "3*ad(alpha)*beta" or "i*ad(alpha)" or "1/2".
std::string term_magnitude_str(const ComplexRational& c, const SymbolMonomial& m) {
  const bool neg = c.re.is_negative() || (c.re.is_zero() && c.im.is_negative());
  const ComplexRational a = neg ? -c : c;

  std::vector<std::string> parts;
  if (a.is_real()) {
    if (!(a.re.is_one() && !m.empty())) parts.push_back(a.re.str());
  } else if (a.re.is_zero()) {
    if (!a.im.is_one()) parts.push_back(a.im.str());
    parts.push_back("i");
  } else {
    parts.push_back("(" + a.re.str() + "+" + a.im.str() + "*i)");
  }
  for (const TimeSymbol& s : m) parts.push_back(symbol_str(s));

  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += "*";
    out += parts[k];
  }
  return out.empty() ? "1" : out;
}

}  // namespace

std::string ScalarExpr::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool neg = c.re.is_negative() || (c.re.is_zero() && c.im.is_negative());
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? "-" : "+";
    }
    out += term_magnitude_str(c, m);
    first = false;
  }
  return out;
}

}  // namespace corforge
