#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

namespace corforge {

/// Exact rational number on int64. Always normalized: gcd(num,den)=1, den>0.
/// The symbolic layer never produces large denominators (the adjoint series
/// divides by k! with k <= 3 for every factor set of interest), so overflow
/// is not a practical concern; operations assert-normalize via gcd anyway.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_negative() const { return num_ < 0; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

/// Gaussian rational re + i*im with exact arithmetic.
struct ComplexRational {
  Rational re;
  Rational im;

  constexpr ComplexRational() = default;
  ComplexRational(Rational r) : re(r), im(0) {}
  ComplexRational(Rational r, Rational i) : re(r), im(i) {}
  ComplexRational(std::int64_t r) : re(r), im(0) {}

  static ComplexRational i() { return ComplexRational(Rational(0), Rational(1)); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }

  std::complex<double> to_complex() const {
    return {re.to_double(), im.to_double()};
  }

  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  ComplexRational operator-() const { return {-re, -im}; }

  ComplexRational div_int(std::int64_t k) const {
    return {re / Rational(k), im / Rational(k)};
  }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace corforge
