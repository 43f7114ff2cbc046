#ifndef FOL_RATFUN_HPP
#define FOL_RATFUN_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "fol/mpoly.hpp"

namespace fol {

// Rational function num/den over Q, kept normalized: gcd(num, den) = 1 and
// the denominator is primitive with positive leading coefficient.
class RatFun {
public:
  explicit RatFun(int nvars = 0)
      : num_(nvars), den_(MPoly::constant(nvars, Rat(1))) {}
  RatFun(const MPoly& num) : num_(num), den_(MPoly::constant(num.nvars(), Rat(1))) {}
  RatFun(const MPoly& num, const MPoly& den) : num_(num), den_(den) { normalize(); }
  static RatFun constant(int nvars, const Rat& c) {
    return RatFun(MPoly::constant(nvars, c));
  }
  static RatFun variable(int nvars, int i) {
    return RatFun(MPoly::variable(nvars, i));
  }

  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  int nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rat constant_value() const {
    if (!is_constant()) throw std::domain_error("RatFun: not constant");
    return num_.constant_value() / den_.constant_value();
  }
  bool is_polynomial() const { return den_.is_constant(); }

  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
    return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b) {
    if (a.den_ == b.den_) return RatFun(a.num_ - b.num_, a.den_);
    return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    return RatFun(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.is_zero()) throw std::domain_error("RatFun: division by zero");
    return RatFun(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend RatFun operator*(const Rat& c, const RatFun& a) {
    return RatFun(c * a.num_, a.den_);
  }
  RatFun operator-() const {
    RatFun r = *this;
    r.num_ = -r.num_;
    return r;
  }
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
  RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

  friend bool operator==(const RatFun& a, const RatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

  RatFun inverse() const {
    if (is_zero()) throw std::domain_error("RatFun: inverse of zero");
    return RatFun(den_, num_);
  }

  RatFun pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    RatFun r = constant(nvars(), Rat(1));
    RatFun base = *this;
    while (k) {
      if (k & 1) r *= base;
      base *= base;
      k >>= 1;
    }
    return r;
  }

  RatFun derivative(int var) const {
    return RatFun(num_.derivative(var) * den_ - num_ * den_.derivative(var),
                  den_ * den_);
  }

  // Substitute rational-function values for every variable.
  RatFun substitute(const std::vector<RatFun>& values) const {
    int target = values.empty() ? 0 : values.front().nvars();
    auto eval_poly = [&](const MPoly& p) {
      RatFun r = RatFun::constant(target, Rat(0));
      for (const auto& [e, c] : p.terms()) {
        RatFun t = RatFun::constant(target, c);
        for (int i = 0; i < p.nvars(); ++i)
          if (e[i] > 0) t *= values[i].pow(e[i]);
        r += t;
      }
      return r;
    };
    return eval_poly(num_) / eval_poly(den_);
  }

  std::string str(const std::vector<std::string>& names) const {
    if (is_polynomial()) {
      Rat d = den_.constant_value();
      if (d == Rat(1)) return num_.str(names);
      return "(" + num_.str(names) + ")/" + d.str();
    }
    return "(" + num_.str(names) + ")/(" + den_.str(names) + ")";
  }

private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("RatFun: zero denominator");
    if (num_.is_zero()) {
      den_ = MPoly::constant(num_.nvars(), Rat(1));
      return;
    }
    if (!den_.is_constant() && !num_.is_constant()) {
      MPoly g = poly_gcd(num_, den_);
      if (!g.is_constant()) {
        num_ = *exact_divide(num_, g);
        den_ = *exact_divide(den_, g);
      }
    }
    Rat c = den_.content();
    num_ = (Rat(1) / c) * num_;
    den_ = (Rat(1) / c) * den_;
  }

  MPoly num_, den_;
};

}  // namespace fol

#endif
