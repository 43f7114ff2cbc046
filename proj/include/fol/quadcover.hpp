#ifndef FOL_QUADCOVER_HPP
#define FOL_QUADCOVER_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fol/ratfun.hpp"

namespace fol {

// Quadratic extension of the rational function field in the base variables:
// one generator g subject to g^2 = r_even + g * r_odd, with nonzero
// discriminant 4*r_even + r_odd^2 (so the two roots are distinct and the
// conjugate g -> r_odd - g is a genuine involution).
struct QuadRing {
  int nvars = 0;            // base variables
  std::string gen_name;     // display name of the generator
  RatFun r_even, r_odd;     // both in the base variables

  QuadRing(int n, std::string name, RatFun re, RatFun ro)
      : nvars(n), gen_name(std::move(name)), r_even(std::move(re)),
        r_odd(std::move(ro)) {
    RatFun disc = RatFun::constant(n, Rat(4)) * r_even + r_odd * r_odd;
    if (disc.is_zero())
      throw std::domain_error("QuadRing: degenerate relation (zero discriminant)");
  }

  friend bool operator==(const QuadRing& a, const QuadRing& b) {
    return a.nvars == b.nvars && a.r_even == b.r_even && a.r_odd == b.r_odd;
  }
};

// Element even + g * odd of a quadratic cover ring.
class QuadElem {
public:
  QuadElem() = default;
  QuadElem(std::shared_ptr<const QuadRing> ring, RatFun even, RatFun odd)
      : ring_(std::move(ring)), even_(std::move(even)), odd_(std::move(odd)) {}

  static QuadElem from_base(std::shared_ptr<const QuadRing> ring, const RatFun& f) {
    RatFun zero(ring->nvars);
    return QuadElem(std::move(ring), f, zero);
  }
  static QuadElem constant(std::shared_ptr<const QuadRing> ring, const Rat& c) {
    RatFun f = RatFun::constant(ring->nvars, c);
    return from_base(std::move(ring), f);
  }
  static QuadElem generator(std::shared_ptr<const QuadRing> ring) {
    RatFun zero(ring->nvars), one = RatFun::constant(ring->nvars, Rat(1));
    return QuadElem(std::move(ring), zero, one);
  }

  const std::shared_ptr<const QuadRing>& ring() const { return ring_; }
  const RatFun& even() const { return even_; }
  const RatFun& odd() const { return odd_; }
  bool is_zero() const { return even_.is_zero() && odd_.is_zero(); }
  bool is_base() const { return odd_.is_zero(); }

  friend QuadElem operator+(const QuadElem& a, const QuadElem& b) {
    a.check(b);
    return QuadElem(a.ring_, a.even_ + b.even_, a.odd_ + b.odd_);
  }
  friend QuadElem operator-(const QuadElem& a, const QuadElem& b) {
    a.check(b);
    return QuadElem(a.ring_, a.even_ - b.even_, a.odd_ - b.odd_);
  }
  QuadElem operator-() const { return QuadElem(ring_, -even_, -odd_); }
  friend QuadElem operator*(const QuadElem& a, const QuadElem& b) {
    a.check(b);
    // (p + g q)(r + g s) = pr + re*qs + g(ps + qr + ro*qs)
    const RatFun& re = a.ring_->r_even;
    const RatFun& ro = a.ring_->r_odd;
    return QuadElem(a.ring_,
                    a.even_ * b.even_ + re * (a.odd_ * b.odd_),
                    a.even_ * b.odd_ + a.odd_ * b.even_ + ro * (a.odd_ * b.odd_));
  }
  friend QuadElem operator*(const Rat& c, const QuadElem& a) {
    RatFun k = RatFun::constant(a.ring_->nvars, c);
    return QuadElem(a.ring_, k * a.even_, k * a.odd_);
  }
  QuadElem& operator+=(const QuadElem& o) { return *this = *this + o; }
  QuadElem& operator-=(const QuadElem& o) { return *this = *this - o; }
  QuadElem& operator*=(const QuadElem& o) { return *this = *this * o; }

  friend bool operator==(const QuadElem& a, const QuadElem& b) {
    return a.even_ == b.even_ && a.odd_ == b.odd_;
  }
  friend bool operator!=(const QuadElem& a, const QuadElem& b) { return !(a == b); }

  // Conjugate: g -> r_odd - g (the other root of the relation).
  QuadElem conj() const {
    return QuadElem(ring_, even_ + ring_->r_odd * odd_, -odd_);
  }

  // Norm (p + g q)(p + g q)^conj lies in the base field.
  RatFun norm() const {
    QuadElem n = (*this) * conj();
    return n.even_;  // odd part vanishes identically
  }

  QuadElem inverse() const {
    if (is_zero()) throw std::domain_error("QuadElem: inverse of zero");
    RatFun n = norm();
    if (n.is_zero())
      throw std::domain_error("QuadElem: zero norm (relation is reducible here)");
    QuadElem c = conj();
    return QuadElem(ring_, c.even_ / n, c.odd_ / n);
  }
  friend QuadElem operator/(const QuadElem& a, const QuadElem& b) {
    return a * b.inverse();
  }

  // Derivative with respect to base variable `var`, using the chain rule on
  // the generator: dg = (dr_even + g dr_odd) / (2g - r_odd), and
  // (2g - r_odd)^-1 = (2g - r_odd) / (4 r_even + r_odd^2).
  QuadElem derivative(int var) const {
    const auto& R = *ring_;
    RatFun disc = RatFun::constant(R.nvars, Rat(4)) * R.r_even + R.r_odd * R.r_odd;
    RatFun de = R.r_even.derivative(var), do_ = R.r_odd.derivative(var);
    QuadElem g = generator(ring_);
    QuadElem two_g_minus_ro =
        Rat(2) * g - from_base(ring_, R.r_odd);
    QuadElem dg = (from_base(ring_, de) + from_base(ring_, do_) * g) *
                  two_g_minus_ro * from_base(ring_, RatFun::constant(R.nvars, Rat(1)) / disc);
    return from_base(ring_, even_.derivative(var)) +
           from_base(ring_, odd_.derivative(var)) * g + from_base(ring_, odd_) * dg;
  }

  std::string str(const std::vector<std::string>& names) const {
    std::string e = even_.str(names);
    if (odd_.is_zero()) return e;
    std::string o = ring_->gen_name + "*(" + odd_.str(names) + ")";
    if (even_.is_zero()) return o;
    return e + " + " + o;
  }

private:
  void check(const QuadElem& o) const {
    if (!ring_ || !o.ring_ || !(*ring_ == *o.ring_))
      throw std::invalid_argument("QuadElem: ring mismatch");
  }

  std::shared_ptr<const QuadRing> ring_;
  RatFun even_, odd_;
};

// Reduce a rational function of (base variables..., x), where x is the
// variable at index `xvar` (conventionally the last), to an element of the
// quadratic cover ring with x as generator. The numerator is reduced modulo
// x^2 - r_odd*x - r_even; the denominator is inverted in the ring.
inline QuadElem quad_reduce(const RatFun& f, int xvar,
                            std::shared_ptr<const QuadRing> ring) {
  int n = ring->nvars;
  if (f.nvars() != n + 1)
    throw std::invalid_argument("quad_reduce: expected one extra variable");

  auto reduce_poly = [&](const MPoly& p) {
    // Collect coefficients of x^k (as polynomials in the base vars), then
    // accumulate against ring powers of the generator.
    auto coeffs = detail::as_univar(p, xvar);
    auto drop = [&](const MPoly& q) {  // forget the x slot (exponent 0 there)
      MPoly r(n);
      for (const auto& [e, c] : q.terms()) {
        Exp d = e;
        d.erase(d.begin() + xvar);
        r.add_term(d, c);
      }
      return r;
    };
    QuadElem acc = QuadElem::from_base(ring, RatFun(n));
    QuadElem g = QuadElem::generator(ring);
    QuadElem gpow = QuadElem::from_base(ring, RatFun::constant(n, Rat(1)));
    int next = 0;
    for (const auto& [k, c] : coeffs) {
      while (next < k) {
        gpow = gpow * g;
        ++next;
      }
      acc += QuadElem::from_base(ring, RatFun(drop(c))) * gpow;
    }
    return acc;
  };

  QuadElem num = reduce_poly(f.num());
  QuadElem den = reduce_poly(f.den());
  return num / den;
}

}  // namespace fol

#endif
