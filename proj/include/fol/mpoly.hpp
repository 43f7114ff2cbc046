#ifndef FOL_MPOLY_HPP
#define FOL_MPOLY_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fol/rational.hpp"

namespace fol {

// Exponent vector; length equals the number of variables of the polynomial.
using Exp = std::vector<int>;

inline int total_degree(const Exp& e) {
  return std::accumulate(e.begin(), e.end(), 0);
}

// Graded lexicographic order, descending (leading term first in the map).
struct GrlexGreater {
  bool operator()(const Exp& a, const Exp& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;  // lexicographic tie-break
  }
};

// Sparse multivariate polynomial over Q with a fixed variable count.
// Terms are kept in canonical graded-lex order with no zero coefficients.
class MPoly {
public:
  using Terms = std::map<Exp, Rat, GrlexGreater>;

  explicit MPoly(int nvars = 0) : nvars_(nvars) {}

  static MPoly constant(int nvars, const Rat& c) {
    MPoly p(nvars);
    if (!c.is_zero()) p.terms_[Exp(nvars, 0)] = c;
    return p;
  }
  static MPoly variable(int nvars, int i) {
    MPoly p(nvars);
    Exp e(nvars, 0);
    e.at(i) = 1;
    p.terms_[e] = Rat(1);
    return p;
  }
  static MPoly monomial(int nvars, const Exp& e, const Rat& c) {
    if ((int)e.size() != nvars) throw std::invalid_argument("MPoly: bad exponent size");
    MPoly p(nvars);
    if (!c.is_zero()) p.terms_[e] = c;
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }
  Rat constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw std::domain_error("MPoly: not constant");
    return terms_.begin()->second;
  }

  int degree() const {  // total degree; -1 for the zero polynomial
    if (terms_.empty()) return -1;
    return total_degree(terms_.begin()->first);
  }
  int degree_in(int var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.at(var));
    return d;
  }

  const Rat& leading_coeff() const {
    static const Rat zero(0);
    return terms_.empty() ? zero : terms_.begin()->second;
  }
  Exp leading_exp() const {
    if (terms_.empty()) throw std::domain_error("MPoly: zero has no leading term");
    return terms_.begin()->first;
  }

  void add_term(const Exp& e, const Rat& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend MPoly operator+(const MPoly& a, const MPoly& b) {
    a.check_compat(b);
    MPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend MPoly operator-(const MPoly& a, const MPoly& b) {
    a.check_compat(b);
    MPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
  }
  MPoly operator-() const {
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    a.check_compat(b);
    MPoly r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exp e(a.nvars_);
        for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  friend MPoly operator*(const Rat& c, const MPoly& a) {
    MPoly r(a.nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, k] : a.terms_) r.terms_.emplace(e, c * k);
    return r;
  }
  MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
  MPoly& operator-=(const MPoly& o) { return *this = *this - o; }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  MPoly pow(int k) const {
    if (k < 0) throw std::invalid_argument("MPoly::pow: negative exponent");
    MPoly r = constant(nvars_, Rat(1));
    MPoly base = *this;
    while (k) {
      if (k & 1) r *= base;
      base *= base;
      k >>= 1;
    }
    return r;
  }

  MPoly derivative(int var) const {
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e.at(var) == 0) continue;
      Exp d = e;
      d[var] -= 1;
      r.add_term(d, c * Rat(e[var]));
    }
    return r;
  }

  // Substitute polynomial values for every variable; values[i] must all share
  // one variable count.
  MPoly substitute(const std::vector<MPoly>& values) const {
    if ((int)values.size() != nvars_)
      throw std::invalid_argument("MPoly::substitute: arity mismatch");
    int target_vars = nvars_ == 0 ? 0 : values.front().nvars();
    MPoly r(target_vars);
    for (const auto& [e, c] : terms_) {
      MPoly t = MPoly::constant(target_vars, c);
      for (int i = 0; i < nvars_; ++i)
        if (e[i] > 0) t *= values[i].pow(e[i]);
      r += t;
    }
    if (nvars_ == 0 && !terms_.empty()) r = *this;
    return r;
  }

  Rat eval(const std::vector<Rat>& point) const {
    if ((int)point.size() != nvars_)
      throw std::invalid_argument("MPoly::eval: arity mismatch");
    Rat r(0);
    for (const auto& [e, c] : terms_) {
      Rat t = c;
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < e[i]; ++k) t *= point[i];
      r += t;
    }
    return r;
  }

  // Homogeneous component of the given total degree.
  MPoly homogeneous_part(int deg) const {
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == deg) r.terms_.emplace(e, c);
    return r;
  }
  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = degree();
    for (const auto& [e, c] : terms_)
      if (total_degree(e) != d) return false;
    return true;
  }

  // Insert a fresh variable (exponent 0 everywhere) at position `pos`.
  MPoly insert_var(int pos) const {
    MPoly r(nvars_ + 1);
    for (const auto& [e, c] : terms_) {
      Exp f = e;
      f.insert(f.begin() + pos, 0);
      r.terms_.emplace(f, c);
    }
    return r;
  }

  // Set the variable at `pos` to 1 and remove it.
  MPoly drop_var_at_one(int pos) const {
    MPoly r(nvars_ - 1);
    for (const auto& [e, c] : terms_) {
      Exp f = e;
      f.erase(f.begin() + pos);
      r.add_term(f, c);
    }
    return r;
  }

  // Multiply by powers of the variable at `pos` so every term reaches total
  // degree `deg` (classical homogenization with respect to that variable).
  MPoly homogenize_with(int pos, int deg) const {
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
      int gap = deg - total_degree(e);
      if (gap < 0) throw std::domain_error("MPoly::homogenize_with: degree too small");
      Exp f = e;
      f[pos] += gap;
      r.terms_.emplace(f, c);
    }
    return r;
  }

  // content * primitive_part() == *this, primitive part has coprime integer
  // coefficients and positive leading coefficient.
  Rat content() const {
    if (terms_.empty()) return Rat(0);
    Rat::Int num_gcd(0), den_lcm(1);
    for (const auto& [e, c] : terms_) {
      num_gcd = boost::multiprecision::gcd(num_gcd,
                                           c.num() < 0 ? Rat::Int(-c.num()) : c.num());
      den_lcm = boost::multiprecision::lcm(den_lcm, c.den());
    }
    Rat content(num_gcd, den_lcm);
    if (leading_coeff().sign() < 0) content = -content;
    return content;
  }
  MPoly primitive_part() const {
    if (terms_.empty()) return *this;
    Rat c = content();
    MPoly r(nvars_);
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k / c);
    return r;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rat a = c;
      if (first) {
        if (a.sign() < 0) {
          out += "-";
          a = -a;
        }
      } else {
        out += a.sign() < 0 ? " - " : " + ";
        if (a.sign() < 0) a = -a;
      }
      first = false;
      std::string mono;
      for (int i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names.at(i);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty()) {
        out += a.str();
      } else {
        if (!a.is_one()) out += a.str() + "*";
        out += mono;
      }
    }
    return out;
  }

private:
  void check_compat(const MPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("MPoly: variable count mismatch");
  }

  int nvars_;
  Terms terms_;
};

// ---------------------------------------------------------------------------
// Exact division and GCD.

// Exact multivariate division; returns nullopt when b does not divide a.
inline std::optional<MPoly> exact_divide(const MPoly& a, const MPoly& b) {
  if (b.is_zero()) return std::nullopt;
  MPoly rem = a;
  MPoly quot(a.nvars());
  const Exp& lb = b.leading_exp();
  const Rat& cb = b.leading_coeff();
  while (!rem.is_zero()) {
    Exp la = rem.leading_exp();
    Exp q(la.size());
    for (size_t i = 0; i < la.size(); ++i) {
      q[i] = la[i] - lb[i];
      if (q[i] < 0) return std::nullopt;
    }
    MPoly t = MPoly::monomial(a.nvars(), q, rem.leading_coeff() / cb);
    quot += t;
    rem -= t * b;
  }
  return quot;
}

inline bool divides(const MPoly& b, const MPoly& a) {
  return exact_divide(a, b).has_value();
}

namespace detail {

// View of a polynomial as univariate in `var` with MPoly coefficients.
inline std::map<int, MPoly> as_univar(const MPoly& p, int var) {
  std::map<int, MPoly> out;
  for (const auto& [e, c] : p.terms()) {
    Exp f = e;
    int k = f[var];
    f[var] = 0;
    auto it = out.find(k);
    if (it == out.end()) it = out.emplace(k, MPoly(p.nvars())).first;
    it->second.add_term(f, c);
  }
  return out;
}

inline MPoly from_univar(const std::map<int, MPoly>& u, int var, int nvars) {
  MPoly r(nvars);
  MPoly x = MPoly::variable(nvars, var);
  for (const auto& [k, c] : u) r += c * x.pow(k);
  return r;
}

// Pseudo-remainder of a by b in variable `var`.
inline MPoly pseudo_rem(MPoly a, const MPoly& b, int var) {
  int db = b.degree_in(var);
  auto bu = as_univar(b, var);
  MPoly lead_b = bu.rbegin()->second;
  MPoly x = MPoly::variable(a.nvars(), var);
  int da = a.degree_in(var);
  int steps = da - db + 1;
  for (int s = 0; s < steps && !a.is_zero(); ++s) {
    da = a.degree_in(var);
    if (da < db) break;
    auto au = as_univar(a, var);
    MPoly lead_a = au.rbegin()->second;
    a = lead_b * a - lead_a * x.pow(da - db) * b;
  }
  return a;
}

}  // namespace detail

MPoly poly_gcd(const MPoly& a, const MPoly& b);

namespace detail {

// Content of p with respect to variable `var` (gcd of the univariate
// coefficients, itself a polynomial in the remaining variables).
inline MPoly content_wrt(const MPoly& p, int var) {
  auto u = as_univar(p, var);
  MPoly g(p.nvars());
  for (const auto& [k, c] : u) g = poly_gcd(g, c);
  return g;
}

}  // namespace detail

// GCD over Q[x_1..x_n], normalized to a primitive integer polynomial with
// positive leading coefficient (so gcd of constants is 1). Primitive PRS.
inline MPoly poly_gcd(const MPoly& a, const MPoly& b) {
  if (a.is_zero()) return b.is_zero() ? b : b.primitive_part();
  if (b.is_zero()) return a.primitive_part();
  if (a.is_constant() || b.is_constant())
    return MPoly::constant(a.nvars(), Rat(1));

  // Pick the first variable appearing in either polynomial.
  int var = -1;
  for (int i = 0; i < a.nvars() && var < 0; ++i)
    if (a.degree_in(i) > 0 || b.degree_in(i) > 0) var = i;

  MPoly ca = detail::content_wrt(a, var);
  MPoly cb = detail::content_wrt(b, var);
  MPoly cg = poly_gcd(ca, cb);

  MPoly pa = *exact_divide(a, ca);
  MPoly pb = *exact_divide(b, cb);

  // Primitive PRS in `var`.
  MPoly u = pa, v = pb;
  if (u.degree_in(var) < v.degree_in(var)) std::swap(u, v);
  while (!v.is_zero() && v.degree_in(var) > 0) {
    MPoly r = detail::pseudo_rem(u, v, var);
    u = v;
    if (r.is_zero()) {
      v = r;
    } else {
      MPoly c = detail::content_wrt(r, var);
      v = *exact_divide(r, c);
      v = v.primitive_part();
    }
  }
  MPoly g = v.is_zero() ? u : MPoly::constant(a.nvars(), Rat(1));
  return (cg * g).primitive_part();
}

// ---------------------------------------------------------------------------
// Bounded irreducible-factor extraction: monomial parts, rational-root linear
// factors of univariate polynomials, and squarefree pieces otherwise. This is
// a deliberately bounded helper used by the Darboux-style integrating-factor
// search; it never claims completeness.
inline std::vector<MPoly> bounded_factors(const MPoly& p_in) {
  std::vector<MPoly> out;
  if (p_in.is_zero() || p_in.is_constant()) return out;
  MPoly p = p_in.primitive_part();

  // Strip variable factors.
  for (int i = 0; i < p.nvars(); ++i) {
    MPoly x = MPoly::variable(p.nvars(), i);
    bool took = false;
    while (true) {
      auto q = exact_divide(p, x);
      if (!q) break;
      p = *q;
      took = true;
    }
    if (took) out.push_back(x);
  }
  if (p.is_constant()) return out;

  // Squarefree part.
  for (int i = 0; i < p.nvars(); ++i) {
    MPoly d = p.derivative(i);
    if (d.is_zero()) continue;
    MPoly g = poly_gcd(p, d);
    if (!g.is_constant()) p = *exact_divide(p, g);
  }
  p = p.primitive_part();

  // Univariate in a single variable: peel off rational-root linear factors.
  int uses = 0, uvar = -1;
  for (int i = 0; i < p.nvars(); ++i)
    if (p.degree_in(i) > 0) {
      ++uses;
      uvar = i;
    }
  if (uses == 1) {
    auto u = detail::as_univar(p, uvar);
    Rat::Int lead = u.rbegin()->second.constant_value().num();
    Rat::Int tail = u.begin()->first == 0 ? u.begin()->second.constant_value().num()
                                          : Rat::Int(1);
    auto divisors = [](Rat::Int n) {
      std::vector<Rat::Int> ds;
      if (n < 0) n = -n;
      for (Rat::Int d = 1; d * d <= n; ++d)
        if (n % d == 0) {
          ds.push_back(d);
          ds.push_back(n / d);
        }
      if (ds.empty()) ds.push_back(1);
      return ds;
    };
    for (const auto& pn : divisors(tail))
      for (const auto& pd : divisors(lead))
        for (int s : {1, -1}) {
          Rat root(s * pn, pd);
          MPoly lin = MPoly::variable(p.nvars(), uvar) -
                      MPoly::constant(p.nvars(), root);
          while (true) {
            auto q = exact_divide(p, lin);
            if (!q) break;
            p = *q;
            bool seen = false;
            for (const auto& f : out) seen = seen || f == lin;
            if (!seen) out.push_back(lin);
          }
          if (p.is_constant()) return out;
        }
  }
  if (!p.is_constant()) out.push_back(p.primitive_part());
  return out;
}

}  // namespace fol

#endif
