#ifndef FOL_DFORM_HPP
#define FOL_DFORM_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fol/quadcover.hpp"
#include "fol/ratfun.hpp"

namespace fol {

// Strictly increasing index tuple labelling a basis k-form dz_{i1}^...^dz_{ik}.
using IndexTuple = std::vector<int>;

namespace detail {

// Merge an extra index into a sorted tuple; returns the sign of the
// permutation, or 0 if the index already occurs.
inline int merge_index(IndexTuple& t, int i) {
  int pos = 0;
  while (pos < (int)t.size() && t[pos] < i) ++pos;
  if (pos < (int)t.size() && t[pos] == i) return 0;
  t.insert(t.begin() + pos, i);
  return (pos % 2 == 0) ? 1 : -1;
}

// Concatenate two sorted tuples; sign of the shuffle, or 0 on collision.
inline int merge_tuples(const IndexTuple& a, const IndexTuple& b, IndexTuple& out) {
  out = a;
  int sign = 1;
  // Insert b's entries left to right; b[j] hops over every larger element
  // already placed, and the later b-entries are still to its right.
  for (size_t j = 0; j < b.size(); ++j) {
    int pos = 0;
    while (pos < (int)out.size() && out[pos] < b[j]) ++pos;
    if (pos < (int)out.size() && out[pos] == b[j]) return 0;
    int hops = (int)out.size() - pos;
    if (hops % 2) sign = -sign;
    out.insert(out.begin() + pos, b[j]);
  }
  return sign;
}

}  // namespace detail

// Differential k-form with coefficients in a ring R (RatFun or QuadElem).
// R must provide +, -, *, unary -, is_zero(), derivative(int).
template <class R>
class DForm {
public:
  using Coeffs = std::map<IndexTuple, R>;

  DForm() : deg_(0), nvars_(0) {}
  DForm(int deg, int nvars, R zero)
      : deg_(deg), nvars_(nvars), zero_(std::move(zero)) {}

  int deg() const { return deg_; }
  int nvars() const { return nvars_; }
  const R& zero_elem() const { return zero_; }
  const Coeffs& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  const R& coeff(const IndexTuple& t) const {
    auto it = coeffs_.find(t);
    return it == coeffs_.end() ? zero_ : it->second;
  }

  void add_term(const IndexTuple& t, const R& c) {
    if ((int)t.size() != deg_) throw std::invalid_argument("DForm: tuple size mismatch");
    for (size_t i = 0; i + 1 < t.size(); ++i)
      if (t[i] >= t[i + 1]) throw std::invalid_argument("DForm: tuple not increasing");
    if (c.is_zero()) return;
    auto it = coeffs_.find(t);
    if (it == coeffs_.end()) {
      coeffs_.emplace(t, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  friend DForm operator+(const DForm& a, const DForm& b) {
    a.check(b);
    DForm r = a;
    for (const auto& [t, c] : b.coeffs_) r.add_term(t, c);
    return r;
  }
  friend DForm operator-(const DForm& a, const DForm& b) {
    a.check(b);
    DForm r = a;
    for (const auto& [t, c] : b.coeffs_) r.add_term(t, -c);
    return r;
  }
  DForm operator-() const {
    DForm r(deg_, nvars_, zero_);
    for (const auto& [t, c] : coeffs_) r.coeffs_.emplace(t, -c);
    return r;
  }
  friend DForm operator*(const R& f, const DForm& a) {
    DForm r(a.deg_, a.nvars_, a.zero_);
    for (const auto& [t, c] : a.coeffs_) r.add_term(t, f * c);
    return r;
  }
  friend DForm operator*(const Rat& k, const DForm& a) {
    DForm r(a.deg_, a.nvars_, a.zero_);
    for (const auto& [t, c] : a.coeffs_) r.add_term(t, k * c);
    return r;
  }
  DForm& operator+=(const DForm& o) { return *this = *this + o; }
  DForm& operator-=(const DForm& o) { return *this = *this - o; }

  friend bool operator==(const DForm& a, const DForm& b) {
    return a.deg_ == b.deg_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const DForm& a, const DForm& b) { return !(a == b); }

  std::string str(const std::vector<std::string>& names) const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [t, c] : coeffs_) {
      if (!out.empty()) out += " + ";
      out += "(" + c.str(names) + ")";
      for (int i : t) out += "*d" + names.at(i);
    }
    return out;
  }

private:
  void check(const DForm& o) const {
    if (deg_ != o.deg_ || nvars_ != o.nvars_)
      throw std::invalid_argument("DForm: shape mismatch");
  }

  int deg_, nvars_;
  R zero_;
  Coeffs coeffs_;
};

template <class R>
DForm<R> wedge(const DForm<R>& a, const DForm<R>& b) {
  DForm<R> r(a.deg() + b.deg(), a.nvars(), a.zero_elem());
  for (const auto& [ta, ca] : a.coeffs())
    for (const auto& [tb, cb] : b.coeffs()) {
      IndexTuple t;
      int sign = detail::merge_tuples(ta, tb, t);
      if (sign == 0) continue;
      R c = ca * cb;
      if (sign < 0) c = -c;
      r.add_term(t, c);
    }
  return r;
}

// Exterior derivative; coefficients differentiate via R::derivative, which on
// quadratic-cover elements already applies the chain rule to the generator.
template <class R>
DForm<R> exterior_d(const DForm<R>& w) {
  DForm<R> r(w.deg() + 1, w.nvars(), w.zero_elem());
  for (const auto& [t, c] : w.coeffs())
    for (int v = 0; v < w.nvars(); ++v) {
      R dc = c.derivative(v);
      if (dc.is_zero()) continue;
      IndexTuple u = t;
      int sign = detail::merge_index(u, v);
      if (sign == 0) continue;
      r.add_term(u, sign < 0 ? R(-dc) : dc);
    }
  return r;
}

// Vector field: component per variable.
template <class R>
using VField = std::vector<R>;

template <class R>
DForm<R> interior(const VField<R>& X, const DForm<R>& w) {
  if (w.deg() == 0) return DForm<R>(0, w.nvars(), w.zero_elem());
  DForm<R> r(w.deg() - 1, w.nvars(), w.zero_elem());
  for (const auto& [t, c] : w.coeffs())
    for (size_t j = 0; j < t.size(); ++j) {
      const R& xc = X.at(t[j]);
      if (xc.is_zero()) continue;
      IndexTuple u = t;
      u.erase(u.begin() + j);
      R term = xc * c;
      if (j % 2) term = -term;
      r.add_term(u, term);
    }
  return r;
}

template <class R>
DForm<R> lie_derivative(const VField<R>& X, const DForm<R>& w) {
  return interior(X, exterior_d(w)) + exterior_d(interior(X, w));
}

// ---------------------------------------------------------------------------
// Pullbacks.

// Rational map: target coordinate functions expressed in source variables.
struct RationalMap {
  int src_nvars = 0;
  std::vector<RatFun> comps;  // one per target variable, each in src vars

  RationalMap() = default;
  RationalMap(int src, std::vector<RatFun> c) : src_nvars(src), comps(std::move(c)) {}
  static RationalMap identity(int n) {
    std::vector<RatFun> c;
    for (int i = 0; i < n; ++i) c.push_back(RatFun::variable(n, i));
    return RationalMap(n, std::move(c));
  }
};

inline DForm<RatFun> pullback(const DForm<RatFun>& w, const RationalMap& phi) {
  if ((int)phi.comps.size() != w.nvars())
    throw std::invalid_argument("pullback: arity mismatch");
  int m = phi.src_nvars;
  DForm<RatFun> r(w.deg(), m, RatFun(m));
  // differentials of the components
  std::vector<std::vector<RatFun>> dphi(phi.comps.size());
  for (size_t i = 0; i < phi.comps.size(); ++i)
    for (int j = 0; j < m; ++j) dphi[i].push_back(phi.comps[i].derivative(j));
  for (const auto& [t, c] : w.coeffs()) {
    RatFun cc = c.substitute(phi.comps);
    if (cc.is_zero()) continue;
    // expand d(phi_{t1}) ^ ... ^ d(phi_{tk})
    std::vector<std::pair<IndexTuple, RatFun>> acc = {{IndexTuple{}, cc}};
    for (int idx : t) {
      std::vector<std::pair<IndexTuple, RatFun>> next;
      for (const auto& [tp, cp] : acc)
        for (int j = 0; j < m; ++j) {
          if (dphi[idx][j].is_zero()) continue;
          IndexTuple u;
          int sign = detail::merge_tuples(tp, IndexTuple{j}, u);
          if (sign == 0) continue;
          RatFun nc = cp * dphi[idx][j];
          next.emplace_back(u, sign < 0 ? -nc : nc);
        }
      acc = std::move(next);
    }
    for (const auto& [tp, cp] : acc) r.add_term(tp, cp);
  }
  return r;
}

// Pullback of a rational form into a quadratic cover ring: each target
// variable is sent to an element of the ring (typically the base variables to
// themselves and one distinguished variable to the generator or to an
// expression in it). Differentials use QuadElem::derivative, so dg is
// eliminated through the defining relation.
inline QuadElem quad_eval(const RatFun& f, std::shared_ptr<const QuadRing> ring,
                          const std::vector<QuadElem>& values) {
  auto eval_poly = [&](const MPoly& p) {
    QuadElem acc = QuadElem::from_base(ring, RatFun(ring->nvars));
    for (const auto& [e, c] : p.terms()) {
      QuadElem t = QuadElem::constant(ring, c);
      for (int i = 0; i < p.nvars(); ++i)
        for (int k = 0; k < e[i]; ++k) t *= values[i];
      acc += t;
    }
    return acc;
  };
  return eval_poly(f.num()) / eval_poly(f.den());
}

inline DForm<QuadElem> pullback_quad(const DForm<RatFun>& w,
                                     std::shared_ptr<const QuadRing> ring,
                                     const std::vector<QuadElem>& values) {
  if ((int)values.size() != w.nvars())
    throw std::invalid_argument("pullback_quad: arity mismatch");
  int m = ring->nvars;
  QuadElem zero = QuadElem::from_base(ring, RatFun(m));
  DForm<QuadElem> r(w.deg(), m, zero);
  std::vector<std::vector<QuadElem>> dval(values.size());
  for (size_t i = 0; i < values.size(); ++i)
    for (int j = 0; j < m; ++j) dval[i].push_back(values[i].derivative(j));
  for (const auto& [t, c] : w.coeffs()) {
    QuadElem cc = quad_eval(c, ring, values);
    if (cc.is_zero()) continue;
    std::vector<std::pair<IndexTuple, QuadElem>> acc = {{IndexTuple{}, cc}};
    for (int idx : t) {
      std::vector<std::pair<IndexTuple, QuadElem>> next;
      for (const auto& [tp, cp] : acc)
        for (int j = 0; j < m; ++j) {
          if (dval[idx][j].is_zero()) continue;
          IndexTuple u;
          int sign = detail::merge_tuples(tp, IndexTuple{j}, u);
          if (sign == 0) continue;
          QuadElem nc = cp * dval[idx][j];
          next.emplace_back(u, sign < 0 ? -nc : nc);
        }
      acc = std::move(next);
    }
    for (const auto& [tp, cp] : acc) r.add_term(tp, cp);
  }
  return r;
}

// Pull a form on (base vars..., x) back to the double cover where x becomes
// the ring generator.
inline DForm<QuadElem> cover_pullback(const DForm<RatFun>& w, int xvar,
                                      std::shared_ptr<const QuadRing> ring) {
  int n = ring->nvars;
  if (w.nvars() != n + 1)
    throw std::invalid_argument("cover_pullback: expected one extra variable");
  std::vector<QuadElem> values;
  for (int i = 0; i < w.nvars(); ++i) {
    if (i == xvar) {
      values.push_back(QuadElem::generator(ring));
    } else {
      int base = i < xvar ? i : i - 1;
      values.push_back(QuadElem::from_base(ring, RatFun::variable(n, base)));
    }
  }
  return pullback_quad(w, ring, values);
}

// If a = f * b for a single ring element f, return f.
template <class R>
std::optional<R> form_divide(const DForm<R>& a, const DForm<R>& b) {
  if (b.is_zero()) throw std::domain_error("form_divide: zero divisor");
  const auto& [t0, c0] = *b.coeffs().begin();
  const R& a0 = a.coeff(t0);
  R f = a.zero_elem();
  if constexpr (std::is_same_v<R, RatFun>) {
    f = a0 / c0;
  } else {
    f = a0 * c0.inverse();
  }
  if ((f * b) == a) return f;
  return std::nullopt;
}

}  // namespace fol

#endif
