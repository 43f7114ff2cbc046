#ifndef FOL_FOLIATION_HPP
#define FOL_FOLIATION_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fol/dform.hpp"

namespace fol {

// Thrown when an operation requires a specific foliation degree.
struct DegreeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Basic predicates on 1-forms with polynomial coefficients.

inline bool is_polynomial_form(const DForm<RatFun>& w) {
  for (const auto& [t, c] : w.coeffs())
    if (!c.is_polynomial()) return false;
  return true;
}

// All coefficients homogeneous of one common degree; returns that degree.
inline std::optional<int> homogeneous_coeff_degree(const DForm<RatFun>& w) {
  if (w.is_zero()) return std::nullopt;
  int d = -2;
  for (const auto& [t, c] : w.coeffs()) {
    if (!c.is_polynomial()) return std::nullopt;
    MPoly p = c.num();
    if (!p.is_homogeneous()) return std::nullopt;
    if (d == -2)
      d = p.degree();
    else if (p.degree() != d)
      return std::nullopt;
  }
  return d;
}

// Radial (Euler) contraction i_R with R = sum z_i d/dz_i.
inline RatFun radial_contraction(const DForm<RatFun>& w) {
  int n = w.nvars();
  VField<RatFun> R;
  for (int i = 0; i < n; ++i) R.push_back(RatFun::variable(n, i));
  DForm<RatFun> c = interior(R, w);
  return c.coeff({});
}

// Divide out the gcd of the (polynomial) coefficients.
inline DForm<RatFun> saturate(const DForm<RatFun>& w) {
  if (!is_polynomial_form(w))
    throw std::invalid_argument("saturate: coefficients must be polynomial");
  MPoly g(w.nvars());
  for (const auto& [t, c] : w.coeffs()) g = poly_gcd(g, c.num());
  if (g.is_zero() || g.is_constant()) return w;
  DForm<RatFun> r(w.deg(), w.nvars(), w.zero_elem());
  for (const auto& [t, c] : w.coeffs())
    r.add_term(t, RatFun(*exact_divide(c.num(), g), c.den()));
  return r;
}

template <class R>
bool is_integrable(const DForm<R>& w) {
  return wedge(w, exterior_d(w)).is_zero();
}

// ---------------------------------------------------------------------------
// Projective foliations. `omega` lives in n+1 homogeneous coordinates
// z_0..z_n; it must be polynomial, homogeneous, radially contracted to zero,
// integrable, and saturated. The foliation degree is (coefficient degree - 1).
struct Foliation {
  int n = 0;  // projective dimension; omega has n+1 variables
  DForm<RatFun> omega;

  int degree() const { return *homogeneous_coeff_degree(omega) - 1; }
};

struct ValidationReport {
  bool polynomial = false, homogeneous = false, radial = false,
       integrable = false, saturated = false;
  int coeff_degree = -1;
  bool ok() const {
    return polynomial && homogeneous && radial && integrable && saturated;
  }
};

inline ValidationReport validate(const DForm<RatFun>& w) {
  ValidationReport rep;
  rep.polynomial = is_polynomial_form(w);
  if (!rep.polynomial) return rep;
  auto d = homogeneous_coeff_degree(w);
  rep.homogeneous = d.has_value();
  if (!rep.homogeneous) return rep;
  rep.coeff_degree = *d;
  rep.radial = radial_contraction(w).is_zero();
  rep.integrable = is_integrable(w);
  MPoly g(w.nvars());
  for (const auto& [t, c] : w.coeffs()) g = poly_gcd(g, c.num());
  rep.saturated = g.is_constant();
  return rep;
}

inline Foliation make_foliation(const DForm<RatFun>& w) {
  ValidationReport rep = validate(w);
  if (!rep.ok()) throw std::invalid_argument("make_foliation: invalid 1-form");
  return Foliation{w.nvars() - 1, w};
}

// ---------------------------------------------------------------------------
// Affine charts. Chart c: set z_c = 1, drop dz_c; remaining variables keep
// their order (z_0,..,ẑ_c,..,z_n).

inline DForm<RatFun> affine_restrict(const DForm<RatFun>& w, int chart) {
  int n = w.nvars() - 1;
  DForm<RatFun> r(w.deg(), n, RatFun(n));
  for (const auto& [t, c] : w.coeffs()) {
    bool has_chart = false;
    IndexTuple u;
    for (int i : t) {
      if (i == chart) {
        has_chart = true;
        break;
      }
      u.push_back(i < chart ? i : i - 1);
    }
    if (has_chart) continue;
    RatFun cc = RatFun(c.num().drop_var_at_one(chart), c.den().drop_var_at_one(chart));
    r.add_term(u, cc);
  }
  return r;
}

// Inverse of affine_restrict for a degree-d foliation: homogenize the chart
// coefficients to degree d+1 and recover the dz_chart coefficient from the
// radial relation i_R(omega) = 0. Requires each affine coefficient to have
// degree <= d+1 and the radial recovery to divide exactly.
inline DForm<RatFun> homogenize_form(const DForm<RatFun>& wa, int chart, int d) {
  if (!is_polynomial_form(wa))
    throw std::invalid_argument("homogenize_form: coefficients must be polynomial");
  int n = wa.nvars() + 1;
  DForm<RatFun> r(1, n, RatFun(n));
  MPoly radial(n);  // sum over i != chart of z_i * A~_i
  for (const auto& [t, c] : wa.coeffs()) {
    int i = t.at(0);
    int zi = i < chart ? i : i + 1;
    MPoly p = c.num().insert_var(chart);
    if (p.degree() > d + 1)
      throw std::invalid_argument("homogenize_form: coefficient degree too large");
    MPoly hp = (Rat(1) / c.den().constant_value()) * p.homogenize_with(chart, d + 1);
    r.add_term({zi}, RatFun(hp));
    radial += MPoly::variable(n, zi) * hp;
  }
  if (!radial.is_zero()) {
    auto q = exact_divide(-radial, MPoly::variable(n, chart));
    if (!q)
      throw std::invalid_argument("homogenize_form: radial part not divisible");
    r.add_term({chart}, RatFun(*q));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Local expansion at a point of an affine chart: translate the point to the
// origin and split the coefficients into homogeneous jets. For a 1-form
// sum A_i dz_i, alpha_s collects the degree-s homogeneous parts of the A_i.
struct AffineExpansion {
  int chart = 0;
  std::vector<Rat> point;              // in chart coordinates
  std::vector<DForm<RatFun>> alpha;    // alpha[s] has homogeneous degree-s coeffs
  int jet = -1;                        // smallest s with alpha[s] != 0

  const DForm<RatFun>& part(int s) const {
    static const DForm<RatFun> empty;
    return s < (int)alpha.size() ? alpha[s] : empty;
  }
};

inline AffineExpansion expand_at_point(const DForm<RatFun>& w_affine, int chart,
                                       const std::vector<Rat>& point) {
  int n = w_affine.nvars();
  if ((int)point.size() != n)
    throw std::invalid_argument("expand_at_point: bad point size");
  // translate z -> z + p
  std::vector<MPoly> shift;
  for (int i = 0; i < n; ++i)
    shift.push_back(MPoly::variable(n, i) + MPoly::constant(n, point[i]));
  AffineExpansion ex;
  ex.chart = chart;
  ex.point = point;
  int maxdeg = 0;
  DForm<RatFun> shifted(1, n, RatFun(n));
  for (const auto& [t, c] : w_affine.coeffs()) {
    if (!c.is_polynomial())
      throw std::invalid_argument("expand_at_point: coefficients must be polynomial");
    MPoly p = (Rat(1) / c.den().constant_value()) * c.num().substitute(shift);
    shifted.add_term(t, RatFun(p));
    maxdeg = std::max(maxdeg, p.degree());
  }
  ex.alpha.assign(maxdeg + 1, DForm<RatFun>(1, n, RatFun(n)));
  for (const auto& [t, c] : shifted.coeffs())
    for (int s = 0; s <= maxdeg; ++s) {
      MPoly part = c.num().homogeneous_part(s);
      if (!part.is_zero()) ex.alpha[s].add_term(t, RatFun(part));
    }
  for (int s = 0; s <= maxdeg; ++s)
    if (!ex.alpha[s].is_zero()) {
      ex.jet = s;
      break;
    }
  return ex;
}

// Jet order of a foliation at a projective point given in a chart.
inline int jet_order(const Foliation& F, int chart, const std::vector<Rat>& point) {
  return expand_at_point(affine_restrict(F.omega, chart), chart, point).jet;
}

// Expansion entry point for the degree-4 machinery: checks the degree and
// returns the jets alpha_2..alpha_5 (alpha_0 = alpha_1 = 0 is required).
inline AffineExpansion expand_degree4(const Foliation& F, int chart,
                                      const std::vector<Rat>& point) {
  if (F.degree() != 4)
    throw DegreeMismatch("expected a degree-4 foliation, got degree " +
                         std::to_string(F.degree()));
  AffineExpansion ex =
      expand_at_point(affine_restrict(F.omega, chart), chart, point);
  if (ex.jet >= 0 && ex.jet < 2)
    throw std::invalid_argument("expand_degree4: point has jet order < 2");
  return ex;
}

// Scan a small rational grid for a singular point of jet order >= 2.
// Coordinates range over {0, ±1/2, ±1, ±3/2, ±2}. Returns (chart, point).
inline std::optional<std::pair<int, std::vector<Rat>>> find_jet2_witness(
    const Foliation& F) {
  std::vector<Rat> grid;
  for (int num = -4; num <= 4; ++num) grid.push_back(Rat(num, 2));
  int n = F.n;
  for (int chart = 0; chart <= n; ++chart) {
    DForm<RatFun> wa = affine_restrict(F.omega, chart);
    std::vector<int> idx(n, 0);
    while (true) {
      std::vector<Rat> pt;
      for (int i = 0; i < n; ++i) pt.push_back(grid[idx[i]]);
      AffineExpansion ex = expand_at_point(wa, chart, pt);
      if (ex.jet >= 2) return std::make_pair(chart, pt);
      int i = 0;
      while (i < n && ++idx[i] == (int)grid.size()) idx[i++] = 0;
      if (i == n) break;
    }
  }
  return std::nullopt;
}

}  // namespace fol

#endif
