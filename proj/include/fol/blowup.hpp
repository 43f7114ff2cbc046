#ifndef FOL_BLOWUP_HPP
#define FOL_BLOWUP_HPP

#include <stdexcept>
#include <vector>

#include "fol/foliation.hpp"

namespace fol {

// Data extracted from one chart of the blow-up at a jet-order-2 singular
// point of a degree-4 germ alpha_2 + alpha_3 + alpha_4 + alpha_5.
//
// In the chart z_i = x*tau_i (i != dir), z_dir = x, the pulled-back germ is
//   sigma^*(alpha) = x^2 * eta,
//   eta = x*theta2 + x^2*theta3 + x^3*theta4 + x^4*theta5
//         + (F3 + x*F4 + x^2*F5) dx,
// with theta_j 1-forms and F_j functions of tau alone. The radial part of
// alpha_5 must vanish (otherwise the germ is not a degree-4 jet).
struct BlowupChartData {
  int m = 0;                      // number of tau variables
  int dir = 0;                    // blow-up direction (index among the n vars)
  std::vector<DForm<RatFun>> theta;  // theta[j] for j = 2..5, indexed j-2
  std::vector<RatFun> F;             // F[j] for j = 3..5, indexed j-3

  const DForm<RatFun>& th(int j) const { return theta.at(j - 2); }
  const RatFun& f(int j) const { return F.at(j - 3); }
};

// Extract the blow-up chart data directly from the jets. Expects alpha[s]
// (s = 2..5) as produced by expand_at_point, with the point already at the
// origin of an n-variable affine chart.
inline BlowupChartData blowup_chart(const AffineExpansion& ex, int dir) {
  int n = ex.alpha.empty() ? 0 : ex.alpha[2].nvars();
  if (n == 0)
    for (const auto& a : ex.alpha) n = std::max(n, a.nvars());
  if (ex.jet < 2)
    throw std::invalid_argument("blowup_chart: jet order must be >= 2");
  int m = n - 1;

  // Substitution z_i -> tau_i (i != dir), z_dir -> 1, into the coefficient
  // polynomials, landing in the tau variables.
  std::vector<RatFun> subst;
  for (int i = 0; i < n; ++i) {
    if (i == dir)
      subst.push_back(RatFun::constant(m, Rat(1)));
    else
      subst.push_back(RatFun::variable(m, i < dir ? i : i - 1));
  }

  BlowupChartData b;
  b.m = m;
  b.dir = dir;
  b.theta.assign(4, DForm<RatFun>(1, m, RatFun(m)));
  b.F.assign(3, RatFun(m));

  RatFun f6(m);
  for (int j = 2; j <= 5; ++j) {
    const DForm<RatFun>& aj = ex.part(j);
    RatFun fj(m);  // i_R(alpha_j) restricted: sum tau_i P_ji + P_j,dir
    for (const auto& [t, c] : aj.coeffs()) {
      int i = t.at(0);
      RatFun p = c.substitute(subst);
      if (i == dir) {
        fj += p;
      } else {
        int ti = i < dir ? i : i - 1;
        b.theta[j - 2].add_term({ti}, p);
        fj += RatFun::variable(m, ti) * p;
      }
    }
    if (j <= 4)
      b.F[j - 2] = fj;  // this is F_{j+1}
    else
      f6 = fj;
  }
  if (!f6.is_zero())
    throw std::invalid_argument(
        "blowup_chart: radial part of the top jet does not vanish");
  return b;
}

// Reassemble eta = x*theta2 + ... + (F3 + x*F4 + x^2*F5) dx as a 1-form in
// (tau_1..tau_m, x), with x as the last variable.
inline DForm<RatFun> chart_form(const BlowupChartData& b) {
  int n = b.m + 1;
  DForm<RatFun> eta(1, n, RatFun(n));
  RatFun x = RatFun::variable(n, b.m);
  // lift a tau-side function into (tau, x)
  auto lift = [&](const RatFun& f) {
    std::vector<RatFun> vals;
    for (int i = 0; i < b.m; ++i) vals.push_back(RatFun::variable(n, i));
    return f.substitute(vals);
  };
  for (int j = 2; j <= 5; ++j)
    for (const auto& [t, c] : b.th(j).coeffs()) {
      RatFun lifted = lift(c);
      eta.add_term({t.at(0)}, x.pow(j - 1) * lifted);
    }
  eta.add_term({b.m}, lift(b.f(3)) + x * lift(b.f(4)) + x.pow(2) * lift(b.f(5)));
  return eta;
}

// The pullback oracle: sigma(tau, x) = (x*tau_1, .., x, .., x*tau_m) as a map
// into the original chart variables; used in tests to check that
// sigma^*(alpha) = x^2 * chart_form(b).
inline RationalMap blowdown_map(int n, int dir) {
  int m = n - 1;
  int src = m + 1;  // (tau_1..tau_m, x)
  RatFun x = RatFun::variable(src, m);
  std::vector<RatFun> comps;
  for (int i = 0; i < n; ++i) {
    if (i == dir)
      comps.push_back(x);
    else
      comps.push_back(x * RatFun::variable(src, i < dir ? i : i - 1));
  }
  return RationalMap(src, comps);
}

// Case tag from the vanishing pattern of (F3, F4, F5).
inline int case_tag(const BlowupChartData& b) {
  bool f3 = !b.f(3).is_zero(), f4 = !b.f(4).is_zero(), f5 = !b.f(5).is_zero();
  if (!f3 && !f4 && !f5) return 1;
  if (f3 && !f4 && !f5) return 2;
  if (!f3 && !f4 && f5) return 3;
  if (!f3 && f4) return 4;
  if (f3 && f4 && !f5) return 5;
  if (f3 && !f4 && f5) return 6;
  return 7;  // f3 && f4 && f5
}

}  // namespace fol

#endif
