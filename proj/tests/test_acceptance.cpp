// Acceptance suite: one pass/fail line per criterion.
//
//   1. exterior-calculus identities on randomized inputs
//   2. blow-up fidelity (sigma^* omega = x^2 eta, radial contraction shape)
//   3. symbolic oracles for the per-case coefficient transformations
//   4. Riccati projective triples on parametric families + mutation rejection
//   5. descending Lie-derivative sequences of engineered lengths 0..4
//   6. end-to-end classification, one fixture per vanishing-pattern row
//   7. worked saturation/degree examples
//   8. command-line round trip, determinism and exit codes

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fol/certdoc.hpp"
#include "fol/classifier.hpp"
#include "fol/parse.hpp"

using namespace fol;

namespace {

int g_failures = 0;

bool check(bool ok, const std::string& msg) {
  if (!ok) {
    std::cout << "    FAIL: " << msg << "\n";
    ++g_failures;
  }
  return ok;
}

RatFun rv(int n, int i) { return RatFun::variable(n, i); }
RatFun rc(int n, long long c) { return RatFun::constant(n, Rat(c)); }

DForm<RatFun> zero_form(int n) { return DForm<RatFun>(1, n, RatFun(n)); }

// h = t1 + t2^2 over the two tau variables.
RatFun tau_h() { return rv(2, 0) + rv(2, 1) * rv(2, 1); }
DForm<RatFun> tau_dh() { return d_fun(tau_h()); }
DForm<RatFun> zero2() { return zero_form(2); }

// Reverse the blow-up bookkeeping: from tau-side data (theta_2..theta_5,
// F_3..F_5 over tau_1, tau_2) build the affine germ over (z_1, z_2, z_3)
// whose expansion at the origin reproduces exactly that data, with blow-up
// direction z_3.
DForm<RatFun> germ_from_data(const std::array<DForm<RatFun>, 4>& theta,
                             const std::array<RatFun, 3>& F) {
  int m = 2, n = 3, dir = 2;
  DForm<RatFun> germ(1, n, RatFun(n));
  for (int j = 2; j <= 5; ++j) {
    const DForm<RatFun>& th = theta[j - 2];
    RatFun fj = j <= 4 ? F[j - 2] : RatFun(m);
    RatFun q = fj;  // radial remainder F_{j+1} - sum tau_i c_i
    for (const auto& [t, c] : th.coeffs()) q -= rv(m, t[0]) * c;
    auto hom = [&](const RatFun& c) {
      if (!c.is_polynomial())
        throw std::logic_error("germ_from_data: non-polynomial coefficient");
      Rat d = c.den().constant_value();
      MPoly p = (Rat(1) / d) * c.num().insert_var(dir);
      return RatFun(p.homogenize_with(dir, j));
    };
    for (const auto& [t, c] : th.coeffs()) germ.add_term({t[0]}, hom(c));
    RatFun hq = hom(q);
    if (!hq.is_zero()) germ.add_term({dir}, hq);
  }
  return germ;
}

Foliation foliation_from_data(const std::array<DForm<RatFun>, 4>& theta,
                              const std::array<RatFun, 3>& F) {
  return make_foliation(homogenize_form(germ_from_data(theta, F), 0, 4));
}

ClassifyOptions at_origin() {
  ClassifyOptions o;
  o.chart = 0;
  o.point = std::vector<Rat>{Rat(0), Rat(0), Rat(0)};
  return o;
}

DForm<RatFun> quintic_pullback_germ() {
  int n = 3;
  MPoly z1 = MPoly::variable(n, 0), z2 = MPoly::variable(n, 1),
        z3 = MPoly::variable(n, 2);
  RatFun P(z1.pow(3) + z2.pow(3)), Q(z2.pow(3) + z3.pow(3));
  return P * d_fun(Q) + Rat(-1) * (Q * d_fun(P));
}

DForm<RatFun> cubic_chain_germ() {
  int n = 3;
  MPoly z2 = MPoly::variable(n, 1), z3 = MPoly::variable(n, 2);
  DForm<RatFun> w(1, n, RatFun(n));
  w.add_term({0}, RatFun(z3.pow(4)));
  w.add_term({1}, RatFun(Rat(3) * z2.pow(2) * z3));
  w.add_term({2}, RatFun(Rat(-3) * z2.pow(3)));
  return w;
}

DForm<RatFun> quartic_affine_germ() {
  int n = 3;
  MPoly z1 = MPoly::variable(n, 0), z2 = MPoly::variable(n, 1),
        z3 = MPoly::variable(n, 2);
  DForm<RatFun> w(1, n, RatFun(n));
  w.add_term({0}, RatFun(z3.pow(4)));
  w.add_term({1}, RatFun(z1.pow(2) * z2.pow(2) * z3));
  w.add_term({2}, RatFun(Rat(-1) * z1.pow(2) * z2.pow(3)));
  return w;
}

// ---------------------------------------------------------------------------
// Criterion 1: exterior-calculus identities on randomized inputs.

bool criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(11);
  auto rnd_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto rnd_poly = [&](int n, int maxdeg) {
    MPoly p(n);
    int terms = rnd_int(1, 4);
    for (int t = 0; t < terms; ++t) {
      MPoly mono = MPoly::constant(n, Rat(rnd_int(-6, 6), rnd_int(1, 3)));
      int budget = maxdeg;
      for (int i = 0; i < n; ++i) {
        int e = rnd_int(0, budget);
        budget -= e;
        mono = mono * MPoly::variable(n, i).pow(e);
      }
      p += mono;
    }
    return p;
  };
  auto rnd_1form = [&](int n, int maxdeg) {
    DForm<RatFun> w(1, n, RatFun(n));
    for (int i = 0; i < n; ++i) {
      MPoly p = rnd_poly(n, maxdeg);
      if (!p.is_zero()) w.add_term({i}, RatFun(p));
    }
    return w;
  };
  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    int n = rnd_int(2, 4);
    DForm<RatFun> a = rnd_1form(n, 4), b = rnd_1form(n, 4);
    RatFun f(rnd_poly(n, 4));
    DForm<RatFun> f0(0, n, RatFun(n));
    f0.add_term({}, f);

    // d o d = 0 on functions and 1-forms
    ok &= check(exterior_d(exterior_d(f0)).is_zero(), "d(df) != 0");
    ok &= check(exterior_d(exterior_d(a)).is_zero(), "d(da) != 0");

    // graded Leibniz: deg 0 ^ deg 1 and deg 1 ^ deg 1
    ok &= check(exterior_d(f * a) == wedge(d_fun(f), a) + f * exterior_d(a),
                "Leibniz (0,1) fails");
    ok &= check(exterior_d(wedge(a, b)) ==
                    wedge(exterior_d(a), b) + Rat(-1) * wedge(a, exterior_d(b)),
                "Leibniz (1,1) fails");

    // Cartan formula vs the component-wise Lie derivative
    VField<RatFun> X(n, RatFun(n));
    for (int i = 0; i < n; ++i) X[i] = RatFun(rnd_poly(n, 2));
    DForm<RatFun> lhs = lie_derivative(X, a);  // computed via d i_X + i_X d
    DForm<RatFun> rhs(1, n, RatFun(n));
    for (const auto& [t, c] : a.coeffs()) {
      RatFun xc(n);
      for (int j = 0; j < n; ++j) xc += X[j] * c.derivative(j);
      if (!xc.is_zero()) rhs.add_term(t, xc);
      rhs = rhs + c * d_fun(X[t[0]]);
    }
    ok &= check(lhs == rhs, "Cartan formula disagrees with direct derivative");

    // Euler field on a 1-form with homogeneous degree-j coefficients
    int j = rnd_int(0, 4);
    DForm<RatFun> hom(1, n, RatFun(n));
    for (int i = 0; i < n; ++i) {
      MPoly part = rnd_poly(n, j).homogeneous_part(j);
      if (!part.is_zero()) hom.add_term({i}, RatFun(part));
    }
    VField<RatFun> R(n, RatFun(n));
    for (int i = 0; i < n; ++i) R[i] = rv(n, i);
    ok &= check(lie_derivative(R, hom) == Rat(j + 1) * hom,
                "L_R on a degree-" + std::to_string(j) +
                    " form is not (j+1) times the form");
  }
  auto dt = std::chrono::duration_cast<std::chrono::seconds>(
      std::chrono::steady_clock::now() - t0);
  ok &= check(dt.count() < 60, "identity suite exceeded 60 seconds");
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 2: blow-up fidelity on randomized valid expansions.

bool criterion2() {
  std::mt19937 rng(22);
  auto rnd_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto rnd_tau_poly = [&](int maxdeg) {
    MPoly p(2);
    for (int t = rnd_int(1, 3); t > 0; --t) {
      MPoly mono = MPoly::constant(2, Rat(rnd_int(-5, 5)));
      int budget = maxdeg;
      for (int i = 0; i < 2; ++i) {
        int e = rnd_int(0, budget);
        budget -= e;
        mono = mono * MPoly::variable(2, i).pow(e);
      }
      p += mono;
    }
    return RatFun(p);
  };
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    std::array<DForm<RatFun>, 4> theta = {zero2(), zero2(), zero2(), zero2()};
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 2; ++i) {
        RatFun c = rnd_tau_poly(1);
        if (!c.is_zero()) theta[j].add_term({i}, c);
      }
    std::array<RatFun, 3> F = {rnd_tau_poly(2), rnd_tau_poly(2),
                               rnd_tau_poly(2)};
    DForm<RatFun> germ = germ_from_data(theta, F);
    AffineExpansion ex = expand_at_point(germ, 0, {Rat(0), Rat(0), Rat(0)});
    if (ex.jet < 2) continue;  // degenerate draw
    BlowupChartData b = blowup_chart(ex, 2);
    DForm<RatFun> eta = chart_form(b);

    // sigma^*(omega) = x^2 eta
    RationalMap sigma = blowdown_map(3, 2);
    RatFun x = rv(3, 2);
    ok &= check(pullback(germ, sigma) == (x * x) * eta,
                "sigma^* omega != x^2 eta");

    // i_R(omega)(x tau, x) = x^3 F3 + x^4 F4 + x^5 F5
    RatFun rad(3);
    for (const auto& [t, c] : germ.coeffs()) rad += rv(3, t[0]) * c;
    RatFun pulled = rad.substitute(sigma.comps);
    std::vector<RatFun> tau_vals = {rv(3, 0), rv(3, 1)};
    RatFun expect(3);
    for (int j = 3; j <= 5; ++j)
      expect += x.pow(j) * b.f(j).substitute(tau_vals);
    ok &= check(pulled == expect, "radial contraction shape fails");
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 3: symbolic oracles for the per-case coefficient lists.
//
// Base variables 0..6 stand for F3, F4, F5 and four inert potentials
// c2..c5 with theta_j := d c_j; variable 7 (and 8 where needed) are the
// fiber variables being transformed. Every identity below is checked as an
// exact equality of rational differential forms.

bool criterion3() {
  bool ok = true;

  {  // Case F4 = F5 = 0: eta / F3 = dx + sum x^j theta_{j+1} / F3.
    int N = 8;
    auto V = [&](int i) { return rv(N, i); };
    auto dv = [&](int i) {
      DForm<RatFun> w(1, N, RatFun(N));
      w.add_term({i}, rc(N, 1));
      return w;
    };
    RatFun F3 = V(0), x = V(7);
    auto th = [&](int j) { return dv(3 + (j - 2)); };
    DForm<RatFun> eta = F3 * dv(7);
    for (int j = 2; j <= 5; ++j) eta = eta + x.pow(j - 1) * th(j);
    DForm<RatFun> expect = dv(7);
    for (int j = 1; j <= 4; ++j)
      expect = expect + x.pow(j) * (F3.inverse() * th(j + 1));
    ok &= check(F3.inverse() * eta == expect,
                "normalized chart form (F4 = F5 = 0) disagrees");
  }

  {  // Case F3 = F4 = 0: -z^3 psi^*(eta / (x F5)) = dz + sum z^j beta_j
     // with beta_j = -theta_{5-j} / F5.
    int N = 8;
    auto V = [&](int i) { return rv(N, i); };
    auto dv = [&](int i) {
      DForm<RatFun> w(1, N, RatFun(N));
      w.add_term({i}, rc(N, 1));
      return w;
    };
    RatFun F5 = V(2), x = V(7);
    auto th = [&](int j) { return dv(3 + (j - 2)); };
    DForm<RatFun> eta = (x * x * F5) * dv(7);
    for (int j = 2; j <= 5; ++j) eta = eta + x.pow(j - 1) * th(j);
    DForm<RatFun> etat = (x * F5).inverse() * eta;
    std::vector<RatFun> comps;  // psi: x = 1/z
    for (int i = 0; i < 7; ++i) comps.push_back(V(i));
    RatFun z = V(7);
    comps.push_back(z.inverse());
    DForm<RatFun> zeta = (rc(N, -1) * z.pow(3)) * pullback(etat, RationalMap(N, comps));
    DForm<RatFun> expect = dv(7);
    for (int j = 0; j <= 3; ++j)
      expect = expect + z.pow(j) * (rc(N, -1) * F5.inverse() * th(5 - j));
    ok &= check(zeta == expect, "inverted chart list (F3 = F4 = 0) disagrees");
  }

  {  // Case F5 = 0: psi_t^*(eta_z) = F4^3 / ((1-t)^4 F3^2) * eta_t.
    int N = 8;
    auto V = [&](int i) { return rv(N, i); };
    auto dv = [&](int i) {
      DForm<RatFun> w(1, N, RatFun(N));
      w.add_term({i}, rc(N, 1));
      return w;
    };
    RatFun F3 = V(0), F4 = V(1);
    auto th = [&](int j) { return dv(3 + (j - 2)); };
    RatFun z = V(7);
    DForm<RatFun> eta_z = th(5) + z * th(4) + z.pow(2) * th(3) +
                          z.pow(3) * th(2) +
                          (rc(N, -1) * (z * F4 + z.pow(2) * F3)) * dv(7);
    std::vector<RatFun> comps;  // z = (F4/F3) t / (1 - t)
    for (int i = 0; i < 7; ++i) comps.push_back(V(i));
    RatFun t = V(7);
    comps.push_back((F4 * F3.inverse()) * t * (rc(N, 1) - t).inverse());
    DForm<RatFun> got = pullback(eta_z, RationalMap(N, comps));
    RatFun pref = F4.pow(3) * ((rc(N, 1) - t).pow(4) * F3.pow(2)).inverse();
    DForm<RatFun> eta_t = pref.inverse() * got;

    DForm<RatFun> dF3 = dv(0), dF4 = dv(1);
    RatFun r = F3.pow(2) * F4.pow(3).inverse();
    RatFun s = F3 * F4.pow(2).inverse();
    DForm<RatFun> b0 = r * th(5);
    DForm<RatFun> b1 = rc(N, -4) * r * th(5) + s * th(4);
    DForm<RatFun> b2 = rc(N, 6) * r * th(5) + rc(N, -3) * s * th(4) +
                       F4.inverse() * th(3) + rc(N, -1) * F4.inverse() * dF4 +
                       F3.inverse() * dF3;
    // The t^3 list carries the corrected log part dF4/F4 - dF3/F3 (the
    // remaining four lists are checked exactly as displayed).
    DForm<RatFun> b3 = rc(N, -4) * r * th(5) + rc(N, 3) * s * th(4) +
                       rc(N, -2) * F4.inverse() * th(3) + F4.inverse() * dF4 +
                       rc(N, -1) * F3.inverse() * dF3 + F3.inverse() * th(2);
    DForm<RatFun> b4 = r * th(5) + rc(N, -1) * s * th(4) +
                       F4.inverse() * th(3) + rc(N, -1) * F3.inverse() * th(2);
    DForm<RatFun> expect = b0 + t * b1 + t.pow(2) * b2 + t.pow(3) * b3 +
                           t.pow(4) * b4 + (rc(N, -1) * t) * dv(7);
    ok &= check(eta_t == expect, "quartic fiber list (F5 = 0) disagrees");
  }

  // The double-cover cases share the transformation z = (G/F5) t / (1-t)
  // applied to B0 + z B1 + z^2 B2 + (G + z F5) dz. The displayed lists are
  // the t^0..t^2 coefficients; the transformation also produces an exact
  // t^3 remainder -F5 B0/G^2 + B1/G - B2/F5 which vanishes precisely when
  // the form has content, so it is checked in closed form alongside.
  auto cover_case = [&](bool with_linear_part, const std::string& label) {
    int N = 9;  // F3 F4 F5 c2..c5, x, fiber
    auto V = [&](int i) { return rv(N, i); };
    auto dv = [&](int i) {
      DForm<RatFun> w(1, N, RatFun(N));
      w.add_term({i}, rc(N, 1));
      return w;
    };
    RatFun F3 = V(0), F4 = V(1), F5 = V(2), x = V(7), z = V(8);
    auto th = [&](int j) { return dv(3 + (j - 2)); };
    RatFun G = with_linear_part ? F3 + x * F4 : F3;
    DForm<RatFun> B0 = rc(N, 2) * x.pow(2) * th(2) + rc(N, 2) * x.pow(4) * th(4);
    DForm<RatFun> B1 = rc(N, 2) * x * th(3);
    DForm<RatFun> B2 = rc(N, 2) * x * th(5);
    DForm<RatFun> etat = B0 + z * B1 + z.pow(2) * B2 + (G + z * F5) * dv(8);
    std::vector<RatFun> comps;
    for (int i = 0; i < 8; ++i) comps.push_back(V(i));
    RatFun t = V(8);
    comps.push_back((G * F5.inverse()) * t * (rc(N, 1) - t).inverse());
    DForm<RatFun> got = pullback(etat, RationalMap(N, comps));
    RatFun pref = G.pow(2) * ((rc(N, 1) - t).pow(3) * F5).inverse();
    DForm<RatFun> lhs = pref.inverse() * got;

    DForm<RatFun> df0(0, N, RatFun(N));
    df0.add_term({}, G);
    DForm<RatFun> dG = exterior_d(df0);
    DForm<RatFun> dF5 = dv(2);
    RatFun r = F5 * G.pow(2).inverse();
    DForm<RatFun> b0p = r * B0;
    DForm<RatFun> b1p = rc(N, -3) * r * B0 + G.inverse() * B1 +
                        G.inverse() * dG + rc(N, -1) * F5.inverse() * dF5;
    DForm<RatFun> b2p = rc(N, 3) * r * B0 + rc(N, -2) * G.inverse() * B1 +
                        F5.inverse() * B2 + rc(N, -1) * G.inverse() * dG +
                        F5.inverse() * dF5;
    DForm<RatFun> rem = rc(N, -1) * r * B0 + G.inverse() * B1 +
                        rc(N, -1) * F5.inverse() * B2;
    DForm<RatFun> expect =
        b0p + t * b1p + t.pow(2) * b2p + t.pow(3) * rem + dv(8);
    return check(lhs == expect, "cover-case list (" + label + ") disagrees");
  };
  ok &= cover_case(false, "F4 = 0");
  ok &= cover_case(true, "general quadratic dx part");
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 4: Riccati triples on parametric families; mutations rejected.

bool criterion4() {
  std::mt19937 rng(44);
  auto rnd_rat = [&]() {
    return Rat(std::uniform_int_distribution<int>(1, 9)(rng),
               std::uniform_int_distribution<int>(1, 4)(rng));
  };
  bool ok = true;
  int m = 2;
  DForm<RatFun> dt1(1, m, RatFun(m)), dt2(1, m, RatFun(m));
  dt1.add_term({0}, rc(m, 1));
  dt2.add_term({1}, rc(m, 1));
  RatFun t1 = rv(m, 0), t2 = rv(m, 1);

  for (int trial = 0; trial < 10; ++trial) {
    // family A: beta0 = 0, beta1 = dt1/t1, beta2 = c * t1 dt2
    DForm<RatFun> a0 = zero2(), a1 = t1.inverse() * dt1,
                  a2 = RatFun::constant(m, rnd_rat()) * t1 * dt2;
    auto tri = riccati_triple(a0, a1, a2);
    ok &= check(verify_projective(tri[0], tri[1], tri[2]),
                "family A triple is not projective");

    // family B: beta0 = c * t2 dt1, beta1 = -dt2/t2, beta2 = 0
    DForm<RatFun> b0 = RatFun::constant(m, rnd_rat()) * t2 * dt1,
                  b1 = rc(m, -1) * t2.inverse() * dt2, b2 = zero2();
    auto trj = riccati_triple(b0, b1, b2);
    ok &= check(verify_projective(trj[0], trj[1], trj[2]),
                "family B triple is not projective");

    // single-form mutations of the inputs violate the structural system
    for (int slot = 0; slot < 3; ++slot) {
      std::array<DForm<RatFun>, 3> mut = {a0, a1, a2};
      mut[slot] = mut[slot] + t2 * dt1;  // non-closed perturbation
      bool rejected;
      try {
        auto bad = riccati_triple(mut[0], mut[1], mut[2]);
        rejected = !verify_projective(bad[0], bad[1], bad[2]);
      } catch (const StructuralSystemViolated&) {
        rejected = true;
      }
      ok &= check(rejected, "input mutation in slot " + std::to_string(slot) +
                                " was not rejected");
    }

    // single-form mutations of the output fail verify_projective
    for (int slot = 0; slot < 3; ++slot) {
      auto bad = tri;
      DForm<RatFun> pert(1, 3, RatFun(3));
      pert.add_term({0}, rv(3, 1));
      bad[slot] = bad[slot] + pert;
      ok &= check(!verify_projective(bad[0], bad[1], bad[2]),
                  "output mutation in slot " + std::to_string(slot) +
                      " passed verification");
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 5: engineered descending sequences of lengths 0..4.

bool criterion5() {
  bool ok = true;
  int N = 3;  // (t1, t2, x), fiber last
  DForm<RatFun> dx(1, N, RatFun(N));
  dx.add_term({2}, rc(N, 1));
  RatFun x = rv(N, 2);
  DForm<RatFun> dh(1, N, RatFun(N));  // d(t1 + t2^2) lifted
  dh.add_term({0}, rc(N, 1));
  dh.add_term({1}, Rat(2) * rv(N, 1));
  for (int k = 0; k <= 4; ++k) {
    DForm<RatFun> eta = dx;
    if (k > 0) eta = eta + x.pow(k) * dh;
    auto seq = gvs_compute(eta, 2);
    if (!check(seq.has_value(), "no sequence for exponent " + std::to_string(k)))
      return false;
    ok &= check(seq->terminated, "sequence " + std::to_string(k) +
                                     " did not terminate");
    ok &= check(seq->length() == k,
                "expected length " + std::to_string(k) + ", got " +
                    std::to_string(seq->length()));
    ok &= check(gvs_verify(*seq),
                "sequence " + std::to_string(k) + " fails the exact identity");
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 6: end-to-end classification, one fixture per case row.

bool criterion6() {
  bool ok = true;
  auto dh = tau_dh();
  auto expect = [&](const Foliation& F, const ClassifyOptions& o, int tag,
                    CertKind kind, const std::string& label) -> bool {
    try {
      Certificate c = classify(F, o);
      bool good = check(c.tag == tag, label + ": wrong case tag") &
                  check(c.kind == kind, label + ": wrong certificate kind") &
                  check(verify_certificate(c, F).ok,
                        label + ": certificate does not re-verify");
      return good;
    } catch (const std::exception& e) {
      return check(false, label + ": " + e.what());
    }
  };

  // case 1: top jet only -> pull-back by a linear projection
  Foliation F1 = make_foliation(homogenize_form(quintic_pullback_germ(), 0, 4));
  ok &= expect(F1, at_origin(), 1, CertKind::LinearPullback, "case 1");

  // case 2: first-integral family with a full Lie-derivative ladder
  RatFun w5 = rv(2, 0) + rv(2, 1).pow(5);
  Foliation F2 = foliation_from_data({dh, zero2(), zero2(), d_fun(w5)},
                                     {Rat(-3) * tau_h(), RatFun(2), RatFun(2)});
  ok &= expect(F2, at_origin(), 2, CertKind::FiniteGVS, "case 2");

  // case 3: affine and pure-projective variants
  Foliation F3a = make_foliation(homogenize_form(quartic_affine_germ(), 0, 4));
  ok &= expect(F3a, at_origin(), 3, CertKind::Affine, "case 3 (affine)");
  Foliation F3p = make_foliation(homogenize_form(cubic_chain_germ(), 0, 4));
  ok &= expect(F3p, at_origin(), 3, CertKind::PureProjective,
               "case 3 (projective)");

  // case 4
  Foliation F4 = foliation_from_data({dh, zero2(), zero2(), zero2()},
                                     {RatFun(2), rc(2, 1), tau_h()});
  ok &= expect(F4, at_origin(), 4, CertKind::FiniteGVS, "case 4");

  // case 5: closes projectively on the double cover
  Foliation F5 = foliation_from_data({Rat(-6) * dh, dh, Rat(4) * dh, dh},
                                     {rc(2, 1), rc(2, 1), RatFun(2)});
  {
    Certificate c5 = classify(F5, at_origin());
    ok &= check(c5.tag == 5, "case 5: wrong case tag");
    ok &= check(c5.kind == CertKind::PureProjective, "case 5: wrong kind");
    ok &= check(c5.on_cover, "case 5: expected a cover-side witness");
    ok &= check(verify_certificate(c5, F5).ok, "case 5: does not re-verify");
  }

  // cases 6 and 7
  Foliation F6 = foliation_from_data({dh, zero2(), tau_h() * dh, zero2()},
                                     {rc(2, 1), RatFun(2), rc(2, 1)});
  ok &= expect(F6, at_origin(), 6, CertKind::FiniteGVS, "case 6");
  Foliation F7 = foliation_from_data({Rat(2) * dh, Rat(3) * dh, dh, zero2()},
                                     {rc(2, 2), rc(2, 2), rc(2, 1)});
  ok &= expect(F7, at_origin(), 7, CertKind::FiniteGVS, "case 7");

  // replay rejection: a certificate for one foliation must fail on another
  Certificate ca = classify(F3a, at_origin());
  Certificate cp = classify(F3p, at_origin());
  ok &= check(!verify_certificate(ca, F3p).ok,
              "replay of the affine certificate was accepted");
  ok &= check(!verify_certificate(cp, F3a).ok,
              "replay of the projective certificate was accepted");

  // perturbed foliation: same shape, different coefficients
  DForm<RatFun> pert = quartic_affine_germ();
  pert.add_term({0}, RatFun(MPoly::variable(3, 1).pow(4)));
  try {
    Foliation Fp = make_foliation(homogenize_form(pert, 0, 4));
    ok &= check(!verify_certificate(ca, Fp).ok,
                "replay against a perturbed foliation was accepted");
  } catch (const std::exception&) {
    // perturbation broke validity; mutated-witness rejection still applies
    Certificate bad = ca;
    bad.w[0].add_term({0}, rc(bad.w[0].nvars(), 1));
    ok &= check(!verify_certificate(bad, F3a).ok,
                "mutated witness was accepted");
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 7: worked saturation and degree examples.

bool criterion7() {
  bool ok = true;
  int n = 3;
  MPoly z0 = MPoly::variable(n, 0), z1 = MPoly::variable(n, 1),
        z2 = MPoly::variable(n, 2);
  RatFun P(z0 * z0), Q(z1 * z2);
  DForm<RatFun> w = Q * d_fun(P) + Rat(-1) * (P * d_fun(Q));
  ValidationReport rep = validate(w);
  ok &= check(rep.polynomial && rep.homogeneous, "pencil form is not polynomial");
  ok &= check(rep.radial, "radial contraction of Q dP - P dQ is not zero");
  ok &= check(rep.integrable, "Q dP - P dQ is not integrable");
  ok &= check(!rep.saturated, "expected common factor z0 before saturation");
  DForm<RatFun> sat = saturate(w);
  ok &= check(validate(sat).saturated, "saturation left a common factor");
  ok &= check(sat.coeff({0}) == RatFun(Rat(2) * z1 * z2),
              "saturation did not remove exactly z0");
  ok &= check(*homogeneous_coeff_degree(sat) - 1 == 1,
              "saturated pencil does not have degree 1");

  DForm<RatFun> lin(1, n, RatFun(n));
  lin.add_term({0}, RatFun(z1));
  lin.add_term({1}, RatFun(Rat(-1) * z0));
  ok &= check(validate(lin).ok(), "z1 dz0 - z0 dz1 fails validation");
  ok &= check(*homogeneous_coeff_degree(lin) - 1 == 0,
              "z1 dz0 - z0 dz1 does not have degree 0");
  return ok;
}

// ---------------------------------------------------------------------------
// Criterion 8: command-line round trip, determinism and exit codes.

#ifndef FOL_CLI_PATH
#define FOL_CLI_PATH "./fol"
#endif

int run_cli(const std::string& args, const std::string& out_path) {
  std::string cmd = std::string(FOL_CLI_PATH) + " " + args + " > " + out_path +
                    " 2>&1";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion8() {
  bool ok = true;
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "fol-acceptance";
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  };

  // round trip on a fixture foliation
  FormDocument doc;
  doc.vars = {"z1", "z2", "z3"};
  doc.form = quartic_affine_germ();
  std::string rendered = render_form_document(doc);
  FormDocument back = parse_form_document(rendered);
  ok &= check(back.form == doc.form, "parse of a rendered document differs");
  ok &= check(render_form_document(back) == rendered,
              "re-render is not byte-identical");

  // degree fixture (saturation example): expect output "1", exit 0
  std::string pencil = write(
      "pencil.fol",
      "vars: z0 z1 z2\nform: 2 z0 z1 z2 dz0 - z0^2 z2 dz1 - z0^2 z1 dz2\n");
  std::string out = (dir / "out.txt").string();
  ok &= check(run_cli("degree " + pencil, out) == 0, "degree exit code != 0");
  ok &= check(slurp(out) == "1\n", "degree output is not '1'");

  // non-integrable check: exit 1 and a printed witness
  std::string contact =
      write("contact.fol", "vars: x y z\nform: z dx + x dy + y dz\n");
  ok &= check(run_cli("check " + contact, out) == 1,
              "check exit code != 1 on a non-integrable form");
  ok &= check(slurp(out).find("witness:") != std::string::npos,
              "check did not print an integrability witness");

  // parse error: exit 2
  std::string broken = write("broken.fol", "vars: x y\nform: x dq\n");
  ok &= check(run_cli("check " + broken, out) == 2,
              "parse failure did not exit with code 2");
  ok &= check(run_cli("nonsense", out) == 2, "bad usage did not exit 2");

  // classify + emit determinism + verify round trip
  Foliation F = make_foliation(homogenize_form(quartic_affine_germ(), 0, 4));
  FormDocument fd;
  fd.vars = {"z0", "z1", "z2", "z3"};
  fd.form = F.omega;
  std::string fol_path = write("quartic.fol", render_form_document(fd));
  std::string cert1 = (dir / "c1.cert").string();
  std::string cert2 = (dir / "c2.cert").string();
  ok &= check(run_cli("classify " + fol_path +
                          " --chart 0 --point 0,0,0 --emit " + cert1,
                      out) == 0,
              "classify exit code != 0");
  ok &= check(run_cli("classify " + fol_path +
                          " --chart 0 --point 0,0,0 --emit " + cert2,
                      out) == 0,
              "second classify exit code != 0");
  ok &= check(!slurp(cert1).empty() && slurp(cert1) == slurp(cert2),
              "emitted certificates are not byte-identical");
  ok &= check(run_cli("verify " + cert1 + " " + fol_path, out) == 0,
              "verify of an emitted certificate failed");
  // verifying against the wrong foliation is a mathematical failure: exit 1
  std::string other = write("other.fol", [&] {
    FormDocument od;
    od.vars = {"z0", "z1", "z2", "z3"};
    od.form = homogenize_form(cubic_chain_germ(), 0, 4);
    return render_form_document(od);
  }());
  ok &= check(run_cli("verify " + cert1 + " " + other, out) == 1,
              "verify against the wrong foliation did not exit 1");
  return ok;
}

}  // namespace

int main() {
  struct Entry {
    int num;
    bool (*fn)();
  };
  const Entry entries[] = {{1, criterion1}, {2, criterion2}, {3, criterion3},
                           {4, criterion4}, {5, criterion5}, {6, criterion6},
                           {7, criterion7}, {8, criterion8}};
  bool all = true;
  for (const auto& e : entries) {
    bool ok = false;
    try {
      ok = e.fn();
    } catch (const std::exception& ex) {
      std::cout << "    FAIL: unhandled exception: " << ex.what() << "\n";
    }
    std::cout << "CRITERION " << e.num << ": " << (ok ? "PASS" : "FAIL")
              << std::endl;
    all &= ok;
  }
  return all ? 0 : 1;
}
