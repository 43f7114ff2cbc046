#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fol/transverse.hpp"

using namespace fol;

namespace {
RatFun rv(int n, int i) { return RatFun::variable(n, i); }
RatFun rc(int n, long long c) { return RatFun::constant(n, Rat(c)); }
}  // namespace

TEST_CASE("finite Lie-derivative sequence terminates and verifies") {
  // eta = dx + (x + x^4) dlog(t1 t2) on (t1, t2, x)
  int n = 3;
  RatFun t1 = rv(n, 0), t2 = rv(n, 1), x = rv(n, 2);
  DForm<RatFun> gamma(1, n, RatFun(n));
  gamma.add_term({0}, t1.inverse());
  gamma.add_term({1}, t2.inverse());
  DForm<RatFun> eta = (x + x.pow(4)) * gamma;
  eta.add_term({2}, rc(n, 1));
  REQUIRE(wedge(eta, exterior_d(eta)).is_zero());

  auto seq = gvs_compute(eta, 2);
  REQUIRE(seq.has_value());
  CHECK(seq->terminated);
  CHECK(seq->omega.size() == 5);  // derivatives of x + x^4 up to order 4
  CHECK(seq->omega[4] == Rat(24) * gamma);
  CHECK(gvs_verify(*seq));

  // a non-terminating direction: eta2 = dx + x*t1 dt2 has L_X powers t1^k dt2
  DForm<RatFun> eta2(1, n, RatFun(n));
  eta2.add_term({2}, rc(n, 1));
  eta2.add_term({1}, x * t1);
  // (not integrable, but gvs_compute only watches termination)
  auto seq2 = gvs_compute(eta2, 2, 4);
  // L_X(x t1 dt2) = t1 dt2, then 0: terminates quickly
  REQUIRE(seq2.has_value());
  CHECK(seq2->omega.size() == 2);

  // dx-coefficient zero is rejected
  DForm<RatFun> eta3(1, n, RatFun(n));
  eta3.add_term({0}, t2);
  CHECK_FALSE(gvs_compute(eta3, 2).has_value());
}

TEST_CASE("gvs verification fails on a broken sequence") {
  int n = 2;
  RatFun t = rv(n, 0), x = rv(n, 1);
  // honest: eta = dx + x dlog(t): omega = [eta/1, dlog t]
  DForm<RatFun> dlogt(1, n, RatFun(n));
  dlogt.add_term({0}, t.inverse());
  DForm<RatFun> eta = x * dlogt;
  eta.add_term({1}, rc(n, 1));
  auto seq = gvs_compute(eta, 1);
  REQUIRE(seq.has_value());
  CHECK(gvs_verify(*seq));
  // corrupt the tail
  GVSeq<RatFun> bad = *seq;
  bad.omega[1] = (t + rc(n, 1)) * dlogt;
  CHECK_FALSE(gvs_verify(bad));
}

TEST_CASE("affine witness pair") {
  // beta1 = dlog(t1) (closed), beta2 = t1 dt2 with d(beta2) = beta1 ^ beta2
  int n = 3;  // (t1, t2, w)
  RatFun t1 = rv(n, 0), w = rv(n, 2);
  DForm<RatFun> beta1(1, n, RatFun(n));
  beta1.add_term({0}, t1.inverse());
  DForm<RatFun> beta2(1, n, RatFun(n));
  beta2.add_term({1}, t1);
  REQUIRE(exterior_d(beta2) == wedge(beta1, beta2));

  DForm<RatFun> Omega = -beta2 - w * beta1;
  Omega.add_term({2}, rc(n, 1));
  CHECK(verify_affine(Omega, -beta1));
  CHECK(wedge(Omega, exterior_d(Omega)).is_zero());
  // wrong companion form fails
  CHECK_FALSE(verify_affine(Omega, beta1));
}

TEST_CASE("riccati triple gives a projective structure") {
  // one base variable: the beta system is vacuous, the triple is not
  int m = 1;
  DForm<RatFun> b0(1, m, RatFun(m)), b1(1, m, RatFun(m)), b2(1, m, RatFun(m));
  b0.add_term({0}, rc(m, 1));
  b1.add_term({0}, rv(m, 0));
  b2.add_term({0}, rv(m, 0) * rv(m, 0) + rc(m, 3));
  REQUIRE(structural_system_check(b0, b1, b2));
  auto [w0, w1, w2] = riccati_triple(b0, b1, b2);
  CHECK(verify_projective(w0, w1, w2));
  CHECK(wedge(w0, exterior_d(w0)).is_zero());

  // two base variables, beta2 = 0 (affine specialization of the system)
  int k = 2;
  DForm<RatFun> c0(1, k, RatFun(k)), c1(1, k, RatFun(k)), c2(1, k, RatFun(k));
  c0.add_term({0}, rv(k, 1));                 // t2 dt1
  c1.add_term({1}, -rv(k, 1).inverse());      // -dlog t2
  REQUIRE(structural_system_check(c0, c1, c2));
  auto [u0, u1, u2] = riccati_triple(c0, c1, c2);
  CHECK(verify_projective(u0, u1, u2));
  CHECK(u2.is_zero());
  CHECK(verify_affine(u0, u1));

  // violating the system breaks the projective relations
  DForm<RatFun> c2bad = c2;
  c2bad.add_term({0}, rv(k, 0));
  CHECK_FALSE(structural_system_check(c0, c1, c2bad));
  CHECK_THROWS_AS(riccati_triple(c0, c1, c2bad), StructuralSystemViolated);
  auto [v0, v1, v2] = riccati_triple(c0, c1, c2bad, false);
  CHECK_FALSE(verify_projective(v0, v1, v2));
}

TEST_CASE("gvs sequence over a quadratic cover") {
  // base (tau, t), generator g with g^2 = tau; eta = dt + t*g dtau
  int n = 2;
  auto ring = std::make_shared<QuadRing>(n, "g", rv(n, 0), RatFun(n));
  QuadElem zero = QuadElem::from_base(ring, RatFun(n));
  auto g = QuadElem::generator(ring);
  DForm<QuadElem> eta(1, n, zero);
  eta.add_term({1}, QuadElem::constant(ring, Rat(1)));
  eta.add_term({0}, QuadElem::from_base(ring, rv(n, 1)) * g);
  auto seq = gvs_compute(eta, 1);
  REQUIRE(seq.has_value());
  CHECK(seq->terminated);
  CHECK(seq->omega.size() == 2);
  CHECK(seq->omega[1].coeff({0}) == g);
  CHECK(gvs_verify(*seq));

  GVSeq<QuadElem> bad = *seq;
  bad.omega[1] = g * bad.omega[1] + bad.omega[0];
  CHECK_FALSE(gvs_verify(bad));
}
