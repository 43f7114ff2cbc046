#ifndef FOL_TRANSVERSE_HPP
#define FOL_TRANSVERSE_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fol/dform.hpp"

namespace fol {

// ---------------------------------------------------------------------------
// Lifting a ring element into a field with one extra (appended) variable.

inline RatFun lift_ratfun(const RatFun& f) {
  int n = f.nvars();
  return RatFun(f.num().insert_var(n), f.den().insert_var(n));
}

inline QuadElem lift_quadelem(const QuadElem& e,
                              const std::shared_ptr<const QuadRing>& lifted_ring) {
  return QuadElem(lifted_ring, lift_ratfun(e.even()), lift_ratfun(e.odd()));
}

inline std::shared_ptr<const QuadRing> lift_ring(const QuadRing& R) {
  return std::make_shared<QuadRing>(R.nvars + 1, R.gen_name,
                                    lift_ratfun(R.r_even), lift_ratfun(R.r_odd));
}

// ---------------------------------------------------------------------------
// Godbillon-Vey style sequences: with X the unit field along one coordinate
// and i_X(omega_0) = 1, iterate omega_{k+1} = L_X(omega_k). The sequence has
// finite length when some iterate vanishes identically.
template <class R>
struct GVSeq {
  std::vector<DForm<R>> omega;  // omega[0], omega[1], ...
  bool terminated = false;      // L_X of the last stored form vanishes
  int xvar = -1;                // the coordinate along which X points

  // length convention: largest index with a nonzero form
  int length() const { return (int)omega.size() - 1; }
};

template <class R>
R ring_one(const DForm<R>& proto);

template <>
inline RatFun ring_one<RatFun>(const DForm<RatFun>& proto) {
  return RatFun::constant(proto.nvars(), Rat(1));
}
template <>
inline QuadElem ring_one<QuadElem>(const DForm<QuadElem>& proto) {
  return QuadElem::constant(proto.zero_elem().ring(), Rat(1));
}

// Normalize eta so the dx-coefficient is 1 (divide by it), then iterate the
// Lie derivative along X = d/dx. Returns nullopt when the dx-coefficient is
// zero (no transverse field along x); a sequence that fails to terminate
// within `cap` steps is returned with terminated = false.
template <class R>
std::optional<GVSeq<R>> gvs_compute(const DForm<R>& eta, int xvar, int cap = 8) {
  const R& fx = eta.coeff({xvar});
  if (fx.is_zero()) return std::nullopt;
  VField<R> X(eta.nvars(), eta.zero_elem());
  X[xvar] = ring_one(eta);

  GVSeq<R> seq;
  seq.xvar = xvar;
  R inv = ring_one(eta);
  if constexpr (std::is_same_v<R, RatFun>) {
    inv = inv / fx;
  } else {
    inv = fx.inverse();
  }
  DForm<R> cur = inv * eta;
  for (int k = 0; k <= cap; ++k) {
    if (cur.is_zero()) {
      seq.terminated = true;
      return seq;
    }
    seq.omega.push_back(cur);
    cur = lie_derivative(X, cur);
  }
  return seq;  // cap exceeded: terminated stays false
}

// Verify a finite sequence: adjoin a variable z and check that
//   Omega = dz + sum_k z^k / k! * omega_k
// is integrable. (omega_0 enters at k = 0.)
inline bool gvs_verify(const GVSeq<RatFun>& seq) {
  if (!seq.terminated || seq.omega.empty()) return false;
  int n = seq.omega.front().nvars();
  int N = n + 1;  // z appended last
  DForm<RatFun> Omega(1, N, RatFun(N));
  Omega.add_term({n}, RatFun::constant(N, Rat(1)));
  RatFun z = RatFun::variable(N, n);
  Rat fact(1);
  for (size_t k = 0; k < seq.omega.size(); ++k) {
    if (k > 0) fact *= Rat((long long)k);
    for (const auto& [t, c] : seq.omega[k].coeffs())
      Omega.add_term(t, (Rat(1) / fact) * (z.pow((int)k) * lift_ratfun(c)));
  }
  return wedge(Omega, exterior_d(Omega)).is_zero();
}

inline bool gvs_verify(const GVSeq<QuadElem>& seq) {
  if (!seq.terminated || seq.omega.empty()) return false;
  const auto& ring = seq.omega.front().zero_elem().ring();
  auto R2 = lift_ring(*ring);
  int n = ring->nvars;
  int N = n + 1;
  QuadElem zero = QuadElem::from_base(R2, RatFun(N));
  DForm<QuadElem> Omega(1, N, zero);
  Omega.add_term({n}, QuadElem::constant(R2, Rat(1)));
  QuadElem z = QuadElem::from_base(R2, RatFun::variable(N, n));
  Rat fact(1);
  for (size_t k = 0; k < seq.omega.size(); ++k) {
    if (k > 0) fact *= Rat((long long)k);
    QuadElem zk = QuadElem::constant(R2, Rat(1) / fact);
    for (size_t j = 0; j < k; ++j) zk *= z;
    for (const auto& [t, c] : seq.omega[k].coeffs())
      Omega.add_term(t, zk * lift_quadelem(c, R2));
  }
  return wedge(Omega, exterior_d(Omega)).is_zero();
}

// ---------------------------------------------------------------------------
// Transverse-structure witnesses.

// Affine pair: d(omega0) = omega0 ^ omega1 and d(omega1) = 0.
template <class R>
bool verify_affine(const DForm<R>& w0, const DForm<R>& w1) {
  return exterior_d(w0) == wedge(w0, w1) && exterior_d(w1).is_zero();
}

// Projective triple: d(omega0) = omega0 ^ omega1,
//                    d(omega1) = omega0 ^ omega2,
//                    d(omega2) = omega1 ^ omega2.
template <class R>
bool verify_projective(const DForm<R>& w0, const DForm<R>& w1, const DForm<R>& w2) {
  return exterior_d(w0) == wedge(w0, w1) && exterior_d(w1) == wedge(w0, w2) &&
         exterior_d(w2) == wedge(w1, w2);
}

// Thrown by riccati_triple when the beta system does not hold.
struct StructuralSystemViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural system for a Riccati family beta0 + x beta1 + x^2 beta2 + dx:
//   d(beta0) = beta0 ^ beta1,
//   d(beta1) = 2 beta0 ^ beta2,
//   d(beta2) = beta1 ^ beta2.
template <class R>
bool structural_system_check(const DForm<R>& b0, const DForm<R>& b1,
                             const DForm<R>& b2) {
  return exterior_d(b0) == wedge(b0, b1) &&
         exterior_d(b1) == Rat(2) * wedge(b0, b2) &&
         exterior_d(b2) == wedge(b1, b2);
}

// From tau-side forms beta0..beta2 satisfying the system above, produce the
// projective triple on (tau, x) with x appended as the last variable:
//   omega0 = dx + beta0 + x beta1 + x^2 beta2
//   omega1 = beta1 + 2x beta2
//   omega2 = 2 beta2
inline std::array<DForm<RatFun>, 3> riccati_triple(const DForm<RatFun>& b0,
                                                   const DForm<RatFun>& b1,
                                                   const DForm<RatFun>& b2,
                                                   bool check = true) {
  if (check && !structural_system_check(b0, b1, b2))
    throw StructuralSystemViolated("riccati_triple: beta system does not hold");
  int m = b0.nvars();
  int N = m + 1;
  auto lift = [&](const DForm<RatFun>& w) {
    DForm<RatFun> r(1, N, RatFun(N));
    for (const auto& [t, c] : w.coeffs()) r.add_term(t, lift_ratfun(c));
    return r;
  };
  RatFun x = RatFun::variable(N, m);
  DForm<RatFun> L0 = lift(b0), L1 = lift(b1), L2 = lift(b2);
  DForm<RatFun> w0 = L0 + x * L1 + x.pow(2) * L2;
  w0.add_term({m}, RatFun::constant(N, Rat(1)));
  DForm<RatFun> w1 = L1 + (Rat(2) * x) * L2;
  DForm<RatFun> w2 = Rat(2) * L2;
  return {w0, w1, w2};
}

}  // namespace fol

#endif
