#pragma once

// Unitary 2-cocycles on the dual quantum group: verification of the cocycle
// identity, coproduct twisting, coboundary transforms and the mirror cocycle.

#include "qgal/fqg.hpp"
#include "qgal/report.hpp"

namespace qgal {

// A cocycle is carried as a unitary on L2(M) (x) L2(M) with both legs in the
// realised Mhat; every identity it enters multiplies it against W-type
// unitaries in exactly this representation.
struct TwoCocycle {
  CMat omega;
};

struct CocycleReport : Report {};

// unitarity, leg membership in Mhat (x) Mhat, and the cocycle identity
//   (1 (x) Omega)(i (x) Dhat)(Omega) = (Omega (x) 1)(Dhat (x) i)(Omega)
CocycleReport check_cocycle(const QgContext& ctx, const CMat& omega);

// (i (x) Dhat)(X) and (Dhat (x) i)(X) for X in Mhat (x) Mhat, as operators on
// L2(M)^{(x)3}
CMat coprod_right_leg(const QgContext& ctx, const CMat& x);
CMat coprod_left_leg(const QgContext& ctx, const CMat& x);

struct TwistedHopfData {
  std::vector<CMat> twisted_comult;  // Dhat_Omega(f_i) realised on L2(M)^{(x)2}
  double coassociativity_residual = 0.0;
  double twist_distance = 0.0;  // residual(Dhat_Omega, Dhat) over the basis
};

// Dhat_Omega = Omega Dhat(.) Omega^*; requires a valid cocycle for the output
// to be coassociative.
TwistedHopfData twist_coproduct(const QgContext& ctx, const TwoCocycle& oc);

// Omega' = (u (x) u) Omega Dhat(u)^* for a unitary u in Mhat; throws on a
// non-unitary or non-member u.
TwoCocycle coboundary_transform(const QgContext& ctx, const TwoCocycle& oc, const CMat& u);

// Omega~ = (Rhat (x) Rhat)(Sigma Omega^* Sigma)
TwoCocycle mirror_cocycle(const QgContext& ctx, const TwoCocycle& oc);

// residual of Omega^*(X (x) X) = Dhat(X) Omega~^*
double coboundary_residual(const QgContext& ctx, const CMat& omega, const CMat& omega_tilde,
                           const CMat& x);

// random unitary with coordinates in Mhat (for coboundary property tests)
CMat random_mhat_unitary(const QgContext& ctx, Rng& rng);

}  // namespace qgal
