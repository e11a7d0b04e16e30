#pragma once

// The linking algebra between the right Mhat-modules L2(M) and L2(N), its
// corner coproducts and coinvolution, and the reflected quantum group Phat.

#include "qgal/galois.hpp"

namespace qgal {

struct LinkingCorners {
  AlgebraBasis nhat;  // intertwiners L2(M) -> L2(N)
  AlgebraBasis ohat;  // adjoints of nhat
  AlgebraBasis phat;  // rho(1 (x) Mhat')' inside B(L2(N))
  AlgebraBasis mhat;  // the dual algebra on L2(M)
  Report report;      // intertwining and corner-product residuals
};

LinkingCorners intertwiner_corner(const GaloisObject& go);

// corner coproducts as operators:
//   Delta_Nhat(x) = Gt^*(1 (x) x) What   (L2M (x) L2M -> L2N (x) L2N)
//   Delta_Ohat(y) = Delta_Nhat(y^*)^*
//   Delta_Phat(x) = Gt^*(1 (x) x) Gt
//   Delta_Mhat(y) = What^*(1 (x) y) What
CMat delta_nhat(const GaloisObject& go, const CMat& x);
CMat delta_ohat(const GaloisObject& go, const CMat& y);
CMat delta_phat(const GaloisObject& go, const CMat& x);
CMat delta_mhat(const GaloisObject& go, const CMat& y);

// membership (Lemma-style corner containments), coassociativity on all four
// corners and the non-unitality witness Delta_Q(1) = 1_M (x) 1_M + 1_P (x) 1_P
Report corner_coproducts(const GaloisObject& go, const LinkingCorners& lc);

// R_Q(z) = (J_N (+) J) z^* (J_N (+) J) blockwise: anti-multiplicativity,
// involutivity and Delta_Q(R(x)) = (R (x) R)Delta_Q^op(x) on all corners
Report unitary_antipode_q(const GaloisObject& go, const LinkingCorners& lc);

struct ReflectedQuantumGroup {
  FiniteQuantumGroup qg_out;
  AlgebraBasis phat;   // concrete basis on L2(N) matching qg_out's coordinates
  Report witness;
};

// package (Phat, Delta_Phat) as structure constants with the Haar state
// solved from left invariance; throws HardError when the invariance system
// is not one-dimensional
ReflectedQuantumGroup reflect(const GaloisObject& go);

// identification of the reflected quantum group of the trivial object with
// the dual (both concrete on L2(M))
Report reflect_matches_dual(const GaloisObject& go, const ReflectedQuantumGroup& refl);

// cocycle case: Delta_Phat = Omega Dhat(.) Omega^* on the dual basis
Report reflect_matches_twist(const GaloisObject& go, const ReflectedQuantumGroup& refl);

// What_Omega two ways: the closed formula
//   (J_N (x) Jhat) Omega What^* (J (x) Jhat) Omega^*
// against the multiplicative unitary of the reflected quantum group
// transported through the canonical GNS map of phi_Phat; plus its pentagon
Report twisted_multiplicative_unitary(const GaloisObject& go,
                                      const ReflectedQuantumGroup& refl);

// cocommutativity distance of a quantum group (flip-invariance of comult)
double cocommutativity_residual(const FiniteQuantumGroup& qg);
double commutativity_residual(const FiniteQuantumGroup& qg);

}  // namespace qgal
