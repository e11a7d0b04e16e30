#pragma once

// Projective corepresentations and their correspondence with left coactions
// of (Mhat, Dhat) on type-I factors, both directions, plus outer equivalence.

#include "qgal/reflection.hpp"

namespace qgal {

// A unitary in Nhat (x) B(H): L2(M) (x) H -> L2(N) (x) H.
struct ProjectiveCorep {
  int h_dim = 0;
  CMat g_op;
};

// Left coaction of (Mhat, Dhat) on B(H), carried by an implementing unitary:
// Upsilon(x) = g_impl^*(1 (x) x) g_impl.  Type-I coactions are always
// implemented, and this representation keeps the large ambient spaces out of
// the stored data.
struct TypeICoaction {
  int h_dim = 0;
  CMat g_impl;

  CMat upsilon(const CMat& x) const;  // on L2(M) (x) H
};

// unitarity, first-leg membership in Nhat, corepresentation identity
// (Delta_Nhat (x) i)(G) = G13 G23
Report check_corep(const GaloisObject& go, const LinkingCorners& lc, const ProjectiveCorep& pc);

// regular corepresentation (J_N (x) K) Gt^* (J (x) K^{-1}) with K the
// entrywise conjugation of L2(N) in its GNS basis
ProjectiveCorep regular_corep(const GaloisObject& go);

// Upsilon(x) = G^*(1 (x) x)G
TypeICoaction induced_coaction(const ProjectiveCorep& pc);

// coaction axioms for a type-I coaction: first legs in Mhat, unital
// *-homomorphism, injectivity, left-coaction identity
Report validate_type_i(const QgContext& ctx, const TypeICoaction& tc);

struct ExtractionResult {
  GaloisObject object;
  ProjectiveCorep corep;
  Report report;
};

// crossed product Mhat |x B(H), relative commutant N, restricted dual
// coaction, Galois object assembly and recovery of the corepresentation from
// the factorisation u = G (x) 1
ExtractionResult extract_galois(const QgContext& ctx, const TypeICoaction& tc);

// Upsilon_1-cocycle identity of v, unitarity, and Upsilon_2 = v Upsilon_1 v^*
Report outer_equivalence(const QgContext& ctx, const TypeICoaction& tc1,
                         const TypeICoaction& tc2, const CMat& v);

// second corepresentation over the same object: (1 (x) w) G (1 (x) w^*)
ProjectiveCorep conjugate_corep(const ProjectiveCorep& pc, const CMat& w);

// roundtrip: extract from the regular corep's induced coaction and compare
// the reflection of the extracted object with the reflection of `go` through
// the canonical unitary v with G1 G2^* = v (x) 1
Report roundtrip_report(const GaloisObject& go, const LinkingCorners& lc);

}  // namespace qgal
