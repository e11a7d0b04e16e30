#pragma once

// Galois objects: ergodic Galois coactions built from 2-cocycles or from
// explicit coaction data, the Galois unitary, the crossed product and Galois
// homomorphism, commutation relations, the twisted pentagon, invariant states
// and modular data.

#include <optional>

#include "qgal/cocycle.hpp"
#include "qgal/fqg.hpp"

namespace qgal {

// Explicit coaction input: N realised as matrices on C^{hilbert_dim}, with
// alpha given entrywise on H_N (x) L2(M) per basis element (M realised via
// its GNS left representation).
struct CoactionData {
  int hilbert_dim = 0;
  std::vector<CMat> n_basis;
  std::vector<CMat> alpha;
};

struct CoactionReport : Report {
  int fixed_point_dim = 0;
  int invariant_state_dim = 0;
};

struct GaloisObject {
  QgContext M;  // the base quantum group with all derived data
  bool from_cocycle = false;
  CMat omega;  // cocycle (identity for the trivial object) when from_cocycle

  // N and its coaction
  int h_dim = 0;                  // N acts on C^{h_dim}
  AlgebraBasis N;                 // HS-orthonormal basis of N
  std::vector<CMat> n_mult;       // n_mult[i](k,j): coeff of n_k in n_i n_j
  CMat n_star;                    // coords(x^*) = n_star conj(coords(x))
  CVec n_unit;
  std::vector<CMat> alpha_coeff;  // alpha(n_i) = sum_{b,j} coeff[i](b,j) n_b (x) e_j
  CVec phi_N;                     // invariant state covector
  int fixed_point_dim = 1;
  int invariant_state_dim = 1;

  // GNS of (N, phi_N).  For cocycle objects Lambda_N takes values in L2(M)
  // itself (the canonical identification); for explicit coactions L2(N) is a
  // fresh coordinate space.
  CMat lambda;      // columns Lambda_N(n_i)
  CMat lambda_inv;
  std::vector<CMat> pi_n;  // left representation of the basis on L2(N)
  CMat nabla_N;
  CMat jn_conj;     // J_N as K-matrix (xi -> K conj(xi))

  // Galois isometry G: L2(N) (x) L2(N) -> L2(N) (x) L2(M), Gt = Sigma G,
  // and the unitary implementation U on L2(N) (x) L2(M)
  CMat G;
  CMat Gt;
  CMat U;

  // slice machinery for pi_hat = rho(1 (x) .) on L2(N): precomputed slices
  // of V and U over coordinate functionals of M
  std::vector<CMat> v_slices;  // (i (x) e_k-functional)(V) spanning Mhat'
  std::vector<CMat> u_slices;  // matching slices of U

  int dim() const { return N.dim(); }
  int l2n_dim() const { return static_cast<int>(lambda.rows()); }

  CVec n_mul(const CVec& x, const CVec& y) const;
  CVec n_adj(const CVec& x) const;
  CMat pi(const CVec& coords) const;           // pi_l^N of an element
  CMat alpha_gns(const CVec& coords) const;    // alpha(x) on L2(N) (x) L2(M)
  CMat alpha_op_gns(const CVec& coords) const; // alpha^op(x) on L2(M) (x) L2(N)
  // rho(1 (x) m') for m' in Mhat' (the representation pi_hat_l on L2(N))
  CMat pi_hat(const CMat& mprime) const;
};

// Reports on any explicit coaction data: homomorphism, *-compatibility,
// coaction identity, injectivity, unitality, fixed points, invariant state.
CoactionReport validate_coaction(const QgContext& ctx, const CoactionData& data, double tol);

// N = Mhat x|_Omega C = span{(omega (x) i)(What Omega^*)} with the canonical
// coaction and GNS map; throws HardError when the slices fail to span a
// *-closed algebra.
GaloisObject cocycle_crossed_product(const QgContext& ctx, const CMat& omega, double tol);

// Trivial Galois object (N = M, alpha = Delta) through the same path.
GaloisObject trivial_galois_object(const QgContext& ctx, double tol);

// Galois object from explicit coaction data; requires ergodicity, faithful
// invariant state.  The Galois property itself is NOT required: the returned
// object may fail the Galois criterion (used by the non-Galois control).
GaloisObject galois_from_coaction(const QgContext& ctx, const CoactionData& data, double tol);

// invariant state and the dimension of the invariance solution space
std::pair<CVec, int> invariant_state(const QgContext& ctx, const CoactionData& data);

// G~ unitarity and construction consistency residuals
Report galois_map_report(const GaloisObject& go);

// unitary implementation: unitarity and the corepresentation identity
// (i (x) Delta)(U) = U12 U13, plus U = V for cocycle objects
Report implementation_report(const GaloisObject& go);

// crossed product N x| M = (alpha(N) u 1 (x) Mhat')'' together with the
// Galois-homomorphism witness and the dimension criterion
struct CrossedProductResult {
  AlgebraBasis algebra;
  Report report;
};
CrossedProductResult crossed_product(const GaloisObject& go);

// commutation relations com1.1-4, Gt12 U13 = V13 Gt12, the J-intertwining,
// the twisted pentagon and the slice-density ranks
Report commutation_suite(const GaloisObject& go);

// modular data: H = Gt^*(J delta J (x) 1)Gt = 1, cor1 relations at sampled t,
// invariance and uniqueness of phi_N, and the X = J_N J coboundary identity
// for cocycle objects
Report modular_suite(const GaloisObject& go);

// intertwiner corner Nhat = { T : L2(M) -> L2(N), T pihat_r(m) = pihat_r^N(m) T }
AlgebraBasis nhat_corner(const GaloisObject& go);

// negative control: G~ with one eigenvalue phase rotated
CMat perturbed_galois_unitary(const GaloisObject& go, double angle);

// shared constructor tail: structure constants of N, coaction coefficients,
// ergodicity, invariant state, GNS and modular data, G, Gt, U and the slice
// machinery.  `lambda_given` carries a canonical GNS map when one exists.
void finish_galois_object(GaloisObject& go, const std::vector<CMat>& alpha_op,
                          const CMat& lambda_given, double tol);

}  // namespace qgal
