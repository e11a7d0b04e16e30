#pragma once

// Finite quantum groups: finite-dimensional Hopf *-algebras with a faithful
// positive Haar state, given by structure constants, together with the
// derived GNS/modular data, multiplicative unitaries and the dual.
//
// Structure constant conventions (d = dim):
//   mult[i](k,j)   coefficient of e_k in e_i * e_j          (m^k_{ij})
//   comult[i](j,k) coefficient of e_j (x) e_k in Delta(e_i) (c_i^{jk})
//   star           coords(x^*) = star * conj(coords(x))
//   unit           coords of 1
//   counit, haar   covectors: eps(e_i), phi(e_i)
//
// GNS conventions: <x,y> = phi(y^* x), antilinear in the second argument.
// Vectors on L2(M) are coordinates in the GNS-orthonormal basis produced by
// gns(); operators on L2(M) are plain matrices in that basis.

#include <optional>
#include <string>
#include <vector>

#include "qgal/report.hpp"
#include "qgal/tensor.hpp"

namespace qgal {

struct FiniteQuantumGroup {
  std::string name;
  int dim = 0;
  std::vector<std::string> basis_labels;
  std::vector<CMat> mult;    // d matrices, mult[i](k,j) = m^k_{ij}
  CVec unit;                 // d
  std::vector<CMat> comult;  // d matrices, comult[i](j,k) = c_i^{jk}
  CVec counit;               // d (stored as a vector, used as a covector)
  CMat star;                 // d x d
  CVec haar;                 // d (covector)

  // coordinates of x*y
  CVec mul(const CVec& x, const CVec& y) const;
  // coordinates of x^*
  CVec adj(const CVec& x) const;
  // left multiplication operator on coordinates
  CMat mul_left(const CVec& x) const;
  cd eval_counit(const CVec& x) const { return counit.transpose() * x; }
  cd eval_haar(const CVec& x) const { return haar.transpose() * x; }
  // Delta(x) as a coefficient matrix D(j,k) over e_j (x) e_k
  CMat comult_of(const CVec& x) const;
};

struct GnsData {
  CMat gram;        // G_{ij} = phi(e_i^* e_j)
  CMat onb;         // columns: coordinates of the GNS-orthonormal basis
  CMat onb_inv;     // coordinate change inverse (onb_inv * coords = GNS coords)
  std::vector<CMat> pi_l;  // left regular representation of the basis, GNS coords
  CMat s_op;        // antilinear S: xi -> s_op * conj(xi), Lambda(x) -> Lambda(x*)
  CMat nabla;       // modular operator (positive definite)
  CMat j_conj;      // modular conjugation: xi -> j_conj * conj(xi)

  CVec to_l2(const CVec& coords) const { return onb_inv * coords; }
  CVec from_l2(const CVec& xi) const { return onb * xi; }
  CMat pi(const CVec& coords) const;  // left representation of an element
};

struct MultiplicativeUnitaries {
  CMat W;     // left regular: W^*(La (x) Lb) = (L (x) L)(Delta(b)(a (x) 1))
  CMat What;  // Sigma W^* Sigma
  CMat V;     // right regular: V(La (x) Lb) = (L (x) L)(Delta(a)(1 (x) b))
};

// Realisation of the dual algebra Mhat on L2(M), plus everything the Galois
// machinery needs from it.
struct DualData {
  AlgebraBasis basis;            // Mhat as matrices on L2(M), HS-orthonormal
  FiniteQuantumGroup qg;         // abstract structure constants of (Mhat, Dhat)
  CMat pairing;                  // p(i,j) = <e_i, f_j> canonical duality pairing
  std::vector<CVec> gns_vectors; // canonical dual GNS map: Lambda_hat(f_j)
  CMat jhat_conj;                // dual modular conjugation on L2(M)
  CMat nabla_hat;                // dual modular operator on L2(M)
  AlgebraBasis commutant_basis;  // Mhat' on L2(M)
  CMat antipode_coords;          // Shat = Rhat on Mhat coordinates

  // Lambda_hat of an element given by coordinates in `basis`
  CVec gns(const CVec& coords) const;
  // realise coordinates as a matrix on L2(M)
  CMat realize(const CVec& coords) const;
  CVec coords_of(const CMat& y, double* resid = nullptr) const;
  CMat rhat(const CMat& y) const;  // unitary antipode applied to y in Mhat
  CMat dhat(const CMat& y, const CMat& what) const;  // Dhat(y) = What^*(1(x)y)What
};

struct ValidationReport : Report {};

// Axioms, invariances and finite-dimensional rigidity checks.  Throws
// HardError when the Gram matrix of the Haar state is not positive definite.
ValidationReport validate(const FiniteQuantumGroup& qg, double tol);

// GNS/modular data; throws HardError on a non positive definite Gram matrix.
GnsData gns(const FiniteQuantumGroup& qg);

// W, What, V assembled from the GNS basis action; throws HardError if W or V
// fail unitarity beyond tol.
MultiplicativeUnitaries multiplicative_unitary(const FiniteQuantumGroup& qg,
                                               const GnsData& g, double tol);

// Dual quantum group realised on L2(M).  Throws HardError when the Haar
// invariance system does not have a one-dimensional solution space.
DualData dual(const FiniteQuantumGroup& qg, const GnsData& g,
              const MultiplicativeUnitaries& mu, double tol);

// Antipode solved from m(S (x) i)Delta = eps(.)1, and the unitary antipode
// R = S (finite dimension, tracial Haar).  Returns coordinate matrices.
struct AntipodeData {
  CMat S;
  CMat R;
  double s_squared_residual = 0.0;
};
AntipodeData antipode_data(const FiniteQuantumGroup& qg);

// Everything about one quantum group, bundled for reuse.
struct QgContext {
  FiniteQuantumGroup qg;
  GnsData g;
  MultiplicativeUnitaries mu;
  DualData du;
  AntipodeData anti;
  double tol = 1e-9;

  int d() const { return qg.dim; }
  // GNS-orthonormal basis elements as coordinate vectors
  CVec onb_element(int a) const { return g.onb.col(a); }
};

QgContext make_context(const FiniteQuantumGroup& qg, double tol);

// Transport residuals of a linear map Psi: A -> B (matrix psi, coordinates of
// A mapped to coordinates of B) against all structure tensors; the measure of
// "the structure constants match under the identification Psi".
Report hopf_iso_residual(const FiniteQuantumGroup& a, const FiniteQuantumGroup& b,
                         const CMat& psi, double tol);

// Canonical bidual identification M -> (Mhat)hat through the duality pairings
// (with the antipode twist) and its transport report.
Report bidual_match(const QgContext& ctx, double tol);

// Identification of a reference dual (e.g. the explicitly constructed group
// algebra C[G] for M = C(G)) with the computed dual, through a reference
// pairing ref(i,j) = <e_i, u_j> satisfying the same orientation conventions.
Report dual_match_reference(const QgContext& ctx, const FiniteQuantumGroup& ref,
                            const CMat& ref_pairing, double tol);

}  // namespace qgal
