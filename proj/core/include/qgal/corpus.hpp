#pragma once

// Standard corpus: function algebras C(G) and group algebras C[G] of small
// finite groups, bicharacter 2-cocycles, the Weyl-pair coaction and the
// non-Galois control fixture.

#include <functional>
#include <string>
#include <vector>

#include "qgal/fqg.hpp"

namespace qgal {

// A finite group as a multiplication table: elem k is 0..order-1, identity 0.
struct FiniteGroup {
  std::string name;
  std::vector<std::vector<int>> table;  // table[g][h] = g*h
  std::vector<std::string> labels;

  int order() const { return static_cast<int>(table.size()); }
  int mul(int g, int h) const { return table[g][h]; }
  int inv(int g) const;
};

FiniteGroup cyclic_group(int n);
FiniteGroup product_group(const FiniteGroup& a, const FiniteGroup& b);
FiniteGroup symmetric_group_s3();
FiniteGroup dihedral_group_d4();  // <r,s | r^4 = s^2 = e, s r s = r^-1>

// C(G): pointwise products of delta functions, Delta f(s,t) = f(st).
FiniteQuantumGroup function_algebra(const FiniteGroup& g);
// C[G]: convolution algebra, Delta(u_g) = u_g (x) u_g.
FiniteQuantumGroup group_algebra(const FiniteGroup& g);

// Classical Hopf pairing <delta_s, u_g> = [s == g] between C(G) and C[G],
// in the corpus bases (identity permutation).
CMat classical_pairing(int order);

// Diagonal bicharacter cocycle on Mhat = "C(Zn x Zn)" for M = C[Zn x Zn]:
// Omega((a,b),(c,d)) = zeta^{b c}.  Returned as a unitary on L2(M) (x) L2(M)
// in the GNS basis of the given context (which must be C[Zn x Zn] with the
// corpus ordering).
CMat bicharacter_cocycle(const QgContext& ctx, int n);

// Kac-Paljutkin-type cocycle for M = C(D4): a bicharacter on the dual of the
// Z2 x Z2 subgroup {e, r^2, s, r^2 s}, assembled from its minimal projections
// inside Mhat = C[D4].
CMat d4_subgroup_cocycle(const QgContext& ctx);

// Explicit Weyl-pair coaction data of C(Zn x Zn) on M_n: clock-and-shift
// conjugation action.  Returns the N basis (matrix units of M_n) and the
// coaction matrices on C^n (x) L2(M) per basis element.
struct CoactionFixture {
  int hilbert_dim = 0;               // dim of the space N acts on
  std::vector<CMat> n_basis;         // N as matrices
  std::vector<CMat> alpha;           // alpha(n_i) on H_N (x) L2(M)
};
CoactionFixture weyl_coaction(const QgContext& ctx, int n);

// Non-Galois control: N = C^2 with the Z2 x Z2 action through the first
// coordinate only (ergodic but not free).
CoactionFixture nongalois_control(const QgContext& ctx);

// Broken Haar fixture: C(Z2) with haar = (0.9, 0.1).
FiniteQuantumGroup broken_haar_cz2();

}  // namespace qgal
