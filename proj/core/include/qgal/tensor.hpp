#pragma once

// Dense complex tensor algebra: Kronecker products, leg-numbering embeddings,
// flips, slice maps, commutants and generated algebras.  Everything downstream
// (quantum groups, Galois objects, reflections) is built on these primitives.
//
// Conventions used throughout the library:
//   * matrices are row-major, composite indices are row-major as well, so
//     (a (x) b)[(i,k),(j,l)] = a[i,j] b[k,l] with row index i*rows(b)+k;
//   * an antiunitary operator is stored as its unitary matrix K and acts as
//     xi -> K * conj(xi);
//   * functionals are carried as density matrices, omega(x) = Tr(rho x).

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qgal {

using cd = std::complex<double>;
using CMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Hard errors: structurally invalid inputs, as opposed to residual failures
// which are reported, not thrown.
struct HardError : std::runtime_error {
  explicit HardError(const std::string& what) : std::runtime_error(what) {}
};

// Ordered list of tensor-factor dimensions of a composite Hilbert space.
struct LegSpace {
  std::vector<int> dims;

  LegSpace() = default;
  LegSpace(std::initializer_list<int> d) : dims(d) { check(); }
  explicit LegSpace(std::vector<int> d) : dims(std::move(d)) { check(); }

  int total() const {
    int t = 1;
    for (int d : dims) t *= d;
    return t;
  }
  int nlegs() const { return static_cast<int>(dims.size()); }

 private:
  void check() const {
    for (int d : dims)
      if (d <= 0) throw HardError("LegSpace: factor dimensions must be positive");
  }
};

// A linearly independent family of square matrices on a common ambient space,
// orthonormal in the Hilbert-Schmidt inner product when produced by this
// library.  Used for concrete spans: N, dual algebras, commutants, corners.
struct AlgebraBasis {
  int ambient_dim = 0;
  std::vector<CMat> elems;

  int dim() const { return static_cast<int>(elems.size()); }
};

// ---------------------------------------------------------------------------
// elementary constructions

CMat ident(int n);
CMat zeros(int rows, int cols);

// Kronecker product, left factor outermost.
CMat kron(const CMat& a, const CMat& b);

// Flip unitary H1 (x) H2 -> H2 (x) H1.
CMat flip(int d1, int d2);

// Matrix unit e_{kl} in M_n.
CMat matrix_unit(int n, int k, int l);

// Relative Frobenius distance ||a-b||_F / max(1, ||a||_F): the uniform
// equality oracle for every identity check in the library.
double residual(const CMat& a, const CMat& b);
double residual(const CVec& a, const CVec& b);

// Frobenius norm shortcut.
double fnorm(const CMat& a);

bool all_finite(const CMat& a);

// ---------------------------------------------------------------------------
// leg numbering

// Embed an operator u acting on the selected legs (1-based, in the given
// order) into the full space, acting as the identity on the remaining legs.
// leg_embed(u, {1,3}, [d1,d2,d3]) realises u_{13} = S_{23} u_{12} S_{23}.
CMat leg_embed(const CMat& u, const std::vector<int>& legs, const LegSpace& space);

// Slice maps on a two-factor space.  The functional is a density matrix rho
// on the sliced factor, omega(x) = Tr(rho x).
//   slice_left(rho, x, space)  = (omega (x) iota)(x)
//   slice_right(rho, x, space) = (iota (x) omega)(x)
CMat slice_left(const CMat& rho, const CMat& x, const LegSpace& space);
CMat slice_right(const CMat& rho, const CMat& x, const LegSpace& space);

// Entry-functional slice: omega_{ab}(T) = T[a,b] applied to the chosen leg.
CMat slice_entry_left(int a, int b, const CMat& x, const LegSpace& space);
CMat slice_entry_right(int a, int b, const CMat& x, const LegSpace& space);

// ---------------------------------------------------------------------------
// Hilbert-Schmidt machinery on spans of matrices

// <a,b>_HS = Tr(a^* b); linear in the second argument.
cd hs_dot(const CMat& a, const CMat& b);

// Row-major linearisation of a matrix.
CVec vec_rm(const CMat& a);
CMat unvec_rm(const CVec& v, int rows, int cols);

// Numerical rank threshold: dim * eps * sigma_max.
double rank_threshold(int dim, double sigma_max);

// Orthonormal (HS) basis of the span of the given matrices, canonicalised
// deterministically: matrix units are projected onto the span in
// lexicographic order and kept when independent; phases are fixed so the
// largest entry is real positive.
AlgebraBasis span_basis(const std::vector<CMat>& gens);

// Dimension of the span.
int span_rank(const std::vector<CMat>& gens);

// Coordinates of x in an HS-orthonormal basis; if `check` is non-null, stores
// the relative distance from x to its projection (span-membership residual).
CVec expand_in_basis(const AlgebraBasis& basis, const CMat& x, double* check = nullptr);

// Max span-membership residual over a family.
double span_membership(const AlgebraBasis& basis, const std::vector<CMat>& xs);

// True span equality: mutual membership below tol and equal ranks.
double span_equality(const AlgebraBasis& a, const AlgebraBasis& b);

// {x : xg = gx for all g in gens}, HS-orthonormal, deterministic order.
AlgebraBasis commutant(const AlgebraBasis& gens);
AlgebraBasis commutant(const std::vector<CMat>& gens, int ambient_dim);

// Unital *-algebra generated by gens: span closure under products and
// adjoints, iterated until the dimension stabilises (capped at ambient^2
// rounds).  An optional seed span accelerates the closure.
AlgebraBasis generated_algebra(const std::vector<CMat>& gens,
                               const std::vector<CMat>& seed = {});

// Centre of the algebra spanned by `basis` (assumed an algebra): elements of
// the span commuting with every basis element.
AlgebraBasis algebra_center(const AlgebraBasis& basis);

// Wedderburn block sizes of a *-closed matrix algebra, descending.
std::vector<int> wedderburn_blocks(const AlgebraBasis& algebra);

// ---------------------------------------------------------------------------
// hermitian functional calculus

// H^{it} for positive definite hermitian H (t real).
CMat herm_power_it(const CMat& h, double t);
CMat herm_sqrt(const CMat& h);
CMat herm_inv_sqrt(const CMat& h);

// ---------------------------------------------------------------------------
// antiunitary helpers (operator xi -> K conj(xi))

// Matrix of J x J for antiunitaries J = K1 o conj, J' = K2 o conj:
// (J x J') xi = K1 conj(x) conj(K2) xi.
CMat aunitary_sandwich(const CMat& k1, const CMat& x, const CMat& k2);

// ---------------------------------------------------------------------------
// randomness for negative controls (deterministic across platforms)

struct Rng {
  explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double uniform();          // [0,1)
  double normal();           // Box-Muller, deterministic
  cd cnormal();
  std::uint64_t state;
};

// Haar-random unitary via QR of a Ginibre matrix.
CMat haar_unitary(int n, Rng& rng);

// Rotate a single eigenvalue phase of a unitary by `angle`; stays unitary.
CMat perturb_unitary_phase(const CMat& u, int which, double angle);

}  // namespace qgal
