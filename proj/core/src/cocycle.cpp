#include "qgal/cocycle.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qgal {

namespace {

AlgebraBasis tensor_square_basis(const AlgebraBasis& b) {
  AlgebraBasis out;
  out.ambient_dim = b.ambient_dim * b.ambient_dim;
  for (const auto& x : b.elems)
    for (const auto& y : b.elems) out.elems.push_back(kron(x, y));
  return out;
}

}  // namespace

CMat coprod_right_leg(const QgContext& ctx, const CMat& x) {
  const int d = ctx.d();
  LegSpace three{d, d, d};
  CMat x13 = leg_embed(x, {1, 3}, three);
  CMat w23 = leg_embed(ctx.mu.What, {2, 3}, three);
  return w23.adjoint() * x13 * w23;
}

CMat coprod_left_leg(const QgContext& ctx, const CMat& x) {
  const int d = ctx.d();
  LegSpace three{d, d, d};
  CMat x23 = leg_embed(x, {2, 3}, three);
  CMat w12 = leg_embed(ctx.mu.What, {1, 2}, three);
  return w12.adjoint() * x23 * w12;
}

CocycleReport check_cocycle(const QgContext& ctx, const CMat& omega) {
  const int d = ctx.d();
  if (omega.rows() != d * d || omega.cols() != d * d)
    throw HardError("check_cocycle: cocycle does not act on L2(M) (x) L2(M)");
  CocycleReport rep;
  rep.subject = "cocycle on " + ctx.qg.name + "^";
  rep.add("unitarity",
          std::max(residual(CMat(omega * omega.adjoint()), ident(d * d)),
                   residual(CMat(omega.adjoint() * omega), ident(d * d))),
          ctx.tol);
  double memb = 0.0;
  expand_in_basis(tensor_square_basis(ctx.du.basis), omega, &memb);
  rep.add("legs_in_dual", memb, ctx.tol);

  LegSpace three{d, d, d};
  CMat lhs = leg_embed(omega, {2, 3}, three) * coprod_right_leg(ctx, omega);
  CMat rhs = leg_embed(omega, {1, 2}, three) * coprod_left_leg(ctx, omega);
  rep.add("cocycle_identity", residual(lhs, rhs), ctx.tol);
  return rep;
}

TwistedHopfData twist_coproduct(const QgContext& ctx, const TwoCocycle& oc) {
  const int d = ctx.d();
  TwistedHopfData out;
  CMat x = ctx.mu.What * oc.omega.adjoint();  // Dhat_Omega(y) = X^*(1 (x) y)X
  double num2 = 0, den2 = 0, tw_num2 = 0, tw_den2 = 0;
  LegSpace three{d, d, d};
  CMat x23 = leg_embed(x, {2, 3}, three), x12 = leg_embed(x, {1, 2}, three);
  for (int i = 0; i < d; ++i) {
    CMat ti = x.adjoint() * kron(ident(d), ctx.du.basis.elems[i]) * x;
    out.twisted_comult.push_back(ti);
    CMat plain = ctx.du.dhat(ctx.du.basis.elems[i], ctx.mu.What);
    tw_num2 += (ti - plain).squaredNorm();
    tw_den2 += plain.squaredNorm();
    CMat a = x23.adjoint() * leg_embed(ti, {1, 3}, three) * x23;
    CMat b = x12.adjoint() * leg_embed(ti, {2, 3}, three) * x12;
    num2 += (a - b).squaredNorm();
    den2 += a.squaredNorm();
  }
  out.coassociativity_residual = std::sqrt(num2) / std::max(1.0, std::sqrt(den2));
  out.twist_distance = std::sqrt(tw_num2) / std::max(1.0, std::sqrt(tw_den2));
  return out;
}

TwoCocycle coboundary_transform(const QgContext& ctx, const TwoCocycle& oc, const CMat& u) {
  const int d = ctx.d();
  if (residual(CMat(u * u.adjoint()), ident(d)) > 1e-8)
    throw HardError("coboundary_transform: u is not unitary");
  double memb = 0.0;
  expand_in_basis(ctx.du.basis, u, &memb);
  if (memb > 1e-8) throw HardError("coboundary_transform: u is not in Mhat");
  CMat du = ctx.du.dhat(u, ctx.mu.What);
  return TwoCocycle{CMat(kron(u, u) * oc.omega * du.adjoint())};
}

TwoCocycle mirror_cocycle(const QgContext& ctx, const TwoCocycle& oc) {
  const int d = ctx.d();
  CMat s = flip(d, d);
  CMat flipped = s * oc.omega.adjoint() * s;
  AlgebraBasis tb = tensor_square_basis(ctx.du.basis);
  double memb = 0.0;
  CVec c = expand_in_basis(tb, flipped, &memb);
  if (memb > 1e-7) throw HardError("mirror_cocycle: flipped cocycle is not in Mhat (x) Mhat");
  std::vector<CMat> rf(d);
  for (int i = 0; i < d; ++i) rf[i] = ctx.du.realize(ctx.du.antipode_coords.col(i));
  CMat out = zeros(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cd cij = c(i * d + j);
      if (cij != cd(0.0)) out += cij * kron(rf[i], rf[j]);
    }
  return TwoCocycle{out};
}

double coboundary_residual(const QgContext& ctx, const CMat& omega, const CMat& omega_tilde,
                           const CMat& x) {
  CMat lhs = omega.adjoint() * kron(x, x);
  CMat rhs = ctx.du.dhat(x, ctx.mu.What) * omega_tilde.adjoint();
  return residual(lhs, rhs);
}

CMat random_mhat_unitary(const QgContext& ctx, Rng& rng) {
  const int d = ctx.d();
  // exp(i h) for a random hermitian element of Mhat stays in Mhat
  CMat h = zeros(d, d);
  for (int k = 0; k < d; ++k) {
    cd z = rng.cnormal();
    CMat t = z * ctx.du.basis.elems[k];
    h += t + t.adjoint();
  }
  Eigen::MatrixXcd ih = cd(0, 1) * Eigen::MatrixXcd(h);
  return CMat(ih.exp());
}

}  // namespace qgal
