#include "qgal/projrep.hpp"

#include <cmath>

namespace qgal {

namespace {

// overlaps of A on L2(M) (x) H against the frame {f_i (x) E_pq} by partial
// contraction: o(i; p,q) = sum_{a,b} conj(f_i(a,b)) A[(a,p),(b,q)]
std::vector<CMat> dual_frame_overlaps(const QgContext& ctx, const CMat& a, int h) {
  const int d = ctx.d();
  std::vector<CMat> out(d, zeros(h, h));
  for (int i = 0; i < d; ++i) {
    const CMat& f = ctx.du.basis.elems[i];
    CMat t = zeros(h, h);
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s) {
        cd c = std::conj(f(r, s));
        if (c == cd(0.0)) continue;
        t += c * a.block(r * h, s * h, h, h);
      }
    out[i] = t;  // since both frames are orthonormal these are the coefficients
  }
  return out;
}

double frame_membership(const QgContext& ctx, const CMat& a, const std::vector<CMat>& coeff) {
  const int d = ctx.d();
  const int h = static_cast<int>(coeff[0].rows());
  CMat rec = zeros(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  for (int i = 0; i < d; ++i) {
    const CMat& f = ctx.du.basis.elems[i];
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s) {
        cd c = f(r, s);
        if (c == cd(0.0)) continue;
        rec.block(r * h, s * h, h, h) += c * coeff[i];
      }
  }
  return (a - rec).norm() / std::max(1.0, a.norm());
}

CMat shift_matrix(int n) {
  CMat v = zeros(n, n);
  for (int k = 0; k < n; ++k) v((k + 1) % n, k) = 1.0;
  return v;
}

}  // namespace

CMat TypeICoaction::upsilon(const CMat& x) const {
  const int dh = static_cast<int>(g_impl.rows());
  const int d = dh / h_dim;
  return g_impl.adjoint() * kron(ident(d), x) * g_impl;
}

ProjectiveCorep regular_corep(const GaloisObject& go) {
  const int l2n = go.l2n_dim();
  ProjectiveCorep pc;
  pc.h_dim = l2n;
  CMat gstar = go.Gt.adjoint();
  pc.g_op = kron(go.jn_conj, ident(l2n)) * gstar.conjugate() *
            kron(go.M.g.j_conj.conjugate(), ident(l2n));
  return pc;
}

Report check_corep(const GaloisObject& go, const LinkingCorners& lc, const ProjectiveCorep& pc) {
  Report rep;
  rep.subject = "corepresentation";
  const double tol = go.M.tol;
  const int d = go.M.d(), l2n = go.l2n_dim(), h = pc.h_dim;

  rep.add("unitarity",
          std::max(residual(CMat(pc.g_op * pc.g_op.adjoint()), ident(l2n * h)),
                   residual(CMat(pc.g_op.adjoint() * pc.g_op), ident(d * h))),
          tol);

  // first-leg expansion over the Nhat corner
  const int nn = lc.nhat.dim();
  std::vector<CMat> bcoef(nn, zeros(h, h));
  {
    CMat rec = zeros(static_cast<int>(pc.g_op.rows()), static_cast<int>(pc.g_op.cols()));
    for (int i = 0; i < nn; ++i) {
      const CMat& t = lc.nhat.elems[i];
      CMat b = zeros(h, h);
      for (int r = 0; r < l2n; ++r)
        for (int s = 0; s < d; ++s) {
          cd c = std::conj(t(r, s));
          if (c == cd(0.0)) continue;
          b += c * pc.g_op.block(r * h, s * h, h, h);
        }
      bcoef[i] = b;
      for (int r = 0; r < l2n; ++r)
        for (int s = 0; s < d; ++s) {
          cd c = t(r, s);
          if (c == cd(0.0)) continue;
          rec.block(r * h, s * h, h, h) += c * b;
        }
    }
    rep.add("first_leg_in_Nhat", (pc.g_op - rec).norm() / std::max(1.0, pc.g_op.norm()),
            tol);
  }

  // (Delta_Nhat (x) i)(G) = G13 G23
  {
    CMat lhs = zeros(l2n * l2n * h, d * d * h);
    for (int i = 0; i < nn; ++i)
      if (bcoef[i].norm() > 1e-14) lhs += kron(delta_nhat(go, lc.nhat.elems[i]), bcoef[i]);
    // G23 = 1_{L2M} (x) G; after it the middle leg is L2N, so G13 is embedded
    // on legs (1,3) of (L2M, L2N, H)
    CMat g23 = kron(ident(d), pc.g_op);
    CMat g13_after = zeros(l2n * l2n * h, d * l2n * h);
    for (int a = 0; a < l2n; ++a)
      for (int k = 0; k < h; ++k)
        for (int b = 0; b < d; ++b)
          for (int l = 0; l < h; ++l) {
            cd v = pc.g_op(a * h + k, b * h + l);
            if (v == cd(0.0)) continue;
            for (int m = 0; m < l2n; ++m)
              g13_after(a * l2n * h + m * h + k, b * l2n * h + m * h + l) = v;
          }
    CMat rhs = g13_after * g23;
    rep.add("corep_identity", residual(lhs, rhs), tol);
  }
  return rep;
}

TypeICoaction induced_coaction(const ProjectiveCorep& pc) {
  return TypeICoaction{pc.h_dim, pc.g_op};
}

Report validate_type_i(const QgContext& ctx, const TypeICoaction& tc) {
  Report rep;
  rep.subject = "type-I coaction";
  const double tol = ctx.tol;
  const int d = ctx.d(), h = tc.h_dim;

  // Upsilon on matrix units, with coefficients in the {f_i (x) E_pq} frame
  std::vector<CMat> ups(h * h);
  std::vector<std::vector<CMat>> coeff(h * h);
  double memb = 0.0;
  for (int k = 0; k < h; ++k)
    for (int l = 0; l < h; ++l) {
      CMat u = tc.upsilon(matrix_unit(h, k, l));
      ups[k * h + l] = u;
      coeff[k * h + l] = dual_frame_overlaps(ctx, u, h);
      memb = std::max(memb, frame_membership(ctx, u, coeff[k * h + l]));
    }
  rep.add("first_leg_in_Mhat", memb, tol);
  rep.add("unital", residual(tc.upsilon(ident(h)), ident(d * h)), tol);

  // homomorphism and star
  {
    double num2 = 0, den2 = 0, snum2 = 0, sden2 = 0;
    for (int k = 0; k < h; ++k)
      for (int l = 0; l < h; ++l) {
        for (int p = 0; p < h; ++p)
          for (int q = 0; q < h; ++q) {
            CMat got = ups[k * h + l] * ups[p * h + q];
            CMat want = (l == p) ? ups[k * h + q] : zeros(d * h, d * h);
            num2 += (got - want).squaredNorm();
            den2 += want.squaredNorm();
          }
        snum2 += (CMat(ups[k * h + l].adjoint()) - ups[l * h + k]).squaredNorm();
        sden2 += ups[l * h + k].squaredNorm();
      }
    rep.add("homomorphism", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
    rep.add("star_compatible", std::sqrt(snum2) / std::max(1.0, std::sqrt(sden2)), tol);
  }
  // injectivity
  rep.add_flag("injective", span_rank(ups) == h * h);
  // left coaction identity at coefficient level:
  // sum_i comult_hat[i](m,n) B^{kl}_i(p,q) = sum_{k'l'} B^{kl}_m(k',l') B^{k'l'}_n(p,q)
  {
    double num2 = 0, den2 = 0;
    for (int k = 0; k < h; ++k)
      for (int l = 0; l < h; ++l) {
        const auto& b = coeff[k * h + l];
        for (int m = 0; m < d; ++m)
          for (int n = 0; n < d; ++n) {
            CMat lhs = zeros(h, h);
            for (int i = 0; i < d; ++i) {
              cd c = ctx.du.qg.comult[i](m, n);
              if (c != cd(0.0)) lhs += c * b[i];
            }
            CMat rhs = zeros(h, h);
            for (int kp = 0; kp < h; ++kp)
              for (int lp = 0; lp < h; ++lp) {
                cd c = b[m](kp, lp);
                if (c != cd(0.0)) rhs += c * coeff[kp * h + lp][n];
              }
            num2 += (lhs - rhs).squaredNorm();
            den2 += lhs.squaredNorm();
          }
      }
    rep.add("coaction_identity", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  }
  return rep;
}

ExtractionResult extract_galois(const QgContext& ctx, const TypeICoaction& tc) {
  ExtractionResult out;
  out.report.subject = "extraction";
  const double tol = ctx.tol;
  const int d = ctx.d(), h = tc.h_dim, dh = d * h;

  // Upsilon on matrix units
  std::vector<CMat> ups(h * h);
  for (int k = 0; k < h; ++k)
    for (int l = 0; l < h; ++l) ups[k * h + l] = tc.upsilon(matrix_unit(h, k, l));

  // crossed product Mhat |x B(H) = alg(Upsilon(B(H)) u M (x) 1): candidates
  // (m_a (x) 1)Upsilon(e_kl) span it when the coaction is well-formed
  std::vector<CMat> m_ops(d);
  for (int a = 0; a < d; ++a) m_ops[a] = kron(ctx.g.pi_l[a], ident(h));
  std::vector<CMat> cand;
  cand.reserve(d * h * h);
  for (int a = 0; a < d; ++a)
    for (int t = 0; t < h * h; ++t) cand.push_back(m_ops[a] * ups[t]);
  const int cand_rank = span_rank(cand);
  out.report.add_flag("crossed_product_span", cand_rank == d * h * h);
  {
    std::vector<CMat> gens;
    gens.push_back(tc.upsilon(shift_matrix(h)));
    gens.push_back(tc.upsilon(matrix_unit(h, 0, 0)));
    for (int a = 0; a < d; ++a) gens.push_back(m_ops[a]);
    AlgebraBasis cp = generated_algebra(gens, cand);
    if (cp.dim() != d * h * h)
      throw HardError("extract_galois: crossed product has dimension " +
                      std::to_string(cp.dim()) + ", expected " + std::to_string(d * h * h) +
                      " (coaction is not well-formed)");
    out.report.add_flag("crossed_product_dim", true);
  }

  // relative commutant through the conditional projection
  // Psi_k(m) = sum_t Upsilon(e_t1)(m (x) 1)Upsilon(e_kt)
  std::vector<CMat> psi;
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < h; ++k) {
      CMat z = zeros(dh, dh);
      for (int t = 0; t < h; ++t) z += ups[t * h + 0] * m_ops[a] * ups[k * h + t];
      psi.push_back(z);
    }
  GaloisObject& go = out.object;
  go.M = ctx;
  go.from_cocycle = false;
  go.h_dim = dh;
  go.N = span_basis(psi);
  const int nn = go.N.dim();
  if (nn != d)
    throw HardError("extract_galois: relative commutant has dimension " +
                    std::to_string(nn) + ", expected " + std::to_string(d));
  {
    double worst = 0.0;
    for (const auto& n : go.N.elems)
      for (int t = 0; t < h * h; ++t)
        worst = std::max(worst, (n * ups[t] - ups[t] * n).norm() /
                                    std::max(1.0, ups[t].norm()));
    out.report.add("commutes_with_Upsilon", worst, tol);
  }

  // restricted dual coaction alpha(x) = V13 x12 V13^* on (L2M (x) H) (x) L2M
  LegSpace three{d, h, d};
  CMat v13 = leg_embed(ctx.mu.V, {1, 3}, three);
  std::vector<CMat> alpha_op(nn);
  for (int i = 0; i < nn; ++i)
    alpha_op[i] = v13 * kron(go.N.elems[i], ident(d)) * v13.adjoint();
  finish_galois_object(go, alpha_op, CMat(), tol);

  // recover the corepresentation from u = G (x) 1 with
  // u(Lambda(m) (x) Ltr(x)) = (Lambda_N (x) Ltr)(Phi(m (x) 1)(1 (x) x)),
  // Phi_ij(m) = sum_k Upsilon(e_ki)(m (x) 1)Upsilon(e_jk)
  CMat u = zeros(nn * h * h, d * h * h);
  std::vector<std::vector<CVec>> lam_phi(d);  // lam_phi[a][i*h+j] = Lambda_N(Phi_ij(e_a))
  for (int a = 0; a < d; ++a) {
    lam_phi[a].resize(h * h);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < h; ++j) {
        CMat phi = zeros(dh, dh);
        for (int k = 0; k < h; ++k) phi += ups[k * h + i] * m_ops[a] * ups[j * h + k];
        double r = 0.0;
        CVec c = expand_in_basis(go.N, phi, &r);
        if (r > 1e-6)
          throw HardError("extract_galois: Phi does not land in the relative commutant");
        lam_phi[a][i * h + j] = go.lambda * c;
      }
  }
  for (int b = 0; b < d; ++b) {
    CVec mb = ctx.g.onb.col(b);  // GNS-onb element of M in coordinates
    for (int j = 0; j < h; ++j)
      for (int l = 0; l < h; ++l) {
        // column (b, e_{jl}); image sum_i Lambda_N(Phi_ij(m_b)) (x) e_i (x) bar e_l
        for (int i = 0; i < h; ++i) {
          CVec acc = CVec::Zero(nn);
          for (int a = 0; a < d; ++a)
            if (mb(a) != cd(0.0)) acc += mb(a) * lam_phi[a][i * h + j];
          for (int r = 0; r < nn; ++r)
            u(r * h * h + i * h + l, b * h * h + j * h + l) = acc(r);
        }
      }
  }
  out.report.add("u_unitary",
                 std::max(residual(CMat(u * u.adjoint()), ident(nn * h * h)),
                          residual(CMat(u.adjoint() * u), ident(d * h * h))),
                 tol);
  // factor u = G (x) 1 by slicing the conjugate leg
  CMat g_ex(nn * h, d * h);
  for (int r = 0; r < nn; ++r)
    for (int i = 0; i < h; ++i)
      for (int b = 0; b < d; ++b)
        for (int j = 0; j < h; ++j) g_ex(r * h + i, b * h + j) = u(r * h * h + i * h, b * h * h + j * h);
  {
    double worst = 0.0;
    CMat rebuilt = zeros(nn * h * h, d * h * h);
    for (int r = 0; r < nn; ++r)
      for (int i = 0; i < h; ++i)
        for (int b = 0; b < d; ++b)
          for (int j = 0; j < h; ++j) {
            cd v = g_ex(r * h + i, b * h + j);
            if (v == cd(0.0)) continue;
            for (int l = 0; l < h; ++l)
              rebuilt(r * h * h + i * h + l, b * h * h + j * h + l) = v;
          }
    worst = residual(rebuilt, u);
    out.report.add("u_factorisation", worst, tol);
  }
  out.corep.h_dim = h;
  out.corep.g_op = g_ex;

  // the extracted corepresentation implements Upsilon
  {
    double worst = 0.0;
    for (int k = 0; k < h; ++k)
      for (int l = 0; l < h; ++l) {
        CMat lhs = g_ex * ups[k * h + l];
        CMat rhs = kron(ident(nn), matrix_unit(h, k, l)) * g_ex;
        worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
      }
    out.report.add("G_implements_Upsilon", worst, tol);
  }
  return out;
}

Report outer_equivalence(const QgContext& ctx, const TypeICoaction& tc1,
                         const TypeICoaction& tc2, const CMat& v) {
  Report rep;
  rep.subject = "outer equivalence";
  const double tol = ctx.tol;
  const int d = ctx.d(), h = tc1.h_dim;
  if (tc2.h_dim != h) throw HardError("outer_equivalence: H dimensions differ");

  rep.add("v_unitary", residual(CMat(v * v.adjoint()), ident(d * h)), tol);
  {
    auto coeff = dual_frame_overlaps(ctx, v, h);
    rep.add("v_first_leg_in_Mhat", frame_membership(ctx, v, coeff), tol);
  }
  // (Dhat (x) i)(v) = v23 (i (x) Upsilon1)(v)
  {
    LegSpace three{d, d, h};
    CMat what12 = leg_embed(ctx.mu.What, {1, 2}, three);
    CMat lhs = what12.adjoint() * leg_embed(v, {2, 3}, three) * what12;
    CMat g1 = kron(ident(d), tc1.g_impl);
    CMat rhs = leg_embed(v, {2, 3}, three) * (g1.adjoint() * leg_embed(v, {1, 3}, three) * g1);
    rep.add("v_is_Upsilon1_cocycle", residual(lhs, rhs), tol);
  }
  // Upsilon2 = v Upsilon1 v^*
  {
    double num2 = 0, den2 = 0;
    for (int k = 0; k < h; ++k)
      for (int l = 0; l < h; ++l) {
        CMat got = v * tc1.upsilon(matrix_unit(h, k, l)) * v.adjoint();
        CMat want = tc2.upsilon(matrix_unit(h, k, l));
        num2 += (got - want).squaredNorm();
        den2 += want.squaredNorm();
      }
    rep.add("conjugates_coactions", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  }
  return rep;
}

ProjectiveCorep conjugate_corep(const ProjectiveCorep& pc, const CMat& w) {
  const int h = pc.h_dim;
  const int rows = static_cast<int>(pc.g_op.rows()) / h;
  const int cols = static_cast<int>(pc.g_op.cols()) / h;
  return ProjectiveCorep{
      h, CMat(kron(ident(rows), w) * pc.g_op * kron(ident(cols), w).adjoint())};
}

Report roundtrip_report(const GaloisObject& go, const LinkingCorners& lc) {
  Report rep;
  rep.subject = "roundtrip";
  const double tol = go.M.tol;
  const int l2n = go.l2n_dim();

  ProjectiveCorep g1 = regular_corep(go);
  rep.merge(check_corep(go, lc, g1), "regular");
  TypeICoaction tc = induced_coaction(g1);
  rep.merge(validate_type_i(go.M, tc), "induced");

  ExtractionResult ex = extract_galois(go.M, tc);
  rep.merge(ex.report, "extract");
  const GaloisObject& go2 = ex.object;

  // canonical unitary: G1 G2^* = v (x) 1
  const int h = g1.h_dim;
  CMat x = g1.g_op * ex.corep.g_op.adjoint();  // L2(N2) (x) H -> L2(N1) (x) H
  const int n2 = go2.l2n_dim();
  CMat v(l2n, n2);
  for (int r = 0; r < l2n; ++r)
    for (int s = 0; s < n2; ++s) v(r, s) = x(r * h, s * h);
  rep.add("v_factorisation", residual(x, kron(v, ident(h))), tol);
  rep.add("v_unitary", residual(CMat(v * v.adjoint()), ident(l2n)), tol);

  // reflections match through Ad(v)
  ReflectedQuantumGroup r1 = reflect(go);
  ReflectedQuantumGroup r2 = reflect(go2);
  const int dp = r2.qg_out.dim;
  CMat psi(dp, dp);
  double memb = 0.0;
  for (int i = 0; i < dp; ++i) {
    double rr = 0.0;
    psi.col(i) = expand_in_basis(r1.phat, CMat(v * r2.phat.elems[i] * v.adjoint()), &rr);
    memb = std::max(memb, rr);
  }
  rep.add("AdV_maps_Phat2_to_Phat1", memb, tol);
  rep.merge(hopf_iso_residual(r2.qg_out, r1.qg_out, psi, tol), "reflection_match");

  // outer equivalence: w-conjugated corep over the same object
  {
    Rng rng(7);
    CMat w = haar_unitary(h, rng);
    ProjectiveCorep g2 = conjugate_corep(g1, w);
    rep.merge(check_corep(go, lc, g2), "conjugated_corep");
    TypeICoaction tc2 = induced_coaction(g2);
    CMat vc = g2.g_op.adjoint() * g1.g_op;
    rep.merge(outer_equivalence(go.M, tc, tc2, vc), "outer_pass");
    Rng rng2(11);
    CMat vrand = haar_unitary(go.M.d() * h, rng2);
    Report neg = outer_equivalence(go.M, tc, tc2, vrand);
    double worst = 0.0;
    for (const auto& c : neg.checks)
      if (c.name == "v_is_Upsilon1_cocycle" || c.name == "conjugates_coactions")
        worst = std::max(worst, c.residual);
    rep.add_negative("outer_fail_random_v", worst, 1e-3);
  }
  return rep;
}

}  // namespace qgal
