#include "qgal/reflection.hpp"

#include <cmath>

namespace qgal {

namespace {

CVec unit_vec(int d, int i) {
  CVec v = CVec::Zero(d);
  v(i) = 1.0;
  return v;
}

// HS-orthonormal expansion for rectangular families (corner elements)
CVec expand_rect(const std::vector<CMat>& onb, const CMat& x, double* resid) {
  CVec c(static_cast<Eigen::Index>(onb.size()));
  CMat rec = zeros(static_cast<int>(x.rows()), static_cast<int>(x.cols()));
  for (size_t k = 0; k < onb.size(); ++k) {
    c(static_cast<Eigen::Index>(k)) = hs_dot(onb[k], x);
    rec += c(static_cast<Eigen::Index>(k)) * onb[k];
  }
  if (resid) *resid = (x - rec).norm() / std::max(1.0, x.norm());
  return c;
}

}  // namespace

CMat delta_nhat(const GaloisObject& go, const CMat& x) {
  const int d = go.M.d(), l2n = go.l2n_dim();
  (void)l2n;
  return go.Gt.adjoint() * kron(ident(d), x) * go.M.mu.What;
}

CMat delta_ohat(const GaloisObject& go, const CMat& y) {
  return CMat(delta_nhat(go, CMat(y.adjoint())).adjoint());
}

CMat delta_phat(const GaloisObject& go, const CMat& x) {
  const int d = go.M.d();
  return go.Gt.adjoint() * kron(ident(d), x) * go.Gt;
}

CMat delta_mhat(const GaloisObject& go, const CMat& y) {
  const int d = go.M.d();
  return go.M.mu.What.adjoint() * kron(ident(d), y) * go.M.mu.What;
}

LinkingCorners intertwiner_corner(const GaloisObject& go) {
  LinkingCorners lc;
  const double tol = go.M.tol;
  lc.report.subject = "linking corners";
  lc.nhat = nhat_corner(go);
  for (const auto& t : lc.nhat.elems) lc.ohat.elems.push_back(t.adjoint());
  lc.phat = commutant(
      [&] {
        std::vector<CMat> gens;
        for (const auto& m : go.M.du.commutant_basis.elems) gens.push_back(go.pi_hat(m));
        return gens;
      }(),
      go.l2n_dim());
  lc.mhat = go.M.du.basis;

  // intertwiner property of the corner
  {
    const auto& jh = go.M.du.jhat_conj;
    double num2 = 0, den2 = 0;
    for (const auto& t : lc.nhat.elems)
      for (const auto& m : go.M.du.basis.elems) {
        CMat pr_m = aunitary_sandwich(jh, CMat(m.adjoint()), jh);
        CMat lhs = t * pr_m;
        CMat rhs = go.pi_hat(pr_m) * t;
        num2 += (lhs - rhs).squaredNorm();
        den2 += rhs.squaredNorm();
      }
    lc.report.add("intertwining", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  }
  // span(Nhat Ohat) = Phat, span(Ohat Nhat) = Mhat
  {
    std::vector<CMat> no, on;
    for (const auto& a : lc.nhat.elems)
      for (const auto& b : lc.ohat.elems) {
        no.push_back(a * b);
        on.push_back(b * a);
      }
    lc.report.add("NO_spans_Phat", span_equality(span_basis(no), lc.phat), tol);
    lc.report.add("ON_spans_Mhat", span_equality(span_basis(on), lc.mhat), tol);
  }
  lc.report.add_flag("corner_dims",
                     lc.nhat.dim() == go.M.d() && lc.phat.dim() == go.M.d());
  return lc;
}

Report corner_coproducts(const GaloisObject& go, const LinkingCorners& lc) {
  Report rep;
  rep.subject = "corner coproducts";
  const double tol = go.M.tol;
  const int d = go.M.d(), l2n = go.l2n_dim();

  // tensor-square corner frames
  std::vector<CMat> nn2, oo2, pp2, mm2;
  for (const auto& a : lc.nhat.elems)
    for (const auto& b : lc.nhat.elems) nn2.push_back(kron(a, b));
  for (const auto& a : lc.ohat.elems)
    for (const auto& b : lc.ohat.elems) oo2.push_back(kron(a, b));
  for (const auto& a : lc.phat.elems)
    for (const auto& b : lc.phat.elems) pp2.push_back(kron(a, b));
  for (const auto& a : lc.mhat.elems)
    for (const auto& b : lc.mhat.elems) mm2.push_back(kron(a, b));

  // gelem membership + coassociativity, corner by corner
  auto corner_check = [&](const std::string& name, const std::vector<CMat>& corner,
                          const std::vector<CMat>& frame2,
                          const std::function<CMat(const CMat&)>& delta) {
    double memb = 0.0, num2 = 0.0, den2 = 0.0;
    for (const auto& x : corner) {
      CMat dx = delta(x);
      double r = 0.0;
      CVec c = expand_rect(frame2, dx, &r);
      memb = std::max(memb, r);
      const int n2 = static_cast<int>(corner.size());
      // (Delta (x) i) vs (i (x) Delta) through the coefficients of dx
      CMat lhs = zeros(static_cast<int>(delta(corner[0]).rows()) * static_cast<int>(corner[0].rows()),
                       static_cast<int>(delta(corner[0]).cols()) * static_cast<int>(corner[0].cols()));
      CMat rhs = lhs;
      for (int j = 0; j < n2; ++j)
        for (int k = 0; k < n2; ++k) {
          cd cjk = c(j * n2 + k);
          if (std::abs(cjk) < 1e-14) continue;
          lhs += cjk * kron(delta(corner[j]), corner[k]);
          rhs += cjk * kron(corner[j], delta(corner[k]));
        }
      num2 += (lhs - rhs).squaredNorm();
      den2 += lhs.squaredNorm();
    }
    rep.add(name + "_membership", memb, tol);
    rep.add(name + "_coassociativity", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  };

  corner_check("Nhat", lc.nhat.elems, nn2,
               [&](const CMat& x) { return delta_nhat(go, x); });
  corner_check("Ohat", lc.ohat.elems, oo2,
               [&](const CMat& x) { return delta_ohat(go, x); });
  corner_check("Phat", lc.phat.elems, pp2,
               [&](const CMat& x) { return delta_phat(go, x); });
  corner_check("Mhat", lc.mhat.elems, mm2,
               [&](const CMat& x) { return delta_mhat(go, x); });

  // non-unitality: Delta_Q(1) = 1_M (x) 1_M + 1_P (x) 1_P on (L2N (+) L2M)^{(x)2}
  {
    const int dd = l2n + d;
    auto embed = [&](const CMat& z, bool row1_n, bool row2_n, bool col1_n, bool col2_n) {
      // z maps (col1 (x) col2) -> (row1 (x) row2), corners N=true, M=false
      CMat out = zeros(dd * dd, dd * dd);
      const int r1 = row1_n ? l2n : d, r2 = row2_n ? l2n : d;
      const int c1 = col1_n ? l2n : d, c2 = col2_n ? l2n : d;
      const int or1 = row1_n ? 0 : l2n, or2 = row2_n ? 0 : l2n;
      const int oc1 = col1_n ? 0 : l2n, oc2 = col2_n ? 0 : l2n;
      for (int i = 0; i < r1; ++i)
        for (int k = 0; k < r2; ++k)
          for (int j = 0; j < c1; ++j)
            for (int l = 0; l < r2 && l < c2; ++l) {
              cd v = z(i * r2 + k, j * c2 + l);
              if (v == cd(0.0)) continue;
              out((or1 + i) * dd + (or2 + k), (oc1 + j) * dd + (oc2 + l)) = v;
            }
      return out;
    };
    CMat dq1 = embed(delta_phat(go, ident(l2n)), true, true, true, true) +
               embed(delta_mhat(go, ident(d)), false, false, false, false);
    CMat want = zeros(dd * dd, dd * dd);
    for (int i = 0; i < l2n; ++i)
      for (int k = 0; k < l2n; ++k) want(i * dd + k, i * dd + k) = 1.0;
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        want((l2n + i) * dd + (l2n + k), (l2n + i) * dd + (l2n + k)) = 1.0;
    rep.add("DeltaQ_unit_sum_of_corners", residual(dq1, want), tol);
    CMat full = ident(dd * dd);
    rep.add_negative("DeltaQ_not_unital", residual(dq1, full), 1e-3);
  }
  return rep;
}

Report unitary_antipode_q(const GaloisObject& go, const LinkingCorners& lc) {
  Report rep;
  rep.subject = "unitary antipode R_Q";
  const double tol = go.M.tol;
  const auto& jn = go.jn_conj;
  const auto& jm = go.M.g.j_conj;

  auto r_phat = [&](const CMat& x) { return aunitary_sandwich(jn, CMat(x.adjoint()), jn); };
  auto r_mhat = [&](const CMat& y) { return aunitary_sandwich(jm, CMat(y.adjoint()), jm); };
  auto r_nhat = [&](const CMat& x) { return aunitary_sandwich(jm, CMat(x.adjoint()), jn); };
  auto r_ohat = [&](const CMat& y) { return aunitary_sandwich(jn, CMat(y.adjoint()), jm); };

  // involutivity on all corners
  {
    double worst = 0.0;
    for (const auto& x : lc.phat.elems) worst = std::max(worst, residual(r_phat(r_phat(x)), x));
    for (const auto& y : lc.mhat.elems) worst = std::max(worst, residual(r_mhat(r_mhat(y)), y));
    for (const auto& x : lc.nhat.elems) worst = std::max(worst, residual(r_ohat(r_nhat(x)), x));
    rep.add("involutive", worst, tol);
  }
  // anti-multiplicativity across corners: R(x y^*) = R(y^*) R(x) for x,y in Nhat
  {
    double num2 = 0, den2 = 0;
    for (const auto& x : lc.nhat.elems)
      for (const auto& y : lc.nhat.elems) {
        CMat prod = x * y.adjoint();  // in Phat
        CMat lhs = r_phat(prod);
        CMat rhs = r_ohat(CMat(y.adjoint())) * r_nhat(x);
        num2 += (lhs - rhs).squaredNorm();
        den2 += lhs.squaredNorm();
      }
    rep.add("antimultiplicative", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  }
  // lem14 on the Nhat corner: Delta_Ohat(R(x)) = (R (x) R)(Delta_Nhat^op(x))
  {
    std::vector<CMat> nn2;
    for (const auto& a : lc.nhat.elems)
      for (const auto& b : lc.nhat.elems) nn2.push_back(kron(a, b));
    double num2 = 0, den2 = 0;
    const int n2 = lc.nhat.dim();
    for (const auto& x : lc.nhat.elems) {
      CVec c = expand_rect(nn2, delta_nhat(go, x), nullptr);
      CMat rhs = zeros(static_cast<int>(lc.ohat.elems[0].rows() * lc.ohat.elems[0].rows()),
                       static_cast<int>(lc.ohat.elems[0].cols() * lc.ohat.elems[0].cols()));
      for (int j = 0; j < n2; ++j)
        for (int k = 0; k < n2; ++k) {
          cd cjk = c(j * n2 + k);
          if (std::abs(cjk) < 1e-14) continue;
          // Delta^op flips the tensor factors
          rhs += cjk * kron(r_nhat(lc.nhat.elems[k]), r_nhat(lc.nhat.elems[j]));
        }
      CMat lhs = delta_ohat(go, r_nhat(x));
      num2 += (lhs - rhs).squaredNorm();
      den2 += lhs.squaredNorm();
    }
    rep.add("lem14_Nhat", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  }
  // lem14 on the Phat and Mhat corners
  {
    double num2 = 0, den2 = 0;
    std::vector<CMat> pp2;
    for (const auto& a : lc.phat.elems)
      for (const auto& b : lc.phat.elems) pp2.push_back(kron(a, b));
    const int n2 = lc.phat.dim();
    for (const auto& x : lc.phat.elems) {
      CVec c = expand_rect(pp2, delta_phat(go, x), nullptr);
      CMat rhs = zeros(static_cast<int>(pp2[0].rows()), static_cast<int>(pp2[0].cols()));
      for (int j = 0; j < n2; ++j)
        for (int k = 0; k < n2; ++k) {
          cd cjk = c(j * n2 + k);
          if (std::abs(cjk) < 1e-14) continue;
          rhs += cjk * kron(r_phat(lc.phat.elems[k]), r_phat(lc.phat.elems[j]));
        }
      CMat lhs = delta_phat(go, r_phat(x));
      num2 += (lhs - rhs).squaredNorm();
      den2 += lhs.squaredNorm();
    }
    rep.add("lem14_Phat", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  }
  return rep;
}

ReflectedQuantumGroup reflect(const GaloisObject& go) {
  ReflectedQuantumGroup out;
  out.witness.subject = "reflection";
  const double tol = go.M.tol;
  const int l2n = go.l2n_dim();

  std::vector<CMat> gens;
  for (const auto& m : go.M.du.commutant_basis.elems) gens.push_back(go.pi_hat(m));
  out.phat = commutant(gens, l2n);
  const int d = out.phat.dim();

  FiniteQuantumGroup& h = out.qg_out;
  h.name = "reflect(" + go.M.qg.name + (go.from_cocycle ? ",cocycle)" : ",coaction)");
  h.dim = d;
  h.mult.assign(d, zeros(d, d));
  h.comult.assign(d, zeros(d, d));
  double memb = 0.0, worst = 0.0;
  h.unit = expand_in_basis(out.phat, ident(l2n), &memb);
  worst = std::max(worst, memb);
  h.star = zeros(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      CVec c = expand_in_basis(out.phat, CMat(out.phat.elems[i] * out.phat.elems[j]), &memb);
      worst = std::max(worst, memb);
      for (int k = 0; k < d; ++k) h.mult[i](k, j) = c(k);
    }
    h.star.col(i) = expand_in_basis(out.phat, CMat(out.phat.elems[i].adjoint()), &memb);
    worst = std::max(worst, memb);
  }
  out.witness.add("Phat_algebra_closure", worst, tol);

  // comultiplication from Delta_Phat
  std::vector<CMat> pp2;
  for (const auto& a : out.phat.elems)
    for (const auto& b : out.phat.elems) pp2.push_back(kron(a, b));
  double cmemb = 0.0;
  for (int i = 0; i < d; ++i) {
    double r = 0.0;
    CVec c = expand_rect(pp2, delta_phat(go, out.phat.elems[i]), &r);
    cmemb = std::max(cmemb, r);
    h.comult[i] = unvec_rm(c, d, d);
  }
  out.witness.add("Delta_Phat_membership", cmemb, tol);
  if (cmemb > 1e-6)
    throw HardError("reflect: Delta_Phat does not land in Phat (x) Phat");

  // counit
  {
    Eigen::MatrixXcd sys(d * d, d);
    Eigen::VectorXcd rhs(d * d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        rhs(i * d + k) = (i == k) ? 1.0 : 0.0;
        for (int j = 0; j < d; ++j) sys(i * d + k, j) = h.comult[i](j, k);
      }
    h.counit = sys.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  }
  // Haar from left invariance
  {
    Eigen::MatrixXcd sys(d * d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          sys(i * d + j, k) = h.comult[i](j, k) - ((k == i) ? h.unit(j) : cd(0.0));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thr = rank_threshold(d * d, sv(0));
    int nullity = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) <= thr) ++nullity;
    if (nullity != 1)
      throw HardError("reflect: Haar invariance solution space has dimension " +
                      std::to_string(nullity) + " (expected 1, violates uniqueness)");
    CVec hv = svd.matrixV().col(d - 1);
    cd norm = hv.transpose() * h.unit;
    if (std::abs(norm) < 1e-12) throw HardError("reflect: Haar candidate vanishes on the unit");
    h.haar = hv / norm;
    out.witness.add_flag("haar_unique", true);
  }
  return out;
}

Report reflect_matches_dual(const GaloisObject& go, const ReflectedQuantumGroup& refl) {
  // both bases realised on the same space (cocycle objects: L2N = L2M)
  const int d = refl.qg_out.dim;
  CMat psi(d, d);
  double memb = 0.0;
  for (int i = 0; i < d; ++i) {
    double r = 0.0;
    psi.col(i) = expand_in_basis(go.M.du.basis, refl.phat.elems[i], &r);
    memb = std::max(memb, r);
  }
  Report rep = hopf_iso_residual(refl.qg_out, go.M.du.qg, psi, go.M.tol);
  rep.subject = "reflect(trivial) ~ dual";
  rep.add("Phat_equals_Mhat_span", memb, go.M.tol);
  return rep;
}

Report reflect_matches_twist(const GaloisObject& go, const ReflectedQuantumGroup& refl) {
  Report rep;
  rep.subject = "reflect ~ Omega-twist";
  const double tol = go.M.tol;
  rep.add("Phat_equals_Mhat_span", span_equality(refl.phat, go.M.du.basis), tol);
  double num2 = 0, den2 = 0;
  for (const auto& m : go.M.du.basis.elems) {
    CMat lhs = delta_phat(go, m);
    CMat rhs = go.omega * go.M.du.dhat(m, go.M.mu.What) * go.omega.adjoint();
    num2 += (lhs - rhs).squaredNorm();
    den2 += rhs.squaredNorm();
  }
  rep.add("Delta_Phat_equals_twisted", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  return rep;
}

Report twisted_multiplicative_unitary(const GaloisObject& go,
                                      const ReflectedQuantumGroup& refl) {
  Report rep;
  rep.subject = "What_Omega";
  const double tol = go.M.tol;
  if (!go.from_cocycle) throw HardError("twisted_multiplicative_unitary: needs a cocycle object");
  const QgContext& ctx = go.M;
  const int d = ctx.d();

  // (a) closed formula
  CMat k1 = kron(go.jn_conj, ctx.du.jhat_conj);
  CMat k2 = kron(ctx.g.j_conj, ctx.du.jhat_conj);
  CMat l1 = go.omega * ctx.mu.What.adjoint();
  CMat wf = k1 * (l1 * k2).conjugate() * go.omega.adjoint();

  rep.add("formula_unitary",
          std::max(residual(CMat(wf * wf.adjoint()), ident(d * d)),
                   residual(CMat(wf.adjoint() * wf), ident(d * d))),
          tol);
  {
    LegSpace three{d, d, d};
    CMat f12 = leg_embed(wf, {1, 2}, three), f13 = leg_embed(wf, {1, 3}, three),
         f23 = leg_embed(wf, {2, 3}, three);
    rep.add("pentagon", residual(CMat(f12 * f13 * f23), CMat(f23 * f12)), tol);
  }

  // (b) the multiplicative unitary of the reflected quantum group, carried to
  // L2(M) by the canonical GNS map Lambda(y) = Jhat nabla_N^{1/2} y^* Jhat Lambda_hat(1)
  GnsData g2 = gns(refl.qg_out);
  MultiplicativeUnitaries mu2 = multiplicative_unitary(refl.qg_out, g2, tol);
  CVec lam1 = ctx.du.gns(ctx.du.qg.unit);           // Lambda_hat(1)
  CVec eta0 = ctx.du.jhat_conj * lam1.conjugate();  // Jhat Lambda_hat(1)
  CMat sq = herm_sqrt(go.nabla_N);
  CMat u(d, d);
  for (int a = 0; a < d; ++a) {
    CVec coords = g2.onb.col(a);  // GNS-orthonormal basis of Phat in its own coordinates
    CMat y = zeros(d, d);
    for (int i = 0; i < d; ++i) y += coords(i) * refl.phat.elems[i];
    CVec xi = y.adjoint() * eta0;
    u.col(a) = ctx.du.jhat_conj * (sq * xi).conjugate();
  }
  rep.add("gns_transport_unitary", residual(CMat(u.adjoint() * u), ident(d)), tol);
  CMat wb = kron(u, u) * mu2.W * kron(u, u).adjoint();
  rep.add("formula_vs_reflected_route", residual(wf, wb), tol);
  return rep;
}

double cocommutativity_residual(const FiniteQuantumGroup& qg) {
  double num2 = 0, den2 = 0;
  for (int i = 0; i < qg.dim; ++i) {
    num2 += (qg.comult[i] - CMat(qg.comult[i].transpose())).squaredNorm();
    den2 += qg.comult[i].squaredNorm();
  }
  return std::sqrt(num2) / std::max(1.0, std::sqrt(den2));
}

double commutativity_residual(const FiniteQuantumGroup& qg) {
  double num2 = 0, den2 = 0;
  CVec x = CVec::Zero(qg.dim);
  for (int i = 0; i < qg.dim; ++i)
    for (int j = 0; j < qg.dim; ++j) {
      CVec a = qg.mul(CVec(CVec::Unit(qg.dim, i)), CVec(CVec::Unit(qg.dim, j)));
      CVec b = qg.mul(CVec(CVec::Unit(qg.dim, j)), CVec(CVec::Unit(qg.dim, i)));
      num2 += (a - b).squaredNorm();
      den2 += b.squaredNorm();
    }
  (void)x;
  return std::sqrt(num2) / std::max(1.0, std::sqrt(den2));
}

}  // namespace qgal
