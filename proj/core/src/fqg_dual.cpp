#include <cmath>

#include "qgal/fqg.hpp"

// Dual quantum group: Mhat = span{(omega (x) iota)(W)} realised on L2(M),
// re-expressed as structure constants, together with the canonical duality
// pairing <x, lambda(omega)> = omega(x) and the canonical dual GNS map
// <Lambda_hat(lambda(omega)), Lambda(x)> = d^{-1/2} omega(x^*).

namespace qgal {

namespace {

CVec unit_vec(int d, int i) {
  CVec v = CVec::Zero(d);
  v(i) = 1.0;
  return v;
}

// Gram-Schmidt in the given order, keeping independent elements.
std::vector<CMat> gs_in_order(const std::vector<CMat>& cand, int want_rank) {
  std::vector<CMat> kept;
  for (const auto& c : cand) {
    CMat w = c;
    for (const auto& b : kept) w -= hs_dot(b, w) * b;
    for (const auto& b : kept) w -= hs_dot(b, w) * b;
    double n = w.norm();
    if (n > 1e-7 * std::max(1.0, c.norm())) kept.push_back(CMat(w / n));
    if (static_cast<int>(kept.size()) == want_rank) break;
  }
  return kept;
}

}  // namespace

CVec DualData::gns(const CVec& coords) const {
  CVec out = CVec::Zero(gns_vectors.empty() ? 0 : gns_vectors[0].size());
  for (int k = 0; k < static_cast<int>(gns_vectors.size()); ++k)
    out += coords(k) * gns_vectors[k];
  return out;
}

CMat DualData::realize(const CVec& coords) const {
  CMat out = zeros(basis.ambient_dim, basis.ambient_dim);
  for (int k = 0; k < basis.dim(); ++k) out += coords(k) * basis.elems[k];
  return out;
}

CVec DualData::coords_of(const CMat& y, double* resid) const {
  return expand_in_basis(basis, y, resid);
}

CMat DualData::rhat(const CMat& y) const {
  double r = 0.0;
  CVec c = coords_of(y, &r);
  if (r > 1e-6) throw HardError("DualData::rhat: operand is not in Mhat");
  return realize(antipode_coords * c);
}

CMat DualData::dhat(const CMat& y, const CMat& what) const {
  const int d = basis.ambient_dim;
  return what.adjoint() * kron(ident(d), y) * what;
}

DualData dual(const FiniteQuantumGroup& qg, const GnsData& g,
              const MultiplicativeUnitaries& mu, double tol) {
  const int d = qg.dim;
  const double memb_tol = std::max(1e-7, tol);
  DualData out;

  // slices over GNS matrix-unit functionals, orthonormalised in lex order
  std::vector<CMat> slices;
  slices.reserve(d * d);
  LegSpace two{d, d};
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) slices.push_back(slice_entry_left(a, b, mu.W, two));
  int r = span_rank(slices);
  if (r != d) throw HardError("dual: W slices span dimension " + std::to_string(r) +
                              ", expected " + std::to_string(d));
  out.basis.ambient_dim = d;
  out.basis.elems = gs_in_order(slices, d);
  if (out.basis.dim() != d) throw HardError("dual: slice orthonormalisation lost rank");

  // abstract structure constants
  FiniteQuantumGroup& h = out.qg;
  h.name = qg.name + "^";
  h.dim = d;
  h.mult.assign(d, zeros(d, d));
  h.comult.assign(d, zeros(d, d));
  h.unit = expand_in_basis(out.basis, ident(d));
  double memb = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double rr = 0.0;
      CVec c = expand_in_basis(out.basis, CMat(out.basis.elems[i] * out.basis.elems[j]), &rr);
      memb = std::max(memb, rr);
      for (int k = 0; k < d; ++k) h.mult[i](k, j) = c(k);
    }
  }
  if (memb > memb_tol) throw HardError("dual: slices do not span an algebra");

  AlgebraBasis tensor_basis;
  tensor_basis.ambient_dim = d * d;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      tensor_basis.elems.push_back(kron(out.basis.elems[j], out.basis.elems[k]));
  for (int i = 0; i < d; ++i) {
    CMat dh = out.dhat(out.basis.elems[i], mu.What);
    double rr = 0.0;
    CVec c = expand_in_basis(tensor_basis, dh, &rr);
    if (rr > memb_tol) throw HardError("dual: Delta_hat does not land in Mhat (x) Mhat");
    h.comult[i] = unvec_rm(c, d, d);
  }

  // star
  h.star = zeros(d, d);
  for (int i = 0; i < d; ++i) {
    double rr = 0.0;
    CVec c = expand_in_basis(out.basis, CMat(out.basis.elems[i].adjoint()), &rr);
    if (rr > memb_tol) throw HardError("dual: slices are not *-closed");
    h.star.col(i) = c;
  }

  // counit from (eps (x) i)Delta = id
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

  // Haar from left invariance, unique up to scale, normalised at the unit
  {
    Eigen::MatrixXcd sys(d * d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k)
          sys(i * d + j, k) = h.comult[i](j, k) - ((k == i) ? h.unit(j) : cd(0.0));
      }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thr = rank_threshold(d * d, sv(0));
    int nullity = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) <= thr) ++nullity;
    nullity += d - static_cast<int>(sv.size());
    if (nullity != 1)
      throw HardError("dual: Haar invariance system has solution space of dimension " +
                      std::to_string(nullity) + " (expected 1)");
    CVec hvec = svd.matrixV().col(d - 1);
    cd norm = hvec.transpose() * h.unit;
    if (std::abs(norm) < 1e-12) throw HardError("dual: Haar candidate vanishes on the unit");
    h.haar = hvec / norm;
  }

  // canonical pairing: invert omega -> (omega (x) iota)(W) on coordinate
  // functionals realised as densities against pi_l(M)
  {
    CMat gamma(d, d);
    for (int m = 0; m < d; ++m)
      for (int j = 0; j < d; ++j) gamma(m, j) = hs_dot(g.pi_l[m], g.pi_l[j]);
    std::vector<CMat> kmats(d);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gamma.transpose());
    for (int k = 0; k < d; ++k) {
      Eigen::VectorXcd w = lu.solve(Eigen::VectorXcd(unit_vec(d, k)));
      CMat rho = zeros(d, d);
      for (int m = 0; m < d; ++m) rho += w(m) * g.pi_l[m].adjoint();
      kmats[k] = slice_left(rho, mu.W, two);
    }
    Eigen::MatrixXcd lam(d * d, d);
    for (int k = 0; k < d; ++k) lam.col(k) = vec_rm(kmats[k]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(lam, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.pairing = zeros(d, d);
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXcd w = svd.solve(Eigen::VectorXcd(vec_rm(out.basis.elems[j])));
      out.pairing.col(j) = w;  // <e_i, f_j> = w_i
    }
    // canonical dual GNS vectors: eta_b = d^{-1/2} omega(g_b^*)
    out.gns_vectors.resize(d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) {
      CVec eta(d);
      for (int b = 0; b < d; ++b) {
        CVec gb_star = qg.adj(g.onb.col(b));
        eta(b) = scale * (out.pairing.col(j).transpose() * gb_star)(0, 0);
      }
      out.gns_vectors[j] = eta;
    }
  }

  // dual modular conjugation on L2(M) via Lambda_hat
  {
    CMat bmat(d, d);
    for (int j = 0; j < d; ++j) bmat.col(j) = out.gns_vectors[j];
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(bmat);
    if (!lu.isInvertible()) throw HardError("dual: Lambda_hat is degenerate");
    CMat binv = CMat(lu.inverse());
    CMat shat = bmat * h.star * binv.conjugate();
    out.nabla_hat = shat.transpose() * shat.conjugate();
    out.jhat_conj = shat * herm_inv_sqrt(out.nabla_hat).conjugate();
  }

  out.commutant_basis = commutant(out.basis);
  out.antipode_coords = antipode_data(h).S;
  return out;
}

// -- structure transport -----------------------------------------------------------

Report hopf_iso_residual(const FiniteQuantumGroup& a, const FiniteQuantumGroup& b,
                         const CMat& psi, double tol) {
  Report rep;
  rep.subject = a.name + " ~ " + b.name;
  const int d = a.dim;
  if (b.dim != d || psi.rows() != d || psi.cols() != d)
    throw HardError("hopf_iso_residual: dimension mismatch");

  rep.add("unit", residual(CVec(psi * a.unit), b.unit), tol);
  {
    double num2 = 0, den2 = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CVec want = psi * a.mul(unit_vec(d, i), unit_vec(d, j));
        CVec got = b.mul(psi.col(i), psi.col(j));
        num2 += (got - want).squaredNorm();
        den2 += want.squaredNorm();
      }
    rep.add("mult", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  }
  {
    double num2 = 0, den2 = 0;
    for (int i = 0; i < d; ++i) {
      CMat want = psi * a.comult[i] * psi.transpose();  // (psi (x) psi)Delta_a(e_i)
      CMat got = b.comult_of(psi.col(i));
      num2 += (got - want).squaredNorm();
      den2 += want.squaredNorm();
    }
    rep.add("comult", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  }
  rep.add("counit", residual(CVec(psi.transpose() * b.counit), a.counit), tol);
  {
    double num2 = 0, den2 = 0;
    for (int i = 0; i < d; ++i) {
      CVec want = psi * a.adj(unit_vec(d, i));
      CVec got = b.adj(psi.col(i));
      num2 += (got - want).squaredNorm();
      den2 += want.squaredNorm();
    }
    rep.add("star", std::sqrt(num2) / std::max(1.0, std::sqrt(den2)), tol);
  }
  rep.add("haar", residual(CVec(psi.transpose() * b.haar), a.haar), tol);
  return rep;
}

Report bidual_match(const QgContext& ctx, double tol) {
  GnsData g2 = gns(ctx.du.qg);
  MultiplicativeUnitaries mu2 = multiplicative_unitary(ctx.du.qg, g2, tol);
  DualData du2 = dual(ctx.du.qg, g2, mu2, tol);

  // <f_j, Phi(e_i)>_2 = <S(e_i), f_j>_1  =>  p2 * Gamma = p1^T * S
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(du2.pairing);
  if (!lu.isInvertible()) throw HardError("bidual_match: degenerate pairing");
  CMat gamma = CMat(lu.solve(Eigen::MatrixXcd(ctx.du.pairing.transpose() * ctx.anti.S)));
  Report rep = hopf_iso_residual(ctx.qg, du2.qg, gamma, tol);
  rep.subject = ctx.qg.name + " ~ dual(dual)";
  return rep;
}

Report dual_match_reference(const QgContext& ctx, const FiniteQuantumGroup& ref,
                            const CMat& ref_pairing, double tol) {
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(ctx.du.pairing);
  if (!lu.isInvertible()) throw HardError("dual_match_reference: degenerate pairing");
  CMat psi = CMat(lu.solve(Eigen::MatrixXcd(ref_pairing)));
  Report rep = hopf_iso_residual(ref, ctx.du.qg, psi, tol);
  rep.subject = ref.name + " ~ " + ctx.qg.name + "^";
  return rep;
}

}  // namespace qgal
