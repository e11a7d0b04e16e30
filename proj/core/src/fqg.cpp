#include "qgal/fqg.hpp"

#include <cmath>

namespace qgal {

// -- FiniteQuantumGroup helpers ------------------------------------------------

CVec FiniteQuantumGroup::mul(const CVec& x, const CVec& y) const {
  CVec out = CVec::Zero(dim);
  for (int i = 0; i < dim; ++i)
    if (x(i) != cd(0.0)) out += x(i) * (mult[i] * y);
  return out;
}

CVec FiniteQuantumGroup::adj(const CVec& x) const { return star * x.conjugate(); }

CMat FiniteQuantumGroup::mul_left(const CVec& x) const {
  CMat out = zeros(dim, dim);
  for (int i = 0; i < dim; ++i)
    if (x(i) != cd(0.0)) out += x(i) * mult[i];
  return out;
}

CMat FiniteQuantumGroup::comult_of(const CVec& x) const {
  CMat out = zeros(dim, dim);
  for (int i = 0; i < dim; ++i)
    if (x(i) != cd(0.0)) out += x(i) * comult[i];
  return out;
}

CMat GnsData::pi(const CVec& coords) const {
  CMat l = zeros(onb.rows(), onb.cols());
  for (int i = 0; i < onb.rows(); ++i)
    if (coords(i) != cd(0.0)) l += coords(i) * pi_l[i];
  return l;
}

// -- validation -----------------------------------------------------------------

namespace {

// concatenated-residual accumulator: residual of the stacked differences
struct Acc {
  double num2 = 0.0, den2 = 0.0;
  void add(const CVec& got, const CVec& want) {
    num2 += (got - want).squaredNorm();
    den2 += want.squaredNorm();
  }
  void add(const CMat& got, const CMat& want) {
    num2 += (got - want).squaredNorm();
    den2 += want.squaredNorm();
  }
  double value() const { return std::sqrt(num2) / std::max(1.0, std::sqrt(den2)); }
};

CVec unit_vec(int d, int i) {
  CVec v = CVec::Zero(d);
  v(i) = 1.0;
  return v;
}

}  // namespace

CMat gram_matrix(const FiniteQuantumGroup& qg) {
  const int d = qg.dim;
  CMat g(d, d);
  for (int i = 0; i < d; ++i) {
    CVec ei_star = qg.adj(unit_vec(d, i));
    for (int j = 0; j < d; ++j) g(i, j) = qg.eval_haar(qg.mul(ei_star, unit_vec(d, j)));
  }
  return g;
}

ValidationReport validate(const FiniteQuantumGroup& qg, double tol) {
  ValidationReport rep;
  rep.subject = qg.name;
  const int d = qg.dim;
  if (d <= 0) throw HardError("validate: empty quantum group");
  if (static_cast<int>(qg.mult.size()) != d || static_cast<int>(qg.comult.size()) != d)
    throw HardError("validate: structure tensor shape mismatch");

  // associativity and unit
  {
    Acc acc, accu;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CVec eij = qg.mul(unit_vec(d, i), unit_vec(d, j));
        for (int k = 0; k < d; ++k) {
          CVec l = qg.mul(eij, unit_vec(d, k));
          CVec r = qg.mul(unit_vec(d, i), qg.mul(unit_vec(d, j), unit_vec(d, k)));
          acc.add(l, r);
        }
        accu.add(qg.mul(qg.unit, unit_vec(d, i)), unit_vec(d, i));
        accu.add(qg.mul(unit_vec(d, i), qg.unit), unit_vec(d, i));
      }
    rep.add("associativity", acc.value(), tol);
    rep.add("unitality", accu.value(), tol);
  }

  // coassociativity
  {
    Acc acc;
    for (int i = 0; i < d; ++i) {
      // (Delta (x) i)Delta(e_i) coefficients over (a,b,k) vs (i (x) Delta)
      CVec l = CVec::Zero(d * d * d), r = CVec::Zero(d * d * d);
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          cd c = qg.comult[i](j, k);
          if (c == cd(0.0)) continue;
          for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
              l((a * d + b) * d + k) += c * qg.comult[j](a, b);
              r((j * d + a) * d + b) += c * qg.comult[k](a, b);
            }
        }
      acc.add(l, r);
    }
    rep.add("coassociativity", acc.value(), tol);
  }

  // counit law
  {
    Acc acc;
    for (int i = 0; i < d; ++i) {
      CVec left = CVec::Zero(d), right = CVec::Zero(d);
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          left(k) += qg.counit(j) * qg.comult[i](j, k);
          right(j) += qg.counit(k) * qg.comult[i](j, k);
        }
      acc.add(left, unit_vec(d, i));
      acc.add(right, unit_vec(d, i));
    }
    rep.add("counit", acc.value(), tol);
  }

  // star: involution and anti-multiplicativity
  {
    rep.add("star_involution", residual(CMat(qg.star * qg.star.conjugate()), ident(d)), tol);
    Acc acc;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CVec l = qg.adj(qg.mul(unit_vec(d, i), unit_vec(d, j)));
        CVec r = qg.mul(qg.adj(unit_vec(d, j)), qg.adj(unit_vec(d, i)));
        acc.add(l, r);
      }
    rep.add("star_antimultiplicative", acc.value(), tol);
  }

  // Delta is a *-homomorphism
  {
    Acc hom, sta;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        CMat want = qg.comult_of(qg.mul(unit_vec(d, i), unit_vec(d, j)));
        CMat got = zeros(d, d);
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            cd ci = qg.comult[i](a, b);
            if (ci == cd(0.0)) continue;
            for (int c = 0; c < d; ++c)
              for (int e = 0; e < d; ++e) {
                cd cj = qg.comult[j](c, e);
                if (cj == cd(0.0)) continue;
                got += (ci * cj) * (qg.mult[a].col(c) * qg.mult[b].col(e).transpose());
              }
          }
        hom.add(got, want);
      }
      // Delta(x^*) = (* (x) *) Delta(x)
      CMat want = qg.comult_of(qg.adj(unit_vec(d, i)));
      CMat got = qg.star * qg.comult[i].conjugate() * qg.star.transpose();
      sta.add(got, want);
    }
    rep.add("comult_homomorphism", hom.value(), tol);
    rep.add("comult_star_compatible", sta.value(), tol);
  }

  // Haar state: positivity (hard), normalisation, two-sided invariance
  {
    CMat g = gram_matrix(qg);
    rep.add("gram_hermitian", residual(CMat(g.adjoint()), g), tol);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin <= rank_threshold(d, es.eigenvalues().maxCoeff()))
      throw HardError("validate: Haar state is not faithful and positive "
                      "(GNS Gram matrix is not positive definite)");
    rep.add("haar_normalised", std::abs(qg.eval_haar(qg.unit) - cd(1.0)), tol);

    Acc left, right;
    for (int i = 0; i < d; ++i) {
      CVec li = CVec::Zero(d), ri = CVec::Zero(d);
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          li(j) += qg.comult[i](j, k) * qg.haar(k);
          ri(k) += qg.comult[i](j, k) * qg.haar(j);
        }
      CVec want = qg.eval_haar(unit_vec(d, i)) * qg.unit;
      left.add(li, want);
      right.add(ri, want);
    }
    rep.add("haar_left_invariance", left.value(), tol);
    rep.add("haar_right_invariance", right.value(), tol);
  }

  // finite-dimensional rigidity: S^2 = id and tracial Haar (computed, not
  // assumed; failures flag malformed inputs)
  {
    AntipodeData anti = antipode_data(qg);
    rep.add("antipode_squared", anti.s_squared_residual, tol);
    Acc acc;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        cd a = qg.eval_haar(qg.mul(unit_vec(d, i), unit_vec(d, j)));
        cd b = qg.eval_haar(qg.mul(unit_vec(d, j), unit_vec(d, i)));
        acc.num2 += std::norm(a - b);
        acc.den2 += std::norm(b);
      }
    rep.add("haar_tracial", acc.value(), tol);
  }

  return rep;
}

// -- GNS ------------------------------------------------------------------------

GnsData gns(const FiniteQuantumGroup& qg) {
  const int d = qg.dim;
  GnsData out;
  out.gram = gram_matrix(qg);
  CMat herm = 0.5 * (out.gram + CMat(out.gram.adjoint()));
  Eigen::LLT<Eigen::MatrixXcd> llt(herm);
  if (llt.info() != Eigen::Success)
    throw HardError("gns: Gram matrix is not positive definite");
  CMat l = CMat(llt.matrixL());
  out.onb = CMat(l.adjoint()).inverse();  // columns: onb coordinates
  out.onb_inv = CMat(l.adjoint());
  out.pi_l.resize(d);
  for (int i = 0; i < d; ++i) out.pi_l[i] = out.onb_inv * qg.mult[i] * out.onb;
  out.s_op = out.onb_inv * qg.star * out.onb.conjugate();
  out.nabla = out.s_op.transpose() * out.s_op.conjugate();
  out.j_conj = out.s_op * herm_inv_sqrt(out.nabla).conjugate();
  return out;
}

// -- multiplicative unitaries -----------------------------------------------------

namespace {

// GNS coordinates of an M (x) M element given by its e-basis coefficient matrix
CVec tensor_to_l2(const GnsData& g, const CMat& coeff) {
  CMat xi = g.onb_inv * coeff * g.onb_inv.transpose();
  return vec_rm(xi);
}

}  // namespace

MultiplicativeUnitaries multiplicative_unitary(const FiniteQuantumGroup& qg,
                                               const GnsData& g, double tol) {
  const int d = qg.dim;
  MultiplicativeUnitaries out;
  CMat wstar(d * d, d * d), v(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    CVec fa = g.onb.col(a);
    CMat la = qg.mul_left(fa);
    for (int b = 0; b < d; ++b) {
      CVec fb = g.onb.col(b);
      // W^*: Delta(f_b)(f_a (x) 1), coefficients X(p,k) = sum_j D(j,k) (e_j f_a)_p
      {
        CMat dd = qg.comult_of(fb);
        CMat x = zeros(d, d);
        for (int j = 0; j < d; ++j) {
          CVec col = qg.mult[j] * fa;  // (e_j f_a) coordinates
          x += col * dd.row(j);
        }
        wstar.col(a * d + b) = tensor_to_l2(g, x);
      }
      // V: Delta(f_a)(1 (x) f_b), coefficients X(j,q) = sum_k D(j,k) (e_k f_b)_q
      {
        CMat dd = qg.comult_of(fa);
        CMat x = zeros(d, d);
        for (int k = 0; k < d; ++k) {
          CVec col = qg.mult[k] * fb;
          x += dd.col(k) * col.transpose();
        }
        v.col(a * d + b) = tensor_to_l2(g, x);
      }
    }
  }
  out.W = wstar.adjoint();
  out.V = v;
  if (residual(CMat(out.W * out.W.adjoint()), ident(d * d)) > tol ||
      residual(CMat(out.W.adjoint() * out.W), ident(d * d)) > tol)
    throw HardError("multiplicative_unitary: W is not unitary (invalid quantum group)");
  if (residual(CMat(out.V * out.V.adjoint()), ident(d * d)) > tol)
    throw HardError("multiplicative_unitary: V is not unitary (invalid quantum group)");
  CMat s = flip(d, d);
  out.What = s * out.W.adjoint() * s;
  return out;
}

// -- antipode ---------------------------------------------------------------------

AntipodeData antipode_data(const FiniteQuantumGroup& qg) {
  const int d = qg.dim;
  // rows (i,l), unknowns S(a,j): sum_{j,k,a} c_i^{jk} S_{aj} m^l_{ak} = eps_i u_l
  Eigen::MatrixXcd sys(d * d, d * d);
  Eigen::VectorXcd rhs(d * d);
  for (int i = 0; i < d; ++i)
    for (int l = 0; l < d; ++l) {
      rhs(i * d + l) = qg.counit(i) * qg.unit(l);
      for (int a = 0; a < d; ++a)
        for (int j = 0; j < d; ++j) {
          cd q = 0.0;
          for (int k = 0; k < d; ++k) q += qg.comult[i](j, k) * qg.mult[a](l, k);
          sys(i * d + l, a * d + j) = q;
        }
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= rank_threshold(d * d, sv(0)))
    throw HardError("antipode_data: antipode system is singular (invalid Hopf data)");
  Eigen::VectorXcd sol = svd.solve(rhs);
  AntipodeData out;
  out.S = unvec_rm(sol, d, d);
  // verify the right antipode axiom as well
  double check = (sys * sol - rhs).norm() / std::max(1.0, rhs.norm());
  if (check > 1e-6) throw HardError("antipode_data: antipode axiom has no solution");
  out.R = out.S;
  out.s_squared_residual = residual(CMat(out.S * out.S), ident(d));
  return out;
}

QgContext make_context(const FiniteQuantumGroup& qg, double tol) {
  QgContext ctx;
  ctx.qg = qg;
  ctx.tol = tol;
  ctx.g = gns(qg);
  ctx.mu = multiplicative_unitary(qg, ctx.g, tol);
  ctx.du = dual(qg, ctx.g, ctx.mu, tol);
  ctx.anti = antipode_data(qg);
  return ctx;
}

}  // namespace qgal
