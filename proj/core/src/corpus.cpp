#include "qgal/corpus.hpp"

#include <cmath>

namespace qgal {

int FiniteGroup::inv(int g) const {
  for (int h = 0; h < order(); ++h)
    if (mul(g, h) == 0) return h;
  throw HardError("FiniteGroup: no inverse, table is not a group");
}

FiniteGroup cyclic_group(int n) {
  FiniteGroup g;
  g.name = "Z" + std::to_string(n);
  g.table.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.table[a][b] = (a + b) % n;
  for (int a = 0; a < n; ++a) g.labels.push_back(std::to_string(a));
  return g;
}

FiniteGroup product_group(const FiniteGroup& a, const FiniteGroup& b) {
  FiniteGroup g;
  g.name = a.name + "x" + b.name;
  const int na = a.order(), nb = b.order(), n = na * nb;
  g.table.assign(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int x1 = x / nb, x2 = x % nb, y1 = y / nb, y2 = y % nb;
      g.table[x][y] = a.mul(x1, y1) * nb + b.mul(x2, y2);
    }
  for (int x = 0; x < n; ++x)
    g.labels.push_back("(" + a.labels[x / nb] + "," + b.labels[x % nb] + ")");
  return g;
}

FiniteGroup symmetric_group_s3() {
  // permutations of {0,1,2} listed as images; composition (p*q)(x) = p(q(x))
  const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                           {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  FiniteGroup g;
  g.name = "S3";
  g.table.assign(6, std::vector<int>(6));
  auto find = [&](const int* im) {
    for (int k = 0; k < 6; ++k)
      if (perms[k][0] == im[0] && perms[k][1] == im[1] && perms[k][2] == im[2]) return k;
    return -1;
  };
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      int im[3];
      for (int x = 0; x < 3; ++x) im[x] = perms[p][perms[q][x]];
      g.table[p][q] = find(im);
    }
  g.labels = {"e", "(012)", "(021)", "(12)", "(02)", "(01)"};
  return g;
}

FiniteGroup dihedral_group_d4() {
  // elements r^a s^b, a in 0..3, b in 0..1, index = a*2+b... use (b,a): s^b r^a
  // simpler: element k = a + 4*b represents r^a s^b;  s r = r^{-1} s
  FiniteGroup g;
  g.name = "D4";
  g.table.assign(8, std::vector<int>(8));
  auto idx = [](int a, int b) { return ((a % 4) + 4) % 4 + 4 * (b % 2); };
  for (int a1 = 0; a1 < 4; ++a1)
    for (int b1 = 0; b1 < 2; ++b1)
      for (int a2 = 0; a2 < 4; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) {
          // r^{a1} s^{b1} r^{a2} s^{b2} = r^{a1 + (-1)^{b1} a2} s^{b1+b2}
          int a = b1 ? a1 - a2 : a1 + a2;
          g.table[idx(a1, b1)][idx(a2, b2)] = idx(a, b1 + b2);
        }
  g.labels = {"e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"};
  return g;
}

FiniteQuantumGroup function_algebra(const FiniteGroup& grp) {
  const int d = grp.order();
  FiniteQuantumGroup qg;
  qg.name = "C(" + grp.name + ")";
  qg.dim = d;
  qg.basis_labels.reserve(d);
  for (int s = 0; s < d; ++s) qg.basis_labels.push_back("d_" + grp.labels[s]);
  qg.mult.assign(d, zeros(d, d));
  qg.comult.assign(d, zeros(d, d));
  for (int i = 0; i < d; ++i) qg.mult[i](i, i) = 1.0;  // delta_i delta_j = [i=j] delta_i
  qg.unit = CVec::Ones(d);
  for (int k = 0; k < d; ++k)
    for (int s = 0; s < d; ++s)
      for (int t = 0; t < d; ++t)
        if (grp.mul(s, t) == k) qg.comult[k](s, t) = 1.0;
  qg.counit = CVec::Zero(d);
  qg.counit(0) = 1.0;
  qg.star = ident(d);
  qg.haar = CVec::Constant(d, cd(1.0 / d, 0.0));
  return qg;
}

FiniteQuantumGroup group_algebra(const FiniteGroup& grp) {
  const int d = grp.order();
  FiniteQuantumGroup qg;
  qg.name = "C[" + grp.name + "]";
  qg.dim = d;
  qg.basis_labels.reserve(d);
  for (int s = 0; s < d; ++s) qg.basis_labels.push_back("u_" + grp.labels[s]);
  qg.mult.assign(d, zeros(d, d));
  qg.comult.assign(d, zeros(d, d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) qg.mult[i](grp.mul(i, j), j) = 1.0;
  qg.unit = CVec::Zero(d);
  qg.unit(0) = 1.0;
  for (int i = 0; i < d; ++i) qg.comult[i](i, i) = 1.0;
  qg.counit = CVec::Ones(d);
  qg.star = zeros(d, d);
  for (int i = 0; i < d; ++i) qg.star(grp.inv(i), i) = 1.0;
  qg.haar = CVec::Zero(d);
  qg.haar(0) = 1.0;
  return qg;
}

CMat classical_pairing(int order) { return ident(order); }

CMat bicharacter_cocycle(const QgContext& ctx, int n) {
  const int d = n * n;
  if (ctx.d() != d) throw HardError("bicharacter_cocycle: context is not C[Zn x Zn]");
  // Mhat of C[G] is the diagonal algebra in the GNS basis Lambda(u_g); the
  // cocycle is the diagonal unitary Omega((a,b),(c,d)) = zeta^{b c}
  CMat omega = zeros(d * d, d * d);
  const double theta = 2.0 * M_PI / n;
  for (int g = 0; g < d; ++g)
    for (int h = 0; h < d; ++h) {
      int b = g % n, c = h / n;
      omega(g * d + h, g * d + h) = std::exp(cd(0, theta * b * c));
    }
  return omega;
}

CMat d4_subgroup_cocycle(const QgContext& ctx) {
  if (ctx.qg.name != "C(D4)" || ctx.d() != 8)
    throw HardError("d4_subgroup_cocycle: context must be C(D4)");
  // H = {e, r^2, s, r^2 s} has indices {0, 2, 4, 6}; write h = (r^2)^c s^d.
  // Mhat = C[D4] acts on L2(C(D4)) by left translations; the minimal
  // projections of C[H] =~ C(H^) are P_chi = (1/4) sum_h conj(chi(h)) u_h.
  const int d = 8;
  auto h_index = [&](int c, int dd) { return (c % 2) * 2 + (dd % 2) * 4; };
  // left translation unitaries on the GNS basis of C(D4): xi_x -> xi_{gx}
  FiniteGroup d4 = dihedral_group_d4();
  std::vector<CMat> trans(8, zeros(d, d));
  for (int g = 0; g < 8; ++g)
    for (int x = 0; x < 8; ++x) trans[g](d4.mul(g, x), x) = 1.0;
  // characters chi_{(a,b)}(r^{2c} s^d) = (-1)^{a c + b d}
  std::vector<CMat> proj(4, zeros(d, d));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CMat p = zeros(d, d);
      for (int c = 0; c < 2; ++c)
        for (int dd = 0; dd < 2; ++dd) {
          double chi = ((a * c + b * dd) % 2 == 0) ? 1.0 : -1.0;
          p += 0.25 * chi * trans[h_index(c, dd)];
        }
      proj[a * 2 + b] = p;
    }
  // beta(chi_{(a,b)}, chi_{(c,d)}) = (-1)^{b c}
  CMat omega = zeros(d * d, d * d);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int dd = 0; dd < 2; ++dd) {
          double beta = ((b * c) % 2 == 0) ? 1.0 : -1.0;
          omega += beta * kron(proj[a * 2 + b], proj[c * 2 + dd]);
        }
  return omega;
}

namespace {

CMat clock_matrix(int n) {
  CMat u = zeros(n, n);
  for (int k = 0; k < n; ++k) u(k, k) = std::exp(cd(0, 2.0 * M_PI * k / n));
  return u;
}

CMat shift_matrix(int n) {
  CMat v = zeros(n, n);
  for (int k = 0; k < n; ++k) v((k + 1) % n, k) = 1.0;
  return v;
}

}  // namespace

CoactionFixture weyl_coaction(const QgContext& ctx, int n) {
  const int d = n * n;
  if (ctx.d() != d) throw HardError("weyl_coaction: context is not C(Zn x Zn)");
  CoactionFixture fx;
  fx.hilbert_dim = n;
  CMat u = clock_matrix(n), v = shift_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) fx.n_basis.push_back(matrix_unit(n, i, j));
  // alpha(x) = sum_{(a,b)} W_{ab} x W_{ab}^* (x) pi_l(delta_{(a,b)});
  // group element (a,b) has corpus index a*n+b
  std::vector<CMat> w(d);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      CMat ua = ident(n), vb = ident(n);
      for (int k = 0; k < a; ++k) ua = CMat(ua * u);
      for (int k = 0; k < b; ++k) vb = CMat(vb * v);
      w[a * n + b] = CMat(ua * vb);
    }
  for (const auto& x : fx.n_basis) {
    CMat ax = zeros(n * d, n * d);
    for (int g = 0; g < d; ++g) {
      CMat conj_x = w[g] * x * w[g].adjoint();
      ax += kron(conj_x, ctx.g.pi_l[g]);
    }
    fx.alpha.push_back(ax);
  }
  return fx;
}

CoactionFixture nongalois_control(const QgContext& ctx) {
  if (ctx.d() != 4) throw HardError("nongalois_control: context must be C(Z2 x Z2)");
  CoactionFixture fx;
  fx.hilbert_dim = 2;
  fx.n_basis.push_back(matrix_unit(2, 0, 0));
  fx.n_basis.push_back(matrix_unit(2, 1, 1));
  CMat swap = zeros(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  for (const auto& x : fx.n_basis) {
    CMat ax = zeros(2 * 4, 2 * 4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        CMat act = (a == 1) ? CMat(swap * x * swap) : x;
        ax += kron(act, ctx.g.pi_l[a * 2 + b]);
      }
    fx.alpha.push_back(ax);
  }
  return fx;
}

FiniteQuantumGroup broken_haar_cz2() {
  FiniteQuantumGroup qg = function_algebra(cyclic_group(2));
  qg.name = "C(Z2)-broken-haar";
  qg.haar(0) = 0.9;
  qg.haar(1) = 0.1;
  return qg;
}

}  // namespace qgal
