#include <algorithm>
#include <cmath>
#include <random>

#include "groupoidal/weakhopf.hpp"

namespace groupoidal {

double AxiomReport::max_residual() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.residual);
  return m;
}

bool AxiomReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

const CheckResult* AxiomReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Element of A (x) A (x) A from coefficients c[(x*n+y)][z].
Element triple_element(const WeakHopfData& w, const AlgPtr& aa, const AlgPtr& aaa,
                       const std::vector<int>& perm, const CMat& c) {
  const int n = w.dim();
  CMat coeff = CMat::Zero(aa->dim(), n);
  for (int xy = 0; xy < n * n; ++xy) coeff.row(perm[xy]) = c.row(xy);
  return to_tensor_algebra(TensorElement(aa, w.algebra, coeff), aaa);
}

Element random_element(const AlgPtr& a, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec v(a->dim());
  for (int i = 0; i < a->dim(); ++i) v(i) = cplx(nd(rng), nd(rng));
  return Element::from_vector(a, v);
}

}  // namespace

AxiomReport verify_axioms(const WeakHopfData& w, const VerifyOptions& opt) {
  AxiomReport rep;
  rep.tolerance = opt.tolerance;
  auto add = [&](const std::string& name, double r) {
    rep.checks.push_back({name, r, std::isfinite(r) && r <= opt.tolerance});
  };
  const AlgPtr& A = w.algebra;
  const int n = w.dim();
  if (w.delta.rows() != n * n || w.delta.cols() != n || w.eps.size() != n ||
      w.antipode.rows() != n || w.antipode.cols() != n) {
    add("shape", INFINITY);
    return rep;
  }
  const auto tr = transpose_index(*A);
  const CVec one = Element::identity(A).to_vector();
  const AlgPtr AA = tensor_algebra(A, A);
  std::vector<Element> D;
  for (int k = 0; k < n; ++k)
    D.push_back(to_tensor_algebra(TensorElement(A, A, w.coproduct_coeff(k)), AA));
  std::vector<Element> units = mma_basis(A);

  // Delta is a *-homomorphism.
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Element lhs = D[a] * D[b];
      const int c = unit_product(*A, a, b);
      if (c >= 0) lhs -= D[c];
      r = std::max(r, lhs.max_abs());
    }
  add("delta_multiplicative", r);
  r = 0.0;
  for (int k = 0; k < n; ++k) r = std::max(r, distance(D[tr[k]], D[k].adjoint()));
  add("delta_star", r);

  // Coassociativity: (Delta (x) id)Delta(u_k)[(x,y),z] vs (id (x) Delta)...
  std::vector<CMat> left_iter(n);
  r = 0.0;
  for (int k = 0; k < n; ++k) {
    const CMat ck = w.coproduct_coeff(k);
    left_iter[k] = w.delta * ck;        // [(x,y), z]
    const CMat m2 = w.delta * ck.transpose();  // [(y,z), x]
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          r = std::max(r, std::abs(left_iter[k](x * n + y, z) - m2(y * n + z, x)));
  }
  add("coassociativity", r);

  double rl = 0.0, rr = 0.0;
  for (int k = 0; k < n; ++k) {
    const CMat ck = w.coproduct_coeff(k);
    const CVec e = CVec::Unit(n, k);
    rl = std::max(rl, max_abs(CVec(ck.transpose() * w.eps - e)));
    rr = std::max(rr, max_abs(CVec(ck * w.eps - e)));
  }
  add("counit_left", rl);
  add("counit_right", rr);

  // Weak unit: (Delta (x) id)Delta(1) against the two products of the legs.
  {
    const AlgPtr AAA = tensor_algebra(AA, A);
    const auto perm = tensor_permutation(*A, *A);
    const CMat c1 = w.coproduct_coeff(one);
    const CMat lhs_c = w.delta * c1;
    CMat one_d(n * n, n), d_one(n * n, n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          one_d(x * n + y, z) = one(x) * c1(y, z);
          d_one(x * n + y, z) = c1(x, y) * one(z);
        }
    const Element lhs = triple_element(w, AA, AAA, perm, lhs_c);
    const Element p1 = triple_element(w, AA, AAA, perm, one_d);
    const Element p2 = triple_element(w, AA, AAA, perm, d_one);
    add("weak_unit", distance(lhs, p1 * p2));
    add("weak_unit_variant", distance(lhs, p2 * p1));
  }

  // Weak counit on seeded random triples.
  {
    std::mt19937_64 rng(opt.seed);
    double r1 = 0.0, r2 = 0.0;
    for (int t = 0; t < opt.random_triples; ++t) {
      const Element f = random_element(A, rng);
      const Element g = random_element(A, rng);
      const Element h = random_element(A, rng);
      const cplx lhs = w.counit(f * g * h);
      const CVec alpha = left_mult_matrix(*A, f.to_vector()).transpose() * w.eps;
      const CVec beta = right_mult_matrix(*A, h.to_vector()).transpose() * w.eps;
      const CMat cg = w.coproduct_coeff(g.to_vector());
      const cplx v1 = alpha.transpose() * cg * beta;
      const cplx v2 = alpha.transpose() * cg.transpose() * beta;
      const double scale = std::max(1.0, std::abs(lhs));
      r1 = std::max(r1, std::abs(lhs - v1) / scale);
      r2 = std::max(r2, std::abs(lhs - v2) / scale);
    }
    add("weak_counit", r1);
    add("weak_counit_variant", r2);
  }

  // Antipode.
  std::vector<Element> S;
  for (int k = 0; k < n; ++k) S.push_back(w.S(units[k]));
  r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Element lhs = S[b] * S[a];
      const int c = unit_product(*A, a, b);
      if (c >= 0) lhs -= S[c];
      r = std::max(r, lhs.max_abs());
    }
  add("antipode_antimultiplicative", r);
  add("antipode_unit", max_abs(CVec(w.antipode * one - one)));
  r = 0.0;
  for (int k = 0; k < n; ++k) {
    const CMat lhs = w.coproduct_coeff(CVec(w.antipode.col(k)));
    const CMat rhs = w.antipode * w.coproduct_coeff(k).transpose() * w.antipode.transpose();
    r = std::max(r, max_abs(CMat(lhs - rhs)));
  }
  add("antipode_anticomultiplicative", r);

  const CounitMaps cm = counit_maps(w);
  double rt = 0.0, rs = 0.0, rsand = 0.0;
  for (int k = 0; k < n; ++k) {
    const CMat ck = w.coproduct_coeff(k);
    Element mt(A), ms(A);
    for (int s = 0; s < n; ++s) {
      mt += units[s] * w.S(Element::from_vector(A, ck.row(s).transpose()));
      ms += w.S(units[s]) * Element::from_vector(A, ck.row(s).transpose());
    }
    rt = std::max(rt, distance(mt, Element::from_vector(A, cm.target.col(k))));
    rs = std::max(rs, distance(ms, Element::from_vector(A, cm.source.col(k))));
    // S(g1) g2 S(g3) = S(g)
    Element sand(A);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const CVec z = left_iter[k].row(x * n + y).transpose();
        if (z.cwiseAbs().maxCoeff() == 0.0) continue;
        sand += S[x] * units[y] * w.S(Element::from_vector(A, z));
      }
    rsand = std::max(rsand, distance(sand, S[k]));
  }
  add("antipode_target", rt);
  add("antipode_source", rs);
  add("antipode_sandwich", rsand);
  return rep;
}

}  // namespace groupoidal
