#include <algorithm>
#include <cmath>

#include "groupoidal/weakhopf.hpp"

namespace groupoidal {

WeakHopfData dual(const WeakHopfData& w, const Pairing& pr, DualReport* report) {
  if (pr.left->dim() != w.dim() || pr.gram.rows() != w.dim())
    throw AlgebraError("pairing does not match the structure's algebra");
  if (pr.degenerate()) throw ConstructionError("degenerate pairing");
  const AlgPtr& A = pr.left;
  const AlgPtr& B = pr.right;
  const int n = w.dim();
  if (B->dim() != n) throw ConstructionError("paired algebras have different dimensions");
  const CMat& G = pr.gram;
  const Eigen::PartialPivLU<CMat> lu(G);
  const CMat Ginv = lu.inverse();
  const CMat GinvT = Ginv.transpose();

  WeakHopfData out;
  out.algebra = B;
  out.delta = CMat::Zero(n * n, n);
  for (int u = 0; u < n; ++u) {
    CMat L = CMat::Zero(n, n);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        const int c = unit_product(*A, s, t);
        if (c >= 0) L(s, t) = G(c, u);
      }
    const CMat X = Ginv * L * GinvT;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) out.delta(s * n + t, u) = X(s, t);
  }
  const CVec oneA = Element::identity(A).to_vector();
  out.eps = G.transpose() * oneA;
  out.antipode = Ginv * w.antipode.transpose() * G;

  if (report) {
    double rp = 0.0;
    for (int k = 0; k < n; ++k) {
      const CMat expect = G.transpose() * w.coproduct_coeff(k) * G;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
          const int c = unit_product(*B, u, v);
          const cplx got = c >= 0 ? G(k, c) : cplx(0.0);
          rp = std::max(rp, std::abs(got - expect(u, v)));
        }
    }
    report->product_residual = rp;
    const CVec oneB = Element::identity(B).to_vector();
    report->unit_residual = (G * oneB - w.eps).cwiseAbs().maxCoeff();
    const auto trB = transpose_index(*B);
    double rs = 0.0;
    for (int s = 0; s < n; ++s) {
      const CVec sa = star_coords(*A, w.antipode.col(s));
      const CVec row = G.transpose() * sa;
      for (int u = 0; u < n; ++u)
        rs = std::max(rs, std::abs(G(s, trB[u]) - std::conj(row(u))));
    }
    report->star_residual = rs;
  }
  return out;
}

std::pair<AlgPtr, CMat> realize(const AbstractStarAlgebra& a, std::uint64_t rng_seed) {
  const int n = a.dim();
  // Regular trace Tr(x) = trace L(x) is faithful and positive on a
  // C*-algebra, so M[i][j] = Tr(e_i^* e_j) is positive definite and the
  // regular representation conjugated by its Cholesky factor is a
  // *-representation.
  CVec tau(n);
  for (int k = 0; k < n; ++k) tau(k) = a.left_mult[k].trace();
  auto L = [&](const CVec& c) {
    CMat m = CMat::Zero(n, n);
    for (int k = 0; k < n; ++k)
      if (c(k) != cplx(0.0)) m += c(k) * a.left_mult[k];
    return m;
  };
  CMat M(n, n);
  for (int i = 0; i < n; ++i) {
    const CVec ei_star = a.star.col(i);
    M.row(i) = tau.transpose() * L(ei_star);
  }
  M = 0.5 * (M + M.adjoint());
  Eigen::LLT<CMat> llt(M);
  if (llt.info() != Eigen::Success)
    throw ConstructionError("abstract algebra has no faithful positive trace");
  const CMat R = llt.matrixU();
  const auto rsolve = [&](const CMat& x) -> CMat {
    return R.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(x);
  };
  const AlgPtr ambient = MultiMatrixAlgebra::make({n}, {1.0 / n});
  std::vector<Element> span;
  CMat P(n * n, n);
  for (int k = 0; k < n; ++k) {
    const CMat pk = rsolve(CMat(R * a.left_mult[k]));
    span.push_back(Element::from_blocks(ambient, {pk}));
    P.col(k) = span.back().to_vector();
  }
  const SubAlgebraEmbedding emb =
      decompose_subalgebra(orthonormalize(span, 1e-9), ambient, rng_seed);
  if (emb.sub->dim() != n)
    throw ConstructionError("realized algebra has the wrong dimension");
  const Eigen::ColPivHouseholderQR<CMat> qr(P);
  const CMat T = qr.solve(emb.inject);
  return {emb.sub, T};
}

std::pair<WeakHopfData, Pairing> canonical_dual(const WeakHopfData& w) {
  const int n = w.dim();
  AbstractStarAlgebra abs;
  abs.left_mult.assign(n, CMat::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    const CMat ck = w.coproduct_coeff(k);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) abs.left_mult[s](k, t) = ck(s, t);
  }
  abs.unit = w.eps;
  const auto tr = transpose_index(*w.algebra);
  abs.star = CMat(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) abs.star(k, i) = w.antipode(tr[i], k);
  auto [alg, T] = realize(abs);
  // <u_s, r_k> is the s-th abstract coordinate of the realized unit r_k.
  Pairing pr{w.algebra, alg, T};
  return {dual(w, pr), pr};
}

}  // namespace groupoidal
