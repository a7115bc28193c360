#include <algorithm>
#include <cmath>
#include <random>

#include "groupoidal/crossprod.hpp"

namespace groupoidal {

namespace {

CheckResult make_check(const std::string& name, double r, double tol) {
  return {name, r, std::isfinite(r) && r <= tol};
}

const CheckResult* find_in(const std::vector<CheckResult>& v, const std::string& name) {
  for (const auto& c : v)
    if (c.name == name) return &c;
  return nullptr;
}

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

cplx apply_fn(const CVec& f, const Element& x) { return f.transpose() * x.to_vector(); }

double worst(const std::vector<CheckResult>& v) {
  double r = 0.0;
  for (const auto& c : v) r = std::max(r, c.passed ? c.residual : std::max(c.residual, 1.0));
  return r;
}

int numeric_rank(const CMat& m) {
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<CMat> qr(m);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

// Expectation onto emb preserving the functional tr, as a matrix on ambient
// unit coordinates.
CMat expectation_matrix(const SubAlgebraEmbedding& emb, const CVec& tr) {
  const AlgPtr& A = emb.ambient;
  const int k = emb.sub->dim();
  CMat H(k, A->dim());
  for (int i = 0; i < k; ++i) {
    const Element si = emb.image_of_unit(i).adjoint();
    H.row(i) = tr.transpose() * left_mult_matrix(*A, si.to_vector());
  }
  const CMat gram = H * emb.inject;
  return emb.inject * gram.partialPivLu().solve(H);
}

Element inverse_sqrt(const Element& x) { return invert(positive_sqrt(x)); }

// Smallest eigenvalue over the blocks of a self-adjoint element.
double min_eigenvalue(const Element& x) {
  double lo = 1e300;
  for (int b = 0; b < x.parent()->num_blocks(); ++b) {
    const CMat h = 0.5 * (x.block(b) + x.block(b).adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

CMat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

// Expectation E onto sub (given as ambient-coordinate matrix) is a positive
// idempotent bimodule map; residuals of the three properties over probes.
struct ExpectationProps {
  double bimodule = 0.0, star = 0.0, positive = 0.0, idempotent = 0.0;
};
ExpectationProps expectation_props(const AlgPtr& X, const SubAlgebraEmbedding& sub, const CMat& E,
                                   std::mt19937_64& rng) {
  // E maps X coordinates to sub-ambient coordinates (sub's own algebra).
  ExpectationProps p;
  const AlgPtr& S = sub.sub;
  const int n = X->dim();
  const CMat P = sub.inject * E;
  p.idempotent = max_abs(P * P - P);
  for (int a = 0; a < S->dim(); ++a) {
    const CVec ia = sub.inject.col(a);
    const CMat lhs_l = E * left_mult_matrix(*X, ia);
    const CMat rhs_l = left_mult_matrix(*S, CVec::Unit(S->dim(), a)) * E;
    const CMat lhs_r = E * right_mult_matrix(*X, ia);
    const CMat rhs_r = right_mult_matrix(*S, CVec::Unit(S->dim(), a)) * E;
    p.bimodule = std::max({p.bimodule, max_abs(lhs_l - rhs_l), max_abs(lhs_r - rhs_r)});
  }
  for (int k = 0; k < n; ++k) {
    const CVec ex = E * star_coords(*X, CVec::Unit(n, k));
    const CVec ey = star_coords(*S, CVec(E.col(k)));
    p.star = std::max(p.star, max_abs(ex - ey));
  }
  const CMat probes = random_matrix(n, 8, rng);
  for (int i = 0; i < probes.cols(); ++i) {
    const Element x = Element::from_vector(X, probes.col(i));
    const Element xx = x.adjoint() * x;
    const Element ex = Element::from_vector(S, E * xx.to_vector());
    const double scale = std::max(1e-300, xx.max_abs());
    p.positive = std::max(p.positive, std::max(0.0, -min_eigenvalue(ex)) / scale);
    // Faithful: a nonzero positive element has a nonzero expectation.
    if (ex.max_abs() < 1e-12 * scale) p.positive = std::max(p.positive, 1.0);
  }
  return p;
}

// Dimension of the intersection of the column spaces of a and b.
int intersection_rank(const CMat& a, const CMat& b) {
  CMat ab(a.rows(), a.cols() + b.cols());
  ab << a, b;
  return numeric_rank(a) + numeric_rank(b) - numeric_rank(ab);
}

}  // namespace

PairMeasures pair_measures(const WeakHopfData& wa, const WeakHopfData& wb, const Pairing& pr,
                           double tol) {
  PairMeasures m;
  const Element pa = haar_projection(wa).p;
  const Element pb = haar_projection(wb).p;
  m.haar_a = HaarData{pa, haar_measure(pr, pb, true)};
  m.haar_b = HaarData{pb, haar_measure(pr, pa, false)};
  m.g_a = gs_gt(wa, m.haar_a);
  m.g_b = gs_gt(wb, m.haar_b);
  m.tr_a = trace_functional(wa, m.haar_a, m.g_a);
  m.tr_b = trace_functional(wb, m.haar_b, m.g_b);
  m.d = m.haar_a.d.real();
  m.gamma = m.haar_a.gamma.real();

  m.checks.push_back(make_check("haar_measure_a", haar_measure_residual(wa, m.haar_a.phi), tol));
  m.checks.push_back(make_check("haar_measure_b", haar_measure_residual(wb, m.haar_b.phi), tol));
  for (const auto* g : {&m.g_a, &m.g_b}) {
    const std::string side = g == &m.g_a ? "a" : "b";
    m.checks.push_back(make_check("modular_antipode_" + side, g->antipode_residual, tol));
    m.checks.push_back(make_check("modular_haar_" + side, g->haar_residual, tol));
    m.checks.push_back(make_check("modular_gamma_" + side, g->gamma_residual, tol));
  }
  m.checks.push_back(make_check(
      "constants_agree",
      std::max({std::abs(m.haar_a.d - m.haar_b.d), std::abs(m.haar_a.gamma - m.haar_b.gamma),
                std::abs(m.haar_a.d.imag()), std::abs(m.haar_a.gamma.imag())}),
      tol));

  // F_s(g_t^-1) = F_t(g_s^-1) = d^-1 gamma on both sides.
  double rf = 0.0;
  for (int side = 0; side < 2; ++side) {
    const WeakHopfData& w = side ? wb : wa;
    const HaarData& h = side ? m.haar_b : m.haar_a;
    const ModularData& g = side ? m.g_b : m.g_a;
    const Element one = Element::identity(w.algebra);
    const cplx c = m.gamma / m.d;
    rf = std::max(rf, distance(average_source(w, h.phi, invert(g.g_t)), c * one));
    rf = std::max(rf, distance(average_target(w, h.phi, invert(g.g_s)), c * one));
  }
  m.checks.push_back(make_check("averaged_modular_scalar", rf, tol));

  // Both traces are normalized faithful traces.
  double rt = 0.0, rn = 0.0, rp = 0.0;
  for (int side = 0; side < 2; ++side) {
    const WeakHopfData& w = side ? wb : wa;
    const CVec& tr = side ? m.tr_b : m.tr_a;
    const MultiMatrixAlgebra& alg = *w.algebra;
    for (int i = 0; i < alg.dim(); ++i)
      for (int j = 0; j < alg.dim(); ++j) {
        const int ij = unit_product(alg, i, j), ji = unit_product(alg, j, i);
        const cplx x = ij < 0 ? cplx(0.0) : tr(ij);
        const cplx y = ji < 0 ? cplx(0.0) : tr(ji);
        rt = std::max(rt, std::abs(x - y));
      }
    rn = std::max(rn, std::abs(apply_fn(tr, Element::identity(w.algebra)) - 1.0));
    for (int b = 0; b < alg.num_blocks(); ++b)
      rp = std::max(rp, std::max(0.0, -tr(alg.basis_index(b, 0, 0)).real()) +
                            (tr(alg.basis_index(b, 0, 0)).real() > 0 ? 0.0 : 1.0));
  }
  m.checks.push_back(make_check("traces_tracial", rt, tol));
  m.checks.push_back(make_check("traces_normalized", rn, tol));
  m.checks.push_back(make_check("traces_faithful", rp, tol));
  return m;
}

BaseExpectations base_expectations(const WeakHopfData& w, const HaarData& haar,
                                   const ModularData& g, const CVec& tr) {
  BaseExpectations out;
  const CounitalSubalgebras cs = counital_subalgebras(w);
  out.target = cs.target;
  out.source = cs.source;
  out.E_t = expectation_matrix(out.target, tr);
  out.E_s = expectation_matrix(out.source, tr);
  const cplx c = haar.d / haar.gamma;
  const Element gs_inv = invert(g.g_s), gt_inv = invert(g.g_t);
  double r = 0.0;
  for (int k = 0; k < w.dim(); ++k) {
    const Element a = Element::unit(w.algebra, k);
    const CVec et = (c * average_target(w, haar.phi, gs_inv * a)).to_vector();
    const CVec es = (c * average_source(w, haar.phi, a * gt_inv)).to_vector();
    r = std::max({r, max_abs(et - out.E_t.col(k)), max_abs(es - out.E_s.col(k))});
  }
  out.closed_form_residual = r;
  return out;
}

bool DotAlgebra::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* DotAlgebra::find(const std::string& name) const { return find_in(checks, name); }

cplx DotAlgebra::trace(const Element& x) const { return apply_fn(trace_vec, x); }

DotAlgebra dot_algebra(const WeakHopfData& wa, const WeakHopfData& wb, const Pairing& pr,
                       double tol) {
  DotAlgebra out;
  auto& checks = out.checks;
  auto add = [&](const std::string& name, double r) { checks.push_back(make_check(name, r, tol)); };
  std::mt19937_64 rng(0xd07);

  out.measures = pair_measures(wa, wb, pr, tol);
  const PairMeasures& m = out.measures;
  for (const auto& c : m.checks) checks.push_back(c);
  const double d = m.d, gamma = m.gamma, tau = m.tau();
  out.exp_a = base_expectations(wa, m.haar_a, m.g_a, m.tr_a);
  out.exp_b = base_expectations(wb, m.haar_b, m.g_b, m.tr_b);
  add("base_expectation_closed_forms",
      std::max(out.exp_a.closed_form_residual, out.exp_b.closed_form_residual));

  out.actions = dual_actions(wa, wb, pr, tol);
  const DualActions& da = out.actions;
  add("dual_actions", worst(da.checks));

  const AlgPtr& A = wa.algebra;
  const AlgPtr& B = wb.algebra;
  const int na = wa.dim(), nb = wb.dim(), T = na * nb;
  const Element one_a = Element::identity(A), one_b = Element::identity(B);

  // Modular elements against their hatted counterparts.
  {
    const Element& gs = m.g_a.g_s;
    const Element& gt = m.g_a.g_t;
    const Element& hs = m.g_b.g_s;
    const Element& ht = m.g_b.g_t;
    const auto& R = da.a_on_b_right;  // b <| a
    const auto& L = da.a_on_b_left;   // a |> b
    const auto& BR = da.b_on_a_right; // a <| b
    const auto& BL = da.b_on_a_left;  // b |> a
    double r = 0.0;
    r = std::max(r, distance(R.apply(gs.to_vector(), one_b), ht));
    r = std::max(r, distance(R.apply(gt.to_vector(), one_b), ht));
    r = std::max(r, distance(L.apply(gs.to_vector(), one_b), hs));
    r = std::max(r, distance(L.apply(gt.to_vector(), one_b), hs));
    r = std::max(r, distance(BR.apply(hs.to_vector(), one_a), gt));
    r = std::max(r, distance(BR.apply(ht.to_vector(), one_a), gt));
    r = std::max(r, distance(BL.apply(hs.to_vector(), one_a), gs));
    r = std::max(r, distance(BL.apply(ht.to_vector(), one_a), gs));
    add("modular_hat_relations", r);
  }

  SmashOptions sopt;
  sopt.tol = tol;
  out.X = smash(A, wb, da.b_on_a_left, sopt);
  CrossedProductAlgebra& X = out.X;
  for (const auto& c : X.checks) checks.push_back({"ab_" + c.name, c.residual, c.passed});
  const int N = X.algebra->dim();

  // Tensor-level formulas of both expectations.
  const CMat& EAs = out.exp_a.E_s;
  const CMat& EBt = out.exp_b.E_t;
  CMat EA_T(na, T), EB_T(nb, T);
  for (int b = 0; b < nb; ++b) {
    const Element z1 = da.b_on_a_left.apply(CVec(EBt.col(b)), one_a);  // E_Bt(u_b) |> 1
    for (int a = 0; a < na; ++a)
      EA_T.col(a * nb + b) = (Element::unit(A, a) * z1).to_vector();
  }
  for (int a = 0; a < na; ++a) {
    const Element y1 = da.a_on_b_right.apply(CVec(EAs.col(a)), one_b);  // 1 <| E_As(u_a)
    for (int b = 0; b < nb; ++b)
      EB_T.col(a * nb + b) = (y1 * Element::unit(B, b)).to_vector();
  }
  const CMat kernel_proj = CMat::Identity(T, T) - X.lift * X.cls;
  add("expectations_well_defined", std::max(max_abs(EA_T * kernel_proj), max_abs(EB_T * kernel_proj)));
  out.E_A = EA_T * X.lift;
  out.E_B = EB_T * X.lift;

  // Markov trace and the algebra reweighted to it.
  out.trace_vec = (m.tr_a.transpose() * out.E_A).transpose();
  const CVec via_b = (m.tr_b.transpose() * out.E_B).transpose();
  add("trace_compatibility", max_abs(out.trace_vec - via_b));
  const MultiMatrixAlgebra& xa = *X.algebra;
  std::vector<int> dims = xa.block_dims();
  std::vector<double> weights;
  double rfaith = 0.0;
  for (int b = 0; b < xa.num_blocks(); ++b) {
    const double wb0 = out.trace_vec(xa.basis_index(b, 0, 0)).real();
    if (!(wb0 > 0.0)) rfaith = 1.0;
    weights.push_back(std::max(wb0, 1e-300));
  }
  add("trace_faithful", rfaith);
  double rtr = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const int ij = unit_product(xa, i, j), ji = unit_product(xa, j, i);
      const cplx x = ij < 0 ? cplx(0.0) : out.trace_vec(ij);
      const cplx y = ji < 0 ? cplx(0.0) : out.trace_vec(ji);
      rtr = std::max(rtr, std::abs(x - y));
    }
  add("trace_property", rtr);
  add("trace_normalized",
      std::abs(apply_fn(out.trace_vec, Element::identity(X.algebra)) - 1.0));
  X.algebra = MultiMatrixAlgebra::make(dims, weights);
  X.i_M = SubAlgebraEmbedding(A, X.algebra, X.i_M.inject);
  X.i_G = SubAlgebraEmbedding(B, X.algebra, X.i_G.inject);
  const AlgPtr& XA = X.algebra;
  add("trace_restricts",
      std::max(max_abs(X.i_M.inject.transpose() * out.trace_vec - m.tr_a),
               max_abs(X.i_G.inject.transpose() * out.trace_vec - m.tr_b)));

  // tr([a (x) b]) = tr_a(E_Bt(b) |> a) = tr_b(b <| E_As(a)).
  double ralt = 0.0;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      const cplx t0 = out.trace_vec.transpose() * X.cls.col(a * nb + b);
      const cplx t1 =
          apply_fn(m.tr_a, da.b_on_a_left.apply(CVec(EBt.col(b)), Element::unit(A, a)));
      const cplx t2 =
          apply_fn(m.tr_b, da.a_on_b_right.apply(CVec(EAs.col(a)), Element::unit(B, b)));
      ralt = std::max({ralt, std::abs(t0 - t1), std::abs(t0 - t2)});
    }
  add("trace_alternative_forms", ralt);

  // Conditional expectation properties, and agreement with the expectations
  // the trace defines.
  add("E_A_on_A", max_abs(out.E_A * X.i_M.inject - CMat::Identity(na, na)));
  add("E_B_on_B", max_abs(out.E_B * X.i_G.inject - CMat::Identity(nb, nb)));
  const ExpectationProps pa = expectation_props(XA, X.i_M, out.E_A, rng);
  const ExpectationProps pb = expectation_props(XA, X.i_G, out.E_B, rng);
  add("E_A_bimodule", pa.bimodule);
  add("E_A_star", pa.star);
  add("E_A_positive_faithful", pa.positive);
  add("E_A_idempotent", pa.idempotent);
  add("E_B_bimodule", pb.bimodule);
  add("E_B_star", pb.star);
  add("E_B_positive_faithful", pb.positive);
  add("E_B_idempotent", pb.idempotent);
  add("E_A_trace_preserving",
      max_abs(expectation_matrix(X.i_M, out.trace_vec) - X.i_M.inject * out.E_A));
  add("E_B_trace_preserving",
      max_abs(expectation_matrix(X.i_G, out.trace_vec) - X.i_G.inject * out.E_B));

  // Commuting square: E_A E_B = E_As (x) E_Bt = E_B E_A.
  const CMat PA = X.i_M.inject * out.E_A, PB = X.i_G.inject * out.E_B;
  CMat kr(T, T);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) kr.block(i * nb, j * nb, nb, nb) = EAs(i, j) * EBt;
  add("commuting_square", max_abs(PA * PB - PB * PA));
  add("square_product_formula", max_abs(PA * PB * X.cls - X.cls * kr));

  // A meet B is A_s = B_t.
  out.intersection_dim = intersection_rank(X.i_M.inject, X.i_G.inject);
  const SubAlgebraEmbedding& As = out.exp_a.source;
  add("intersection_dim", std::abs(out.intersection_dim - As.sub->dim()));
  double rid = 0.0;
  for (int k = 0; k < As.sub->dim(); ++k) {
    const CVec y = As.inject.col(k);
    const Element lhs = X.i_M.apply(Element::from_vector(A, y));
    const Element rhs = X.i_G.apply(da.a_on_b_right.apply(y, one_b));
    rid = std::max(rid, distance(lhs, rhs));
  }
  add("intersection_is_source", rid);

  // Relative commutant of i(B) in i(A).
  std::vector<Element> gens;
  for (int b = 0; b < nb; ++b) gens.push_back(X.i_G.image_of_unit(b));
  const std::vector<Element> rc = relative_commutant(X.i_M, gens);
  out.relative_commutant_dim = static_cast<int>(rc.size());
  const SubAlgebraEmbedding At_in_X = compose(out.exp_a.target, X.i_M);
  add("relative_commutant_dim", std::abs(out.relative_commutant_dim - At_in_X.sub->dim()));
  double rrc = 0.0;
  for (const auto& z : rc) rrc = std::max(rrc, At_in_X.distance_to_image(z));
  for (int k = 0; k < At_in_X.sub->dim(); ++k)
    for (const auto& g : gens) {
      const Element z = At_in_X.image_of_unit(k);
      rrc = std::max(rrc, distance(z * g, g * z));
    }
  add("relative_commutant_is_target", rrc);

  // Jones projector of A_t in A.
  out.f_b = (d / gamma) * (inverse_sqrt(m.g_b.g_t) * m.haar_b.p * inverse_sqrt(m.g_b.g_t));
  add("f_b_projection", std::max(distance(out.f_b * out.f_b, out.f_b),
                                 distance(out.f_b.adjoint(), out.f_b)));
  add("f_b_expectation",
      max_abs(EBt * out.f_b.to_vector() - tau * one_b.to_vector()));
  const Element F = X.i_G.apply(out.f_b);
  const CMat& EAt = out.exp_a.E_t;
  double rj = 0.0, rmk = 0.0, rma = 0.0;
  for (int a = 0; a < na; ++a) {
    const Element x = X.i_M.image_of_unit(a);
    const Element ex = X.i_M.apply(Element::from_vector(A, EAt.col(a)));
    rj = std::max(rj, distance(F * x * F, ex * F));
    rma = std::max(rma, std::abs(apply_fn(out.trace_vec, x * F) - tau * apply_fn(out.trace_vec, x)));
  }
  for (int k = 0; k < out.exp_a.target.sub->dim(); ++k) {
    const Element x = X.i_M.apply(out.exp_a.target.image_of_unit(k));
    rmk = std::max(rmk, std::abs(apply_fn(out.trace_vec, x * F) - tau * apply_fn(out.trace_vec, x)));
  }
  add("f_b_jones_relation", rj);
  add("markov_identity", rmk);
  add("markov_property", rma);

  // Markov modulus of A_t in A: Lambda Lambda^T s = tau^-1 s for the trace
  // vector s of A_t.
  {
    const SubAlgebraEmbedding& t = out.exp_a.target;
    const int jt = t.sub->num_blocks(), ka = A->num_blocks();
    Eigen::MatrixXd lam(jt, ka);
    Eigen::VectorXd s(jt);
    for (int j = 0; j < jt; ++j) {
      const Element p = t.image_of_unit(t.sub->basis_index(j, 0, 0));
      s(j) = apply_fn(m.tr_a, p).real();
      for (int k = 0; k < ka; ++k) lam(j, k) = std::round(p.block(k).trace().real());
    }
    const Eigen::VectorXd lhs = lam * lam.transpose() * s;
    add("markov_modulus", (lhs - s / tau).cwiseAbs().maxCoeff() / std::max(1.0, s.cwiseAbs().maxCoeff() / tau));
  }

  // The companion projector in A and the other crossed product B.A.
  out.f_a = (d / gamma) * (inverse_sqrt(m.g_a.g_s) * m.haar_a.p * inverse_sqrt(m.g_a.g_s));
  const Element f_a_t = (d / gamma) * (inverse_sqrt(m.g_a.g_t) * m.haar_a.p * inverse_sqrt(m.g_a.g_t));
  add("f_a_modular_forms", distance(out.f_a, f_a_t));
  add("f_a_projection", std::max(distance(out.f_a * out.f_a, out.f_a),
                                 distance(out.f_a.adjoint(), out.f_a)));
  add("f_a_expectation",
      max_abs(out.exp_a.E_t * out.f_a.to_vector() - tau * one_a.to_vector()));
  JonesOptions jopt;
  jopt.tol = tol;
  out.BA = jones_extension(out.exp_b.target, wa, da.a_on_b_left, jopt);
  for (const auto& c : out.BA.checks) checks.push_back({"ba_" + c.name, c.residual, c.passed});
  {
    const Element Fa = out.BA.i_G.apply(out.f_a);
    const CMat& EBt2 = out.exp_b.E_t;
    double r = 0.0;
    for (int b = 0; b < nb; ++b) {
      const Element x = out.BA.i_M.image_of_unit(b);
      const Element ex = out.BA.i_M.apply(Element::from_vector(B, EBt2.col(b)));
      r = std::max(r, distance(Fa * x * Fa, ex * Fa));
    }
    add("f_a_jones_relation", r);
  }

  // A x| B = A |x B on the same tensor space.
  {
    RowStack stack(T);
    double rk = 0.0;
    for (int k = 0; k < As.sub->dim(); ++k) {
      const CVec y = As.inject.col(k);
      const Element y1 = da.a_on_b_right.apply(y, one_b);
      CMat rows(T, T);
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b) {
          CVec v = CVec::Zero(T);
          const CVec ay = (Element::unit(A, a) * Element::from_vector(A, y)).to_vector();
          const CVec yb = (y1 * Element::unit(B, b)).to_vector();
          for (int i = 0; i < na; ++i) v(i * nb + b) += ay(i);
          for (int j = 0; j < nb; ++j) v(a * nb + j) -= yb(j);
          rows.col(a * nb + b) = v;
        }
      rk = std::max(rk, max_abs(X.cls * rows));
      stack.add(rows.adjoint());
    }
    add("right_identification_in_kernel", rk);
    add("right_identification_rank",
        std::abs(T - numeric_rank(stack.reduced()) - X.quotient_rank));
    // Right product and involution on pure tensors.
    std::vector<Element> cls_el(T);
    for (int x = 0; x < T; ++x) cls_el[x] = Element::from_vector(XA, X.cls.col(x));
    std::vector<CMat> right_act(na);
    for (int a = 0; a < na; ++a)
      right_act[a] = da.a_on_b_right.apply_unit(a, CMat::Identity(nb, nb));
    std::vector<CMat> coeff(na);
    for (int a = 0; a < na; ++a) coeff[a] = wa.coproduct_coeff(a);
    double rp = 0.0;
    for (int a2 = 0; a2 < na; ++a2)
      for (int b2 = 0; b2 < nb; ++b2) {
        // [a (x) b][a2 (x) b2] = sum c_st [a u_s (x) (b <| u_t) b2]
        std::vector<std::pair<std::pair<int, int>, cplx>> terms;
        for (int s = 0; s < na; ++s)
          for (int t = 0; t < na; ++t)
            if (coeff[a2](s, t) != cplx(0.0)) terms.push_back({{s, t}, coeff[a2](s, t)});
        for (int a = 0; a < na; ++a)
          for (int b = 0; b < nb; ++b) {
            CVec v = CVec::Zero(T);
            for (const auto& [st, c] : terms) {
              const int as = unit_product(*A, a, st.first);
              if (as < 0) continue;
              const CVec bt = (Element::from_vector(B, right_act[st.second].col(b)) *
                               Element::unit(B, b2)).to_vector();
              for (int j = 0; j < nb; ++j) v(as * nb + j) += c * bt(j);
            }
            const Element lhs = Element::from_vector(XA, X.cls * v);
            rp = std::max(rp, distance(lhs, cls_el[a * nb + b] * cls_el[a2 * nb + b2]));
          }
      }
    add("right_product_agrees", rp);
    // [a (x) b]^* = [a1^* (x) b^* <| a2^*]
    const auto ta = transpose_index(*A);
    const auto tb = transpose_index(*B);
    double ri = 0.0;
    for (int a = 0; a < na; ++a) {
      const CMat c = wa.coproduct_coeff(a);
      for (int b = 0; b < nb; ++b) {
        CVec v = CVec::Zero(T);
        for (int s = 0; s < na; ++s)
          for (int t = 0; t < na; ++t) {
            if (c(s, t) == cplx(0.0)) continue;
            const CVec bt = right_act[ta[t]].col(tb[b]);
            for (int j = 0; j < nb; ++j) v(ta[s] * nb + j) += std::conj(c(s, t)) * bt(j);
          }
        ri = std::max(ri, distance(Element::from_vector(XA, X.cls * v), cls_el[a * nb + b].adjoint()));
      }
    }
    add("right_involution_agrees", ri);
  }
  return out;
}

PairingRecovery pairing_recovery(const WeakHopfData& wa, const WeakHopfData& wb,
                                 const Pairing& pr, double tol) {
  PairingRecovery out;
  out.applicable = is_regular(wa, tol);
  if (!out.applicable) return out;
  const PairMeasures m = pair_measures(wa, wb, pr, tol);
  const DualActions da = dual_actions(wa, wb, pr, tol);
  const AlgPtr& A = wa.algebra;
  const AlgPtr& B = wb.algebra;
  const Element gsi = invert(m.g_a.g_s);
  const Element w = gsi * gsi * m.haar_a.p;
  const CVec& phi = m.haar_a.phi;
  for (int b = 0; b < wb.dim(); ++b) {
    const CMat acted = da.b_on_a_left.apply_unit(b, CMat::Identity(wa.dim(), wa.dim()));
    for (int a = 0; a < wa.dim(); ++a) {
      const cplx v = apply_fn(phi, w * Element::from_vector(A, acted.col(a)));
      out.residual = std::max(out.residual, std::abs(v - pr.gram(a, b)));
    }
    const cplx v1 = apply_fn(phi, w * da.b_on_a_left.apply(CVec::Unit(wb.dim(), b),
                                                           Element::identity(A)));
    out.unit_specialization_residual = std::max(
        out.unit_specialization_residual,
        std::abs(v1 - pr(Element::identity(A), Element::unit(B, b))));
  }
  const Element hti = invert(m.g_b.g_t);
  const Element lhs = da.a_on_b_right.apply(m.haar_a.p.to_vector(), m.haar_b.p * hti * hti);
  out.unit_identity_residual = distance(lhs, Element::identity(B));
  return out;
}

Json dot_algebra_to_json(const DotAlgebra& d) {
  Json j;
  j["dimension"] = d.X.algebra->dim();
  j["block_dims"] = d.X.algebra->block_dims();
  j["quotient_rank"] = d.X.quotient_rank;
  j["d"] = d.measures.d;
  j["gamma"] = d.measures.gamma;
  j["markov_factor"] = d.measures.tau();
  j["relative_commutant_dim"] = d.relative_commutant_dim;
  j["intersection_dim"] = d.intersection_dim;
  j["passed"] = d.passed();
  Json cs = Json::array();
  for (const auto& c : d.checks)
    cs.push_back({{"name", c.name}, {"residual", c.residual}, {"passed", c.passed}});
  j["checks"] = cs;
  return j;
}

}  // namespace groupoidal
