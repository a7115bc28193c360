#include <algorithm>
#include <cmath>

#include "groupoidal/tlgroupoid.hpp"

namespace groupoidal {

namespace {

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

CMat delta_matrix(const std::vector<CMat>& per_unit) {
  const int n = static_cast<int>(per_unit.size());
  CMat d(n * n, n);
  for (int k = 0; k < n; ++k)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) d(s * n + t, k) = per_unit[k](s, t);
  return d;
}

std::vector<Element> images(const SubAlgebraEmbedding& e) {
  std::vector<Element> out;
  for (int k = 0; k < e.sub->dim(); ++k) out.push_back(e.image_of_unit(k));
  return out;
}

double inv_sqrt_weight(const MultiMatrixAlgebra& a, int k) {
  return 1.0 / std::sqrt(a.coordinate_weights()(k));
}

}  // namespace

double TLStructure::max_residual() const {
  double r = 0.0;
  for (const auto& c : checks) r = std::max(r, c.residual);
  return r;
}

const CheckResult* TLStructure::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

CMat coproduct_by_expectation(const InclusionData& d) {
  const AlgPtr& A = d.A.sub;
  const int n = A->dim();
  const Element hinv = invert(d.h);
  const Element tail = d.f2 * hinv * d.f1 * hinv;
  const auto a = images(d.A);
  // y_s = E_{N_1'}(a_s^* f2 h^-1 f1 h^-1), the expectation onto B here.
  const auto tr = transpose_index(*A);
  std::vector<Element> y(n);
  for (int s = 0; s < n; ++s)
    y[s] = conditional_expectation(d.B, inv_sqrt_weight(*A, s) * (a[tr[s]] * tail));
  std::vector<CMat> per(n, CMat::Zero(n, n));
  const double c = std::pow(d.tau, -2.0);
  for (int k = 0; k < n; ++k) {
    const Element f2x = d.f2 * a[k];
    for (int s = 0; s < n; ++s)
      per[k].col(s) = c * inv_sqrt_weight(*A, s) * d.A.expectation_coords(f2x * y[s]);
  }
  return delta_matrix(per);
}

CMat coproduct_by_generators(const InclusionData& d) {
  const AlgPtr& A = d.A.sub;
  const int m = d.m;
  const AlgPtr AA = tensor_algebra(A, A);
  auto e_at = [&](int p) { return jones_projection(d.tower, 2 * m, p); };
  auto j = [&](const Element& x) { return d.j1_apply(x); };
  const Element hinv = invert(d.to_A(d.h));
  const Element jhinv = j(hinv);

  TensorElement one(A, A);
  const AlgPtr& Pm = d.tower.algebra(m);
  for (int k = 0; k < Pm->dim(); ++k) {
    const Element lam = d.At.image_of_unit(k);
    const double v = Pm->block_dim(Pm->unit(k).block);
    one += (1.0 / v) * tensor_elem(j(lam.adjoint()), lam);
  }
  const Element idA = Element::identity(A);
  std::vector<Element> gens, imgs;
  for (int p = 1; p <= 2 * m - 1; ++p) {
    TensorElement dp(A, A);
    if (p < m) {
      dp = one * tensor_elem(e_at(p), idA);
    } else if (p > m) {
      dp = one * tensor_elem(idA, e_at(p));
    } else {
      for (const auto& mu_low : normalized_units(d.tower, m + 1)) {
        const Element mu = embed(d.tower, mu_low, m + 1, 2 * m);
        dp += d.delta * tensor_elem(j(jhinv * mu.adjoint()), jhinv * mu);
      }
    }
    gens.push_back(e_at(p));
    imgs.push_back(to_tensor_algebra(dp, AA));
  }
  const Element unit_image = to_tensor_algebra(one, AA);
  const CMat map = extend_over_words(A, AA, gens, imgs, false, kExtensionThreshold,
                                     &unit_image).map;
  const int n = A->dim();
  std::vector<CMat> per(n);
  for (int k = 0; k < n; ++k)
    per[k] = from_tensor_algebra(Element::from_vector(AA, map.col(k)), A, A).coeff;
  return delta_matrix(per);
}

CMat coproduct_b_by_base(const InclusionData& d) {
  const AlgPtr& A = d.A.sub;
  const AlgPtr& B = d.B.sub;
  const int na = A->dim(), nb = B->dim();
  const Element hinv = invert(d.h);
  const Element jhinv = d.from_A(d.j1_apply(d.to_A(hinv)));
  // Pimsner-Popa base of A over N_0'∩N_1: a_r j_1(h^-1).
  std::vector<Element> alpha;
  for (int r = 0; r < na; ++r)
    alpha.push_back(inv_sqrt_weight(*A, r) * (d.A.image_of_unit(r) * jhinv));
  std::vector<Element> tail;
  for (const auto& al : alpha) tail.push_back(hinv * d.f2 * hinv * al.adjoint());
  const auto b = images(d.B);
  const auto tr = transpose_index(*B);
  std::vector<CMat> per(nb, CMat::Zero(nb, nb));
  for (int k = 0; k < nb; ++k)
    for (int p = 0; p < nb; ++p) {
      const Element bp_star = inv_sqrt_weight(*B, p) * b[tr[p]];
      Element left(d.top);
      for (int r = 0; r < na; ++r)
        left += conditional_expectation(d.A, b[k] * alpha[r] * bp_star) * tail[r];
      per[k].col(p) = inv_sqrt_weight(*B, p) * d.B.expectation_coords(left);
    }
  return delta_matrix(per);
}

TLStructure build_structure(const InclusionData& d, double tol) {
  TLStructure s;
  s.pairing = tl_pairing(d);
  const auto [lo, hi] = s.pairing.singular_range();
  s.gram_min_sv = lo;
  s.gram_condition = lo > 0.0 ? hi / lo : INFINITY;
  if (s.pairing.degenerate()) throw ConstructionError("degenerate pairing");

  const AlgPtr& A = d.A.sub;
  const AlgPtr& B = d.B.sub;
  const int na = A->dim(), nb = B->dim();
  const Element hA = d.to_A(d.h), hinvA = invert(hA);
  const Element hB = d.to_B(d.h), hinvB = invert(hB);

  s.A.algebra = A;
  s.A.eps = CVec(na);
  const Element ka = d.h * d.f1 * d.h;
  for (int k = 0; k < na; ++k) s.A.eps(k) = trace(ka * d.A.image_of_unit(k)) / d.tau;
  s.A.antipode = CMat(na, na);
  const Element jh = d.j1_apply(hA), jhinv = d.j1_apply(hinvA);
  for (int k = 0; k < na; ++k)
    s.A.antipode.col(k) =
        (jh * hinvA * d.j1_apply(Element::unit(A, k)) * jhinv * hA).to_vector();

  s.B.algebra = B;
  s.B.eps = CVec(nb);
  const Element kb = d.h * d.f2 * d.h;
  for (int k = 0; k < nb; ++k) s.B.eps(k) = trace(kb * d.B.image_of_unit(k)) / d.tau;
  s.B.antipode = CMat(nb, nb);
  const Element j2h = d.j2_apply(hB), j2hinv = d.j2_apply(hinvB);
  for (int k = 0; k < nb; ++k)
    s.B.antipode.col(k) =
        (hB * j2hinv * d.j2_apply(Element::unit(B, k)) * hinvB * j2h).to_vector();

  const Pairing prT = s.pairing.transposed();
  s.B.delta = dual(s.A, s.pairing).delta;
  s.A.delta = dual(s.B, prT).delta;

  auto add = [&](const std::string& name, double r) {
    s.checks.push_back({name, r, std::isfinite(r) && r <= tol});
  };
  DualReport ra, rb;
  dual(s.A, s.pairing, &ra);
  dual(s.B, prT, &rb);
  add("pairing_counit_A", rb.unit_residual);
  add("pairing_counit_B", ra.unit_residual);
  add("pairing_star_A", ra.star_residual);
  add("pairing_star_B", rb.star_residual);
  add("antipode_duality",
      max_abs(CMat(s.A.antipode.transpose() * s.pairing.gram - s.pairing.gram * s.B.antipode)));

  const CMat by_exp = coproduct_by_expectation(d);
  const CMat by_gen = coproduct_by_generators(d);
  add("coproduct_gram_vs_expectation", max_abs(CMat(s.A.delta - by_exp)));
  add("coproduct_gram_vs_generators", max_abs(CMat(s.A.delta - by_gen)));
  add("coproduct_expectation_vs_generators", max_abs(CMat(by_exp - by_gen)));
  add("coproduct_B_gram_vs_base", max_abs(CMat(s.B.delta - coproduct_b_by_base(d))));

  for (const auto& c : s.checks)
    if (!c.passed)
      throw ConstructionError("cross-check " + c.name + " failed (residual " +
                              std::to_string(c.residual) + ")");
  return s;
}

std::vector<CheckResult> construction_identities(const InclusionData& d, const TLStructure& s,
                                                 double tol) {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, double r) {
    out.push_back({name, r, std::isfinite(r) && r <= tol});
  };
  const AlgPtr& A = d.A.sub;
  const AlgPtr& B = d.B.sub;
  const int na = A->dim(), nb = B->dim();
  const Element& f1 = d.f1;
  const Element& f2 = d.f2;

  add("jones_relations",
      std::max({distance(f1 * f1, f1), distance(f1.adjoint(), f1), distance(f2 * f2, f2),
                distance(f2.adjoint(), f2), distance(f2 * f1 * f2, d.tau * f2),
                distance(f1 * f2 * f1, d.tau * f1)}));

  const auto base = images(d.base);
  double rc = 0.0;
  for (const auto& x : base) rc = std::max(rc, distance(d.H * x, x * d.H));
  rc = std::max(rc, std::abs(trace(d.H) - cplx(d.base.sub->dim())));
  add("index_central", rc);

  // j_1 and j_2 of x in N_1'∩N_2, both as top elements.
  auto j1x = [&](const Element& x) { return d.from_A(d.j1_apply(d.to_A(x))); };
  auto j2x = [&](const Element& x) { return d.from_B(d.j2_apply(d.to_B(x))); };
  double rl = 0.0;
  for (const auto& x : base) {
    rl = std::max(rl, distance(f2 * j2x(x), f2 * x));
    rl = std::max(rl, distance(f1 * x, f1 * j1x(x)));
    rl = std::max(rl, distance(j2x(x) * f1 * f2, f1 * f2 * j1x(x)));
  }
  add("h_commutation", rl);

  double rj = 0.0;
  rj = std::max(rj, max_abs(CMat(d.j1 * d.j1 - CMat::Identity(na, na))));
  rj = std::max(rj, max_abs(CMat(d.j2 * d.j2 - CMat::Identity(nb, nb))));
  for (int k = 0; k < na; ++k)
    rj = std::max(rj, std::abs(trace(d.j1_apply(Element::unit(A, k))) -
                               trace(Element::unit(A, k))));
  for (int k = 0; k < nb; ++k)
    rj = std::max(rj, std::abs(trace(d.j2_apply(Element::unit(B, k))) -
                               trace(Element::unit(B, k))));
  add("j_involutive_trace", rj);

  // Symmetric form of the pairing.
  {
    const Element jh2 = j2x(d.h), jh1 = j1x(d.h);
    const Element k = jh2 * f2 * f1 * jh1;
    double r = 0.0;
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b) {
        const cplx v = trace(d.A.image_of_unit(a) * k * d.B.image_of_unit(b)) /
                       (d.tau * d.tau);
        r = std::max(r, std::abs(v - s.pairing.gram(a, b)));
      }
    add("pairing_symmetric_form", r);
  }
  // <a, bx> = <xa, b> and <a, j2(x) b> = <a j1(x), b>.
  {
    const CMat& G = s.pairing.gram;
    double r = 0.0;
    for (const auto& x : base) {
      const Element xa = d.to_A(x), xb = d.to_B(x);
      const Element j1 = d.j1_apply(xa), j2 = d.j2_apply(xb);
      const CMat rb = right_mult_matrix(*B, xb.to_vector());
      const CMat la = left_mult_matrix(*A, xa.to_vector());
      const CMat lb = left_mult_matrix(*B, j2.to_vector());
      const CMat ra = right_mult_matrix(*A, j1.to_vector());
      r = std::max(r, max_abs(CMat(G * rb - la.transpose() * G)));
      r = std::max(r, max_abs(CMat(G * lb - ra.transpose() * G)));
    }
    add("pairing_side_identities", r);
  }

  // Quasi-bases: {b_p h^-1} of N_3 over N_2 and of N_1'∩N_3 over N_1'∩N_2,
  // {a_s j_1(h^-1)} of N_2 over N_1 restricted to A.
  {
    std::vector<Element> bn;
    for (int p = 0; p < nb; ++p) bn.push_back(inv_sqrt_weight(*B, p) * d.B.image_of_unit(p));
    const Element hinv = invert(d.h);
    add("quasi_base_over_N2", quasi_base(bn, hinv, d.A).residual(mma_basis(d.top)));
    add("quasi_base_relative", quasi_base(bn, hinv, d.base).residual(images(d.B)));
    std::vector<Element> an;
    for (int s2 = 0; s2 < na; ++s2) an.push_back(inv_sqrt_weight(*A, s2) * Element::unit(A, s2));
    const Element jhinv = d.j1_apply(invert(d.to_A(d.h)));
    add("quasi_base_A", quasi_base(an, jhinv, d.At).residual(mma_basis(A)));
    Element sum(d.top);
    for (const auto& a : an) {
      const Element al = d.from_A(a * jhinv);
      sum += al * f2 * al.adjoint();
    }
    add("pimsner_popa_sum", distance(sum, Element::identity(d.top)));
  }

  // Module properties of the coproducts over N_1'∩N_2.
  {
    double r = 0.0;
    auto D = [](const WeakHopfData& w, const Element& x) { return w.coproduct(x); };
    for (const auto& x : base) {
      const Element xa = d.to_A(x), xb = d.to_B(x);
      const Element j1 = d.j1_apply(xa), j2 = d.j2_apply(xb);
      const Element oneA = Element::identity(A), oneB = Element::identity(B);
      for (int k = 0; k < nb; ++k) {
        const Element b = Element::unit(B, k);
        r = std::max(r, (D(s.B, b * xb) - D(s.B, b) * tensor_elem(xb, oneB)).max_abs());
        r = std::max(r, (D(s.B, j2 * b) - tensor_elem(oneB, j2) * D(s.B, b)).max_abs());
      }
      for (int k = 0; k < na; ++k) {
        const Element a = Element::unit(A, k);
        r = std::max(r, (D(s.A, a * j1) - D(s.A, a) * tensor_elem(j1, oneA)).max_abs());
        r = std::max(r, (D(s.A, xa * a) - tensor_elem(oneA, xa) * D(s.A, a)).max_abs());
      }
    }
    add("coproduct_base_module", r);
  }

  // S_A^2 = Ad(j_1(H) H^-1), S_B^2 = Ad(j_2(H^-1) H).
  {
    const Element HA = d.to_A(d.H), HB = d.to_B(d.H);
    const Element ua = d.j1_apply(HA) * invert(HA);
    const Element ub = d.j2_apply(invert(HB)) * HB;
    const Element ua_inv = invert(ua), ub_inv = invert(ub);
    double r = 0.0;
    for (int k = 0; k < na; ++k) {
      const Element a = Element::unit(A, k);
      r = std::max(r, distance(s.A.S(s.A.S(a)), ua * a * ua_inv));
    }
    for (int k = 0; k < nb; ++k) {
      const Element b = Element::unit(B, k);
      r = std::max(r, distance(s.B.S(s.B.S(b)), ub * b * ub_inv));
    }
    add("antipode_square", r);
  }
  // S_A(e_p) = e_{2m-p} for p != m.
  {
    double r = 0.0;
    for (int p = 1; p <= 2 * d.m - 1; ++p)
      if (p != d.m) r = std::max(r, distance(s.A.S(d.eA(p)), d.eA(2 * d.m - p)));
    add("antipode_on_generators", r);
  }
  // eps_B^t(x) = tau^-1 E_{N_1'∩N_2}(x h f2 h^-1) and
  // eps_B^s(x) = tau^-1 E_{N_2'∩N_3}(j_2(x) h f2 h^-1).
  {
    const CounitMaps cm = counit_maps(s.B);
    const Element tail = d.h * f2 * invert(d.h);
    const Element& stail = tail;
    const SubAlgebraEmbedding bs = span_closure(
        [&] {
          std::vector<Element> g;
          for (int p = 2 * d.m + 1; p <= 3 * d.m - 1; ++p) g.push_back(d.e[p]);
          return g;
        }(),
        d.top);
    double r = 0.0;
    for (int k = 0; k < nb; ++k) {
      const Element x = d.B.image_of_unit(k);
      const Element t = (1.0 / d.tau) * conditional_expectation(d.base, x * tail);
      r = std::max(r, distance(d.from_B(Element::from_vector(B, cm.target.col(k))), t));
      const Element jx = d.from_B(d.j2_apply(Element::unit(B, k)));
      const Element so = (1.0 / d.tau) * conditional_expectation(bs, jx * stail);
      r = std::max(r, distance(d.from_B(Element::from_vector(B, cm.source.col(k))), so));
    }
    add("counit_maps_formula", r);
  }
  return out;
}

FormulaHaar haar_from_formula(const InclusionData& d) {
  FormulaHaar out;
  out.d = d.base.sub->dim();
  const double inv_d = 1.0 / out.d;
  out.p_A = inv_d * d.to_A(d.h * d.f1 * d.h);
  out.p_B = inv_d * d.to_B(d.h * d.f2 * d.h);
  const Element HA = d.to_A(d.H), HB = d.to_B(d.H);
  const Element wa = inv_d * d.from_A(HA * d.j1_apply(HA));
  const Element wb = inv_d * d.from_B(HB * d.j2_apply(HB));
  out.phi_A = CVec(d.A.sub->dim());
  for (int k = 0; k < d.A.sub->dim(); ++k) out.phi_A(k) = trace(wa * d.A.image_of_unit(k));
  out.phi_B = CVec(d.B.sub->dim());
  for (int k = 0; k < d.B.sub->dim(); ++k) out.phi_B(k) = trace(wb * d.B.image_of_unit(k));
  return out;
}

bool SelfDualityReport::passed(double tol) const {
  return shift.ok && shift.residual <= tol && dual_residual <= tol &&
         double_dual_residual <= tol;
}

SelfDualityReport selfduality_check(const InclusionData& d, const TLStructure& s) {
  if (d.m % 2 != 0) throw AlgebraError("self-duality check needs m even");
  SelfDualityReport out;
  std::vector<std::pair<Element, Element>> gens;
  for (int p = 1; p <= 2 * d.m - 1; ++p) gens.push_back({d.eA(p), d.eB(p + d.m)});
  out.shift = iso_check(s.A, s.B, gens);
  const WeakHopfData da = dual(s.A, s.pairing);
  const int nb = d.B.sub->dim(), na = d.A.sub->dim();
  out.dual_residual = intertwiner_residual(da, s.B, CMat::Identity(nb, nb));
  const WeakHopfData dda = dual(da, s.pairing.transposed());
  out.double_dual_residual = intertwiner_residual(dda, s.A, CMat::Identity(na, na));
  return out;
}

}  // namespace groupoidal
