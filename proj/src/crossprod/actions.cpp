#include <algorithm>
#include <cmath>
#include <random>

#include "groupoidal/crossprod.hpp"

namespace groupoidal {

namespace {

CheckResult make_check(const std::string& name, double r, double tol) {
  return {name, r, std::isfinite(r) && r <= tol};
}

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

CVec one_of(const AlgPtr& a) { return Element::identity(a).to_vector(); }

// Random elements used when the full unit basis would be too slow.
std::vector<CVec> probe_vectors(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<CVec> out;
  for (int i = 0; i < count; ++i) {
    CVec v(dim);
    for (int k = 0; k < dim; ++k) v(k) = cplx(nd(rng), nd(rng));
    out.push_back(v / v.norm());
  }
  return out;
}

constexpr int kFullModuleLimit = 40;

}  // namespace

int ModuleAction::count() const {
  return static_cast<int>(factored() ? inner.size() : act.size());
}

CMat ModuleAction::apply_unit(int k, const CMat& v) const {
  if (!factored()) return act[k] * v;
  const CMat w = lift * v;
  const int ng = static_cast<int>(inner[k].cols());
  const int reps = static_cast<int>(w.rows()) / ng;
  CMat u(inner[k].rows() * reps, w.cols());
  for (int c = 0; c < w.cols(); ++c) {
    // Column c of w read as an ng x reps matrix (tensor index m * ng + j).
    const Eigen::Map<const CMat> wc(w.col(c).data(), ng, reps);
    Eigen::Map<CMat>(u.col(c).data(), inner[k].rows(), reps) = inner[k] * wc;
  }
  return outer * u;
}

CMat ModuleAction::apply(const CVec& g, const CMat& v) const {
  CMat out = CMat::Zero(module->dim(), v.cols());
  for (int k = 0; k < count(); ++k)
    if (g(k) != cplx(0.0)) out += g(k) * apply_unit(k, v);
  return out;
}

Element ModuleAction::apply(const CVec& g, const Element& m) const {
  return Element::from_vector(module, apply(g, CMat(m.to_vector())).col(0));
}

CMat ModuleAction::operator_of(const CVec& g) const {
  const int n = module->dim();
  if (factored()) return apply(g, CMat::Identity(n, n));
  CMat out = CMat::Zero(n, n);
  for (int k = 0; k < count(); ++k)
    if (g(k) != cplx(0.0)) out += g(k) * act[k];
  return out;
}

std::vector<CheckResult> module_algebra_checks(const WeakHopfData& g, const ModuleAction& action,
                                               const std::string& prefix, double tol) {
  const AlgPtr& M = action.module;
  const int ng = g.dim(), nm = M->dim();
  std::vector<CheckResult> out;

  // Elements the multiplicativity law is tested on: the unit basis for small
  // modules, fixed random elements otherwise.
  std::vector<CVec> xs;
  if (nm <= kFullModuleLimit) {
    for (int k = 0; k < nm; ++k) xs.push_back(CVec::Unit(nm, k));
  } else {
    xs = probe_vectors(nm, 6, 0x5eed);
  }
  CMat xmat(nm, static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) xmat.col(static_cast<int>(i)) = xs[i];
  std::vector<std::vector<Element>> img(ng);
  for (int s = 0; s < ng; ++s) {
    const CMat ax = action.apply_unit(s, xmat);
    for (int i = 0; i < ax.cols(); ++i) img[s].push_back(Element::from_vector(M, ax.col(i)));
  }

  double r1 = 0.0;
  for (int k = 0; k < ng; ++k) {
    const CMat c = g.coproduct_coeff(k);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const Element x = Element::from_vector(M, xs[i]), y = Element::from_vector(M, xs[j]);
        // Same shape for both sides: g |> (xy) = (g1 |> x)(g2 |> y) and
        // (xy) <| g = (x <| g1)(y <| g2).
        Element rhs(M);
        for (int s = 0; s < ng; ++s)
          for (int t = 0; t < ng; ++t)
            if (c(s, t) != cplx(0.0)) rhs += c(s, t) * (img[s][i] * img[t][j]);
        const Element lhs =
            Element::from_vector(M, action.apply_unit(k, CMat((x * y).to_vector())).col(0));
        r1 = std::max(r1, distance(lhs, rhs));
      }
  }
  out.push_back(make_check(prefix + "multiplicative", r1, tol));

  // (g |> x)^* = S(g)^* |> x^*, or (x <| g)^* = x^* <| S(g)^*.
  double r2 = 0.0;
  CMat xcols(nm, static_cast<int>(xs.size())), xstar(nm, static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xcols.col(static_cast<int>(i)) = xs[i];
    xstar.col(static_cast<int>(i)) = star_coords(*M, xs[i]);
  }
  for (int k = 0; k < ng; ++k) {
    const CVec sg = star_coords(*g.algebra, g.antipode.col(k));
    const CMat lhs = action.apply_unit(k, xcols);
    const CMat rhs = action.apply(sg, xstar);
    for (int i = 0; i < lhs.cols(); ++i)
      r2 = std::max(r2, (star_coords(*M, lhs.col(i)) - rhs.col(i)).cwiseAbs().maxCoeff());
  }
  out.push_back(make_check(prefix + "star", r2, tol));

  // g |> 1 = eps_t(g) |> 1, or 1 <| g = 1 <| eps_s(g).
  const CounitMaps cm = counit_maps(g);
  const CVec one = one_of(M);
  double r3 = 0.0;
  for (int k = 0; k < ng; ++k) {
    const CVec base = action.right ? CVec(cm.source.col(k)) : CVec(cm.target.col(k));
    r3 = std::max(r3, max_abs(action.apply_unit(k, CMat(one)) - action.apply(base, CMat(one))));
  }
  out.push_back(make_check(prefix + "unit_base", r3, tol));

  const double r4 = max_abs(action.apply(one_of(g.algebra), xcols) - xcols);
  out.push_back(make_check(prefix + "unital", r4, tol));
  return out;
}

bool DualActions::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* DualActions::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

DualActions dual_actions(const WeakHopfData& wa, const WeakHopfData& wb, const Pairing& pr,
                         double tol) {
  if (pr.degenerate()) throw ConstructionError("degenerate pairing");
  const int na = wa.dim(), nb = wb.dim();
  const CMat& G = pr.gram;
  DualActions out;
  auto blank = [](const AlgPtr& m, int count, bool right) {
    ModuleAction a;
    a.module = m;
    a.act.assign(count, CMat::Zero(m->dim(), m->dim()));
    a.right = right;
    return a;
  };
  out.a_on_b_right = blank(wb.algebra, na, true);
  out.a_on_b_left = blank(wb.algebra, na, false);
  out.b_on_a_left = blank(wa.algebra, nb, false);
  out.b_on_a_right = blank(wa.algebra, nb, true);
  for (int k = 0; k < nb; ++k) {
    const CMat d = wb.coproduct_coeff(k);  // Delta(v_k) over v_s (x) v_t
    for (int a = 0; a < na; ++a) {
      const CVec ga = G.row(a).transpose();
      out.a_on_b_right.act[a].col(k) = d.transpose() * ga;  // <a, b1> b2
      out.a_on_b_left.act[a].col(k) = d * ga;               // <a, b2> b1
    }
  }
  for (int k = 0; k < na; ++k) {
    const CMat c = wa.coproduct_coeff(k);
    for (int b = 0; b < nb; ++b) {
      const CVec gb = G.col(b);
      out.b_on_a_left.act[b].col(k) = c * gb;               // <a2, b> a1
      out.b_on_a_right.act[b].col(k) = c.transpose() * gb;  // <a1, b> a2
    }
  }

  // Characterizations through the pairing.
  double rc = 0.0;
  for (int a = 0; a < na; ++a) {
    const CMat la = left_mult_matrix(*wa.algebra, CVec::Unit(na, a));
    const CMat ra = right_mult_matrix(*wa.algebra, CVec::Unit(na, a));
    rc = std::max(rc, max_abs(G * out.a_on_b_right.act[a] - la.transpose() * G));  // <ax, b>
    rc = std::max(rc, max_abs(G * out.a_on_b_left.act[a] - ra.transpose() * G));   // <xa, b>
  }
  for (int b = 0; b < nb; ++b) {
    const CMat lb = left_mult_matrix(*wb.algebra, CVec::Unit(nb, b));
    const CMat rb = right_mult_matrix(*wb.algebra, CVec::Unit(nb, b));
    rc = std::max(rc, max_abs(out.b_on_a_left.act[b].transpose() * G - G * rb));   // <a, yb>
    rc = std::max(rc, max_abs(out.b_on_a_right.act[b].transpose() * G - G * lb));  // <a, by>
  }
  out.checks.push_back(make_check("pairing_characterization", rc, tol));

  for (auto&& c : module_algebra_checks(wa, out.a_on_b_right, "a_on_b_right_", tol))
    out.checks.push_back(c);
  for (auto&& c : module_algebra_checks(wb, out.b_on_a_left, "b_on_a_left_", tol))
    out.checks.push_back(c);
  for (auto&& c : module_algebra_checks(wa, out.a_on_b_left, "a_on_b_left_", tol))
    out.checks.push_back(c);
  for (auto&& c : module_algebra_checks(wb, out.b_on_a_right, "b_on_a_right_", tol))
    out.checks.push_back(c);

  // Standardness: A_s -> B_t, x -> 1_b <| x, inverse y -> y |> 1_a.
  const CounitalSubalgebras ca = counital_subalgebras(wa), cb = counital_subalgebras(wb);
  const CVec one_a = one_of(wa.algebra), one_b = one_of(wb.algebra);
  auto to_bt = [&](const Element& x) {
    return Element::from_vector(wb.algebra,
                                out.a_on_b_right.operator_of(x.to_vector()) * one_b);
  };
  auto to_as = [&](const Element& y) {
    return Element::from_vector(wa.algebra, out.b_on_a_left.operator_of(y.to_vector()) * one_a);
  };
  double rs = 0.0;
  for (int i = 0; i < ca.source.sub->dim(); ++i) {
    const Element x = ca.source.image_of_unit(i);
    const Element y = to_bt(x);
    rs = std::max(rs, cb.target.distance_to_image(y));
    rs = std::max(rs, distance(to_as(y), x));
    rs = std::max(rs, distance(to_bt(x.adjoint()), y.adjoint()));
    for (int j = 0; j < ca.source.sub->dim(); ++j) {
      const Element x2 = ca.source.image_of_unit(j);
      rs = std::max(rs, distance(to_bt(x * x2), y * to_bt(x2)));
    }
  }
  for (int i = 0; i < cb.target.sub->dim(); ++i) {
    const Element y = cb.target.image_of_unit(i);
    rs = std::max(rs, distance(to_bt(to_as(y)), y));
  }
  if (ca.source.sub->dim() != cb.target.sub->dim()) rs = std::max(rs, 1.0);
  out.checks.push_back(make_check("standardness", rs, tol));

  // Base-algebra rules, then the same rules with the roles of A and B swapped.
  auto rules = [&](const WeakHopfData& wx, const WeakHopfData& wy, const ModuleAction& left,
                   const ModuleAction& right, const CounitalSubalgebras& cx) {
    const AlgPtr& Y = wy.algebra;
    const CVec one_y = one_of(Y);
    double r = 0.0;
    for (int k = 0; k < wy.dim(); ++k) {
      const Element b = Element::unit(Y, k);
      for (int i = 0; i < cx.target.sub->dim(); ++i) {
        const CVec x = cx.target.image_of_unit(i).to_vector();
        const Element x1 = Element::from_vector(Y, left.operator_of(x) * one_y);
        const Element x1r = Element::from_vector(Y, right.operator_of(x) * one_y);
        r = std::max(r, distance(left.apply(x, b), x1 * b));
        r = std::max(r, distance(right.apply(x, b), x1r * b));
      }
      for (int i = 0; i < cx.source.sub->dim(); ++i) {
        const CVec y = cx.source.image_of_unit(i).to_vector();
        const Element y1 = Element::from_vector(Y, left.operator_of(y) * one_y);
        const Element y1r = Element::from_vector(Y, right.operator_of(y) * one_y);
        r = std::max(r, distance(left.apply(y, b), b * y1));
        r = std::max(r, distance(right.apply(y, b), b * y1r));
      }
    }
    (void)wx;
    return r;
  };
  out.checks.push_back(make_check(
      "base_rules", rules(wa, wb, out.a_on_b_left, out.a_on_b_right, ca), tol));
  out.checks.push_back(make_check(
      "base_rules_swapped", rules(wb, wa, out.b_on_a_left, out.b_on_a_right, cb), tol));
  return out;
}

}  // namespace groupoidal
