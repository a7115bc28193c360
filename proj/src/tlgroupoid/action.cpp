#include <algorithm>
#include <cmath>

#include "groupoidal/tlgroupoid.hpp"

namespace groupoidal {

namespace {

// a ▷ x for a in A and x in N_0'∩N_1, everything in A coordinates.
struct ActionKernel {
  const InclusionData& d;
  Element tail;  // h f1 h^-1

  explicit ActionKernel(const InclusionData& data) : d(data) {
    const Element h = d.to_A(d.h);
    tail = h * d.to_A(d.f1) * invert(h);
  }
  Element operator()(const Element& a, const Element& x) const {
    return (1.0 / d.tau) * conditional_expectation(d.At, a * x * tail);
  }
};

}  // namespace

Element action_on_tower(const InclusionData& d, const Element& a, const Element& x) {
  if (a.parent()->dim() != d.A.sub->dim() || x.parent()->dim() != d.A.sub->dim())
    throw AlgebraError("action arguments must be given in A coordinates");
  if (d.At.distance_to_image(x) > 1e-8 * std::max(1.0, x.max_abs()))
    throw AlgebraError("x is outside N_0'∩N_1");
  return ActionKernel(d)(a, x);
}

ActionReport action_report(const InclusionData& d, const TLStructure& s, double tol) {
  ActionReport out;
  auto add = [&](const std::string& name, double r) {
    out.checks.push_back({name, r, std::isfinite(r) && r <= tol});
  };
  const ActionKernel act(d);
  const AlgPtr& A = d.A.sub;
  const int na = A->dim(), nt = d.At.sub->dim();
  std::vector<Element> x(nt);
  for (int i = 0; i < nt; ++i) x[i] = d.At.image_of_unit(i);
  // table[s][i] = u_s ▷ x_i
  std::vector<std::vector<Element>> table(na, std::vector<Element>(nt));
  for (int s2 = 0; s2 < na; ++s2)
    for (int i = 0; i < nt; ++i) table[s2][i] = act(Element::unit(A, s2), x[i]);
  auto act_lin = [&](const CVec& a, const Element& y) {
    const CVec c = d.At.expectation_coords(y);
    Element r(A);
    for (int s2 = 0; s2 < na; ++s2)
      if (a(s2) != cplx(0.0))
        for (int i = 0; i < nt; ++i)
          if (c(i) != cplx(0.0)) r += (a(s2) * c(i)) * table[s2][i];
    return r;
  };

  const CVec one = Element::identity(A).to_vector();
  double r = 0.0;
  for (int i = 0; i < nt; ++i) r = std::max(r, distance(act_lin(one, x[i]), x[i]));
  add("action_unit", r);

  r = 0.0;
  for (int a = 0; a < na; ++a)
    for (int c = 0; c < na; ++c) {
      const int ac = unit_product(*A, a, c);
      for (int i = 0; i < nt; ++i) {
        const Element lhs = act_lin(CVec::Unit(na, a), table[c][i]);
        const Element rhs = ac >= 0 ? table[ac][i] : Element(A);
        r = std::max(r, distance(lhs, rhs));
      }
    }
  add("action_associative", r);

  double rp = 0.0, rl = 0.0, rs = 0.0;
  for (int a = 0; a < na; ++a) {
    const CMat c = s.A.coproduct_coeff(a);
    const Element ua = Element::unit(A, a);
    for (int i = 0; i < nt; ++i) {
      for (int k = 0; k < nt; ++k) {
        Element rhs(A);
        for (int p = 0; p < na; ++p)
          for (int q = 0; q < na; ++q)
            if (c(p, q) != cplx(0.0)) rhs += c(p, q) * (table[p][i] * table[q][k]);
        rp = std::max(rp, distance(act_lin(CVec::Unit(na, a), x[i] * x[k]), rhs));
      }
      Element lhs(A);
      for (int p = 0; p < na; ++p)
        for (int q = 0; q < na; ++q)
          if (c(p, q) != cplx(0.0)) lhs += c(p, q) * (table[p][i] * Element::unit(A, q));
      rl = std::max(rl, distance(lhs, ua * x[i]));
      const Element sa = s.A.S(ua).adjoint();
      rs = std::max(rs, distance(table[a][i].adjoint(), act_lin(sa.to_vector(), x[i].adjoint())));
    }
  }
  add("action_product", rp);
  add("action_coproduct_identity", rl);
  add("action_star", rs);

  const CounitMaps cm = counit_maps(s.A);
  const Element oneA = Element::identity(A);
  r = 0.0;
  for (int a = 0; a < na; ++a)
    r = std::max(r, distance(act_lin(CVec::Unit(na, a), oneA),
                             Element::from_vector(A, cm.target.col(a))));
  add("action_on_unit", r);

  // Fixed points: x with (u_a - eps_t(u_a)) ▷ x = 0 for every unit u_a.
  RowStack rows(nt);
  for (int a = 0; a < na; ++a) {
    const CVec diff = CVec::Unit(na, a) - cm.target.col(a);
    CMat block(na, nt);
    for (int i = 0; i < nt; ++i) block.col(i) = act_lin(diff, x[i]).to_vector();
    rows.add(block);
  }
  const CMat fixed = rows.nullspace(1e-8);
  out.fixed_point_dim = static_cast<int>(fixed.cols());
  // The fixed space should be the scalars.
  double rf = 0.0;
  if (fixed.cols() == 1) {
    Element f(A);
    for (int i = 0; i < nt; ++i) f += fixed(i, 0) * x[i];
    const cplx c = f.block(0)(0, 0);
    rf = distance(f, c * oneA);
  } else {
    rf = INFINITY;
  }
  add("fixed_points_scalar", rf);
  return out;
}

}  // namespace groupoidal
