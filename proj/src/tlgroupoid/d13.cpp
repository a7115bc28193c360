#include <algorithm>
#include <cmath>

#include "groupoidal/tlgroupoid.hpp"

namespace groupoidal {

namespace {

// Coefficient k * z^zp on left (x) right, units named as in the fixture.
struct Term {
  double k;
  int zp;
  const char* left;
  const char* right;
};

const std::vector<Term> kDeltaOne = {
    {1, 0, "c11", "c11"}, {1, 0, "c11", "e11"}, {1, 0, "c22", "c22"}, {1, 0, "c22", "e22"},
    {1, 0, "c22", "e33"}, {1, 0, "e11", "c22"}, {1, 0, "e11", "e22"}, {1, 0, "e11", "e33"},
    {1, 0, "e22", "c22"}, {1, 0, "e22", "e22"}, {1, 0, "e22", "e33"}, {1, 0, "e33", "c11"},
    {1, 0, "e33", "e11"}};

const std::vector<Term> kDeltaE1 = {{1, 0, "c11", "c11"}, {1, 0, "c11", "e11"},
                                    {1, 0, "e11", "c22"}, {1, 0, "e11", "e22"},
                                    {1, 0, "e11", "e33"}};

const std::vector<Term> kDeltaE3 = {{1, 0, "c11", "c11"}, {1, 0, "c22", "e33"},
                                    {1, 0, "e11", "e33"}, {1, 0, "e22", "e33"},
                                    {1, 0, "e33", "c11"}};

const std::vector<Term> kDeltaE2 = {
    {1, 4, "c11", "c11"},  {1, 4, "c11", "e11"},
    {1, 3, "c12", "c12"},  {1, 5, "c12", "e12"},  {1, 4, "c12", "e13"},
    {1, 3, "c21", "c21"},  {1, 5, "c21", "e21"},  {1, 4, "c21", "e31"},
    {1, 2, "c22", "c22"},  {1, 6, "c22", "e22"},  {1, 5, "c22", "e23"},
    {1, 5, "c22", "e32"},  {1, 4, "c22", "e33"},
    {1, 4, "e11", "c22"},  {1, 4, "e11", "e22"},  {1, 4, "e11", "e33"},
    {1, 5, "e12", "c22"},  {-1, 7, "e12", "e22"}, {1, 4, "e12", "e23"}, {1, 4, "e12", "e32"},
    {1, 4, "e13", "c21"},  {1, 6, "e13", "e21"},  {1, 5, "e13", "e31"},
    {1, 5, "e21", "c22"},  {-1, 7, "e21", "e22"}, {1, 4, "e21", "e23"}, {1, 4, "e21", "e32"},
    {1, 6, "e22", "c22"},  {2, 6, "e22", "e22"},  {-1, 7, "e22", "e23"},
    {-1, 7, "e22", "e32"}, {1, 4, "e22", "e33"},
    {1, 5, "e23", "c21"},  {1, 7, "e23", "e21"},  {1, 6, "e23", "e31"},
    {1, 4, "e31", "c12"},  {1, 6, "e31", "e12"},  {1, 5, "e31", "e13"},
    {1, 5, "e32", "c12"},  {1, 7, "e32", "e12"},  {1, 6, "e32", "e13"},
    {1, 4, "e33", "c11"},  {1, 4, "e33", "e11"}};

// Coproduct of the second structure in the same units (its two blocks are
// the c and e families).
const std::vector<std::pair<const char*, std::vector<Term>>> kSecondStructure = {
    {"c11", {{1, 0, "c11", "c11"}, {1, 0, "e11", "e33"}}},
    {"c12", {{1, 0, "c12", "c12"}, {1, 2, "e13", "e31"}, {1, 1, "e12", "e32"}}},
    {"c22",
     {{1, 0, "c22", "c22"}, {1, 4, "e33", "e11"}, {1, 3, "e32", "e12"}, {1, 3, "e23", "e21"},
      {1, 2, "e22", "e22"}}},
    {"e11", {{1, 0, "c11", "e11"}, {1, 0, "e11", "c22"}, {1, 0, "e11", "e22"}}},
    {"e12",
     {{1, 0, "c12", "e12"}, {1, 0, "e12", "c22"}, {1, 1, "e13", "e21"}, {-1, 2, "e12", "e22"}}},
    {"e13", {{1, 0, "c12", "e13"}, {1, 0, "e13", "c21"}, {1, 0, "e12", "e23"}}},
    {"e22",
     {{1, 0, "c22", "e22"}, {1, 0, "e22", "c22"}, {1, 4, "e22", "e22"}, {1, 2, "e33", "e11"},
      {-1, 3, "e32", "e12"}, {-1, 3, "e23", "e21"}}},
    {"e23",
     {{1, 0, "c22", "e23"}, {1, 0, "e23", "c21"}, {1, 1, "e32", "e13"}, {-1, 2, "e22", "e23"}}},
    {"e33", {{1, 0, "c22", "e33"}, {1, 0, "e22", "e33"}, {1, 0, "e33", "c11"}}}};

struct Scaled {
  double k;
  int zp;
  const char* unit;
};

const std::vector<std::pair<const char*, Scaled>> kAntipode = {
    {"c12", {1, 0, "c21"}},  {"c21", {1, 0, "c12"}},  {"e12", {1, -1, "e23"}},
    {"e21", {1, 1, "e32"}},  {"e13", {1, -2, "e13"}}, {"e31", {1, 2, "e31"}}};

const std::vector<Scaled> kE2Expansion = {
    {1, 4, "c11"}, {1, 3, "c12"}, {1, 3, "c21"}, {1, 2, "c22"}, {1, 4, "e11"},
    {1, 5, "e12"}, {1, 4, "e13"}, {1, 5, "e21"}, {1, 6, "e22"}, {1, 5, "e23"},
    {1, 4, "e31"}, {1, 5, "e32"}, {1, 4, "e33"}};

int position(const std::vector<std::string>& names, const std::string& n) {
  const auto it = std::find(names.begin(), names.end(), n);
  if (it == names.end()) throw AlgebraError("unknown unit name " + n);
  return static_cast<int>(it - names.begin());
}

CMat table_matrix(const D13Fixture& fx, const std::vector<Term>& terms) {
  const int n = static_cast<int>(fx.new_names.size());
  CMat c = CMat::Zero(n, n);
  for (const auto& t : terms)
    c(position(fx.new_names, t.left), position(fx.new_names, t.right)) +=
        t.k * std::pow(fx.z, t.zp);
  return c;
}

double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

D13Fixture d13_units(const InclusionData& d, double tol) {
  if (d.l != 4 || d.m != 2) throw ConstructionError("the dimension-13 fixture needs l=4, m=2");
  D13Fixture fx;
  fx.data = d;
  fx.delta = d.delta;
  fx.z = std::pow(d.delta, 0.25);
  const double z = fx.z, dl = d.delta;
  const AlgPtr& A = d.A.sub;
  const Element one = Element::identity(A);
  const Element e1 = jones_projection(d.tower, 4, 1);
  const Element e2 = jones_projection(d.tower, 4, 2);
  const Element e3 = jones_projection(d.tower, 4, 3);
  auto& u = fx.units;
  u["1"] = one;
  u["e1"] = e1;
  u["e2"] = e2;
  u["e3"] = e3;
  const Element e2d = e2 - dl * one;

  u["c11"] = e1 * e3;
  u["c12"] = std::pow(z, -3) * (e3 * e1 * e2d);
  u["c21"] = u["c12"].adjoint();
  u["c22"] = u["c21"] * u["c12"];
  u["d11"] = e1 * (one - e3);
  u["d12"] = std::pow(z, -3) * ((one - e3) * e1 * e2d);
  u["d13"] = std::pow(z, -6) * (e1 * (one - e3) * e2d * (e3 - z * z * one));
  auto fill = [&](const std::string& p) {
    for (int i = 2; i <= 3; ++i)
      u[p + std::to_string(i) + "1"] = u[p + "1" + std::to_string(i)].adjoint();
    for (int i = 2; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        if (j != 1)
          u[p + std::to_string(i) + std::to_string(j)] =
              u[p + std::to_string(i) + "1"] * u[p + "1" + std::to_string(j)];
  };
  fill("d");
  u["e11"] = u["d11"];
  u["e12"] = z * z * u["d12"] - z * u["d13"];
  u["e13"] = z * u["d12"] + z * z * u["d13"];
  fill("e");
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      const std::string ij = std::to_string(i) + std::to_string(j);
      u["b" + ij] = u["c" + ij] + u["d" + ij];
    }
  u["b5"] = u["d33"];

  fx.new_names = {"c11", "c12", "c21", "c22", "e11", "e12", "e13",
                  "e21", "e22", "e23", "e31", "e32", "e33"};
  fx.new_basis = CMat(A->dim(), 13);
  for (int k = 0; k < 13; ++k) fx.new_basis.col(k) = u[fx.new_names[k]].to_vector();

  // Matrix-unit relations for both families, completeness, and the
  // alternative product expressions.
  double r = 0.0;
  for (const char* p : {"c", "e"}) {
    const int size = *p == 'c' ? 2 : 3;
    Element sum(A);
    for (int i = 1; i <= size; ++i) {
      sum += u[p + std::to_string(i) + std::to_string(i)];
      for (int j = 1; j <= size; ++j)
        for (int k = 1; k <= size; ++k)
          for (int l = 1; l <= size; ++l) {
            const Element lhs = u[p + std::to_string(i) + std::to_string(j)] *
                                u[p + std::to_string(k) + std::to_string(l)];
            const Element rhs = j == k ? u[p + std::to_string(i) + std::to_string(l)] : Element(A);
            r = std::max(r, distance(lhs, rhs));
          }
    }
    fx.units[std::string(p) + "_sum"] = sum;
  }
  r = std::max(r, distance(u["c_sum"] + u["e_sum"], one));
  // z^2 d12 - z d13 reduces to z^-5 e1(1-e3)(e2-delta)(1-e3) through
  // z^4 + z^2 = 1.
  r = std::max(r, distance(u["e12"], std::pow(z, -5) * (e1 * (one - e3) * e2d * (one - e3))));
  r = std::max(r, distance(u["e13"], (1.0 / dl) * (e1 * (one - e3) * e2d * e3)));
  r = std::max(r, distance(u["b12"], std::pow(z, -3) * (e1 * e2d)));
  r = std::max(r, distance(u["b22"], std::pow(z, -6) * (e2d * e1 * e2d)));
  const Element e21d = (e2 - e1) * (e2 - e1);
  r = std::max(r, distance(u["b22"], std::pow(z, -2) * (e21d - (1 - dl) * e1)));
  r = std::max(r, distance(u["d33"], one - (1.0 / (1 - dl)) * e21d));
  fx.relation_residual = r;
  if (r > tol)
    throw ConstructionError("dimension-13 unit relations fail (residual " + std::to_string(r) +
                            ")");
  return fx;
}

D13Fixture d13_units(double tol) { return d13_units(build_inclusion(4, 2), tol); }

CMat d13_coproduct_new_basis(const D13Fixture& fx, const WeakHopfData& wa, const Element& x) {
  const CMat uinv = fx.new_basis.inverse();
  return uinv * wa.coproduct_coeff(x.to_vector()) * uinv.transpose();
}

std::vector<CheckResult> d13_tables_check(const D13Fixture& fx, const WeakHopfData& wa,
                                          double tol) {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, double r) {
    out.push_back({name, r, std::isfinite(r) && r <= tol});
  };
  const double z = fx.z, dl = fx.delta;
  const AlgPtr& A = wa.algebra;
  const Element one = Element::identity(A);
  const Element &e1 = fx["e1"], &e2 = fx["e2"], &e3 = fx["e3"];

  // Jones projections in the path units: C block 2x2, D block 3x3.
  {
    auto blocks = [&](const CMat& c, const CMat& dd) { return Element::from_blocks(A, {c, dd}); };
    CMat c1(2, 2), d1(3, 3), c2(2, 2), d2(3, 3), c3(2, 2), d3(3, 3);
    const double z2 = z * z, z3 = z2 * z, z4 = z2 * z2;
    c1 << 1, 0, 0, 0;
    d1 << 1, 0, 0, 0, 0, 0, 0, 0, 0;
    c2 << z4, z3, z3, z2;
    d2 << z4, z3, 0, z3, z2, 0, 0, 0, 0;
    c3 << 1, 0, 0, 0;
    d3 << 0, 0, 0, 0, z2, z3, 0, z3, z4;
    double r = std::max({distance(e1, blocks(c1, d1)), distance(e2, blocks(c2, d2)),
                         distance(e3, blocks(c3, d3))});
    // The units built from the projections are the path units.
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j)
        r = std::max(r, distance(fx["c" + std::to_string(i) + std::to_string(j)],
                                 Element::unit(A, A->basis_index(0, i - 1, j - 1))));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        r = std::max(r, distance(fx["d" + std::to_string(i) + std::to_string(j)],
                                 Element::unit(A, A->basis_index(1, i - 1, j - 1))));
    add("jones_in_path_units", r);
  }
  {
    double r = std::max(distance(e1, fx["c11"] + fx["e11"]), distance(e3, fx["c11"] + fx["e33"]));
    Element e2x(A);
    for (const auto& s : kE2Expansion) e2x += s.k * std::pow(z, s.zp) * fx[s.unit];
    r = std::max(r, distance(e2, e2x));
    add("unit_expansions", r);
  }

  add("coproduct_one_units",
      max_abs(CMat(d13_coproduct_new_basis(fx, wa, one) - table_matrix(fx, kDeltaOne))));
  add("coproduct_e1_units",
      max_abs(CMat(d13_coproduct_new_basis(fx, wa, e1) - table_matrix(fx, kDeltaE1))));
  add("coproduct_e3_units",
      max_abs(CMat(d13_coproduct_new_basis(fx, wa, e3) - table_matrix(fx, kDeltaE3))));
  add("coproduct_e2_units",
      max_abs(CMat(d13_coproduct_new_basis(fx, wa, e2) - table_matrix(fx, kDeltaE2))));

  // Forms in the Jones projections.
  {
    auto D = [&](const Element& x) { return wa.coproduct(x); };
    auto T = [](const Element& a, const Element& b) { return tensor_elem(a, b); };
    const TensorElement d1 = T(e3, e1) + T(one - e3, one - e1);
    double r1 = (D(one) - d1).max_abs();
    double r2 = (D(e1) - (T(e1 * e3, e1) + T(e1 * (one - e3), one - e1))).max_abs();
    double r3 = (D(e3) - (T(e3, e1 * e3) + T(one - e3, (one - e1) * e3))).max_abs();
    const Element q3 = (1.0 / (1 - dl)) * ((e3 - e2) * (e3 - e2));
    const Element q1 = (1.0 / (1 - dl)) * ((e1 - e2) * (e1 - e2));
    const Element e2d = e2 - dl * one;
    const double s = 1.0 / std::sqrt(dl * (1 - dl));
    const TensorElement form = T(one - q3, one - q1) + cplx(dl) * T(e3, e1) +
                               cplx(s) * T(e3 * e2d, e1 * e2d) + cplx(s) * T(e2d * e3, e2d * e1) +
                               cplx(1 - dl) * T(q3 - e3, q1 - e1);
    double r4 = (D(e2) - form).max_abs();
    add("coproduct_one_jones", r1);
    add("coproduct_e1_jones", r2);
    add("coproduct_e3_jones", r3);
    add("coproduct_e2_jones", r4);
  }

  {
    double r = std::max(std::abs(wa.counit(fx["c11"]) - 1.0), std::abs(wa.counit(fx["c12"]) - 1.0));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        r = std::max(r, std::abs(wa.counit(fx["d" + std::to_string(i) + std::to_string(j)])));
    add("counit_values", r);
  }
  {
    double r = 0.0;
    for (const auto& [from, to] : kAntipode)
      r = std::max(r, distance(wa.S(fx[from]), to.k * std::pow(z, to.zp) * fx[to.unit]));
    add("antipode_values", r);
  }
  {
    double r = 0.0;
    for (const auto& [x, terms] : kSecondStructure)
      r = std::max(r, max_abs(CMat(d13_coproduct_new_basis(fx, wa, fx[x]) -
                                   table_matrix(fx, terms))));
    add("coproduct_matches_second_structure", r);
  }
  return out;
}

}  // namespace groupoidal
