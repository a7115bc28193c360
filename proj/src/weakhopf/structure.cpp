#include <algorithm>
#include <cmath>

#include "groupoidal/weakhopf.hpp"

namespace groupoidal {

CMat WeakHopfData::coproduct_coeff(const CVec& x) const {
  const int n = dim();
  const CVec v = delta * x;
  CMat c(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) c(s, t) = v(s * n + t);
  return c;
}

CMat WeakHopfData::coproduct_coeff(int k) const {
  return coproduct_coeff(CVec(CVec::Unit(dim(), k)));
}

TensorElement WeakHopfData::coproduct(const Element& x) const {
  return TensorElement(algebra, algebra, coproduct_coeff(x.to_vector()));
}

cplx WeakHopfData::counit(const Element& x) const {
  return eps.transpose() * x.to_vector();
}

Element WeakHopfData::S(const Element& x) const {
  return Element::from_vector(algebra, antipode * x.to_vector());
}

cplx Pairing::operator()(const Element& a, const Element& b) const {
  return a.to_vector().transpose() * gram * b.to_vector();
}

std::pair<double, double> Pairing::singular_range() const {
  if (gram.size() == 0) return {0.0, 0.0};
  Eigen::JacobiSVD<CMat> svd(gram);
  const RVec& sv = svd.singularValues();
  return {sv(sv.size() - 1), sv(0)};
}

bool Pairing::degenerate() const {
  if (gram.rows() != gram.cols()) return true;
  const auto [lo, hi] = singular_range();
  return !(lo > kDegeneracyThreshold * hi);
}

Pairing Pairing::transposed() const {
  return Pairing{right, left, gram.transpose()};
}

std::vector<int> transpose_index(const MultiMatrixAlgebra& alg) {
  std::vector<int> t(alg.dim());
  for (int k = 0; k < alg.dim(); ++k) {
    const auto u = alg.unit(k);
    t[k] = alg.basis_index(u.block, u.col, u.row);
  }
  return t;
}

CVec star_coords(const MultiMatrixAlgebra& alg, const CVec& x) {
  const auto t = transpose_index(alg);
  CVec y(x.size());
  for (int k = 0; k < alg.dim(); ++k) y(t[k]) = std::conj(x(k));
  return y;
}

CVec apply_right_functional(const WeakHopfData& w, const CVec& x, const CVec& f) {
  return w.coproduct_coeff(x) * f;
}

CVec apply_left_functional(const WeakHopfData& w, const CVec& x, const CVec& f) {
  return w.coproduct_coeff(x).transpose() * f;
}

WeakHopfData group_algebra_z2() {
  // Minimal projections (1+g)/2 and (1-g)/2.
  WeakHopfData w;
  w.algebra = MultiMatrixAlgebra::make({1, 1}, {0.5, 0.5});
  w.delta = CMat::Zero(4, 2);
  w.delta(0 * 2 + 0, 0) = 1;
  w.delta(1 * 2 + 1, 0) = 1;
  w.delta(0 * 2 + 1, 1) = 1;
  w.delta(1 * 2 + 0, 1) = 1;
  w.eps = CVec::Zero(2);
  w.eps(0) = 1;
  w.antipode = CMat::Identity(2, 2);
  return w;
}

WeakHopfData separable_pair_groupoid(int n) {
  if (n < 1) throw AlgebraError("separable_pair_groupoid needs n >= 1");
  WeakHopfData w;
  w.algebra = MultiMatrixAlgebra::uniform({n * n});
  const MultiMatrixAlgebra& A = *w.algebra;
  const int dim = A.dim();
  // Unit (a,b),(c,d) is e_ca^op (x) e_bd.
  auto idx = [&](int a, int b, int c, int d) { return A.basis_index(0, a * n + b, c * n + d); };
  w.delta = CMat::Zero(dim * dim, dim);
  w.eps = CVec::Zero(dim);
  w.antipode = CMat::Zero(dim, dim);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const int u = idx(a, b, c, d);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              w.delta(idx(a, i, c, j) * dim + idx(i, b, j, d), u) += 1.0 / n;
          // eps(x^op (x) y) = n Tr(xy)
          if (a == b && c == d) w.eps(u) = n;
          // S(x^op (x) y) = y^op (x) x
          w.antipode(idx(d, c, b, a), u) = 1.0;
        }
  return w;
}

WeakHopfData direct_sum(const WeakHopfData& a, const WeakHopfData& b) {
  std::vector<int> dims = a.algebra->block_dims();
  std::vector<double> weights;
  for (double x : a.algebra->trace_weights()) weights.push_back(0.5 * x);
  for (int d : b.algebra->block_dims()) dims.push_back(d);
  for (double x : b.algebra->trace_weights()) weights.push_back(0.5 * x);
  WeakHopfData w;
  w.algebra = MultiMatrixAlgebra::make(dims, weights);
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  w.delta = CMat::Zero(n * n, n);
  for (int k = 0; k < na; ++k)
    for (int s = 0; s < na; ++s)
      for (int t = 0; t < na; ++t) w.delta(s * n + t, k) = a.delta(s * na + t, k);
  for (int k = 0; k < nb; ++k)
    for (int s = 0; s < nb; ++s)
      for (int t = 0; t < nb; ++t)
        w.delta((na + s) * n + na + t, na + k) = b.delta(s * nb + t, k);
  w.eps = CVec(n);
  w.eps << a.eps, b.eps;
  w.antipode = CMat::Zero(n, n);
  w.antipode.topLeftCorner(na, na) = a.antipode;
  w.antipode.bottomRightCorner(nb, nb) = b.antipode;
  return w;
}

WeakHopfData flipped_coproduct(const WeakHopfData& w) {
  WeakHopfData f = w;
  const int n = w.dim();
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) f.delta.row(s * n + t) = w.delta.row(t * n + s);
  return f;
}

Json to_json(const WeakHopfData& w) {
  Json eps = Json::array();
  for (int k = 0; k < w.eps.size(); ++k)
    eps.push_back(Json::array({w.eps(k).real(), w.eps(k).imag()}));
  return Json{{"schema", "whd-v1"},
              {"algebra", to_json(*w.algebra)},
              {"coproduct", to_json(LinearMap(w.delta))},
              {"counit", eps},
              {"antipode", to_json(LinearMap(w.antipode))}};
}

WeakHopfData weak_hopf_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  auto it = j.find("schema");
  if (it == j.end() || !it->is_string() || it->get<std::string>() != "whd-v1")
    throw SchemaError(where + ".schema: expected \"whd-v1\"");
  for (const char* key : {"algebra", "coproduct", "counit", "antipode"})
    if (!j.contains(key))
      throw SchemaError(where + ": missing field '" + key + "'");
  WeakHopfData w;
  w.algebra = algebra_from_json(j["algebra"], where + ".algebra");
  const int n = w.algebra->dim();
  w.delta = linear_map_from_json(j["coproduct"], where + ".coproduct").matrix;
  if (w.delta.rows() != n * n || w.delta.cols() != n)
    throw SchemaError(where + ".coproduct: expected an n^2 x n matrix");
  w.antipode = linear_map_from_json(j["antipode"], where + ".antipode").matrix;
  if (w.antipode.rows() != n || w.antipode.cols() != n)
    throw SchemaError(where + ".antipode: expected an n x n matrix");
  const Json& e = j["counit"];
  if (!e.is_array() || static_cast<int>(e.size()) != n)
    throw SchemaError(where + ".counit: expected " + std::to_string(n) + " entries");
  w.eps = CVec(n);
  for (int k = 0; k < n; ++k) {
    const std::string wk = where + ".counit[" + std::to_string(k) + "]";
    const Json& c = e[k];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
      throw SchemaError(wk + ": expected [re, im]");
    w.eps(k) = cplx(c[0].get<double>(), c[1].get<double>());
  }
  return w;
}

}  // namespace groupoidal
