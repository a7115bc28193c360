#include <algorithm>
#include <cmath>

#include "groupoidal/tlgroupoid.hpp"

namespace groupoidal {

namespace {

// e_{start} e_{start-1} ... e_{stop} at the top floor.
Element descending_word(const std::vector<Element>& e, int start, int stop) {
  Element w = e[start];
  for (int p = start - 1; p >= stop; --p) w = w * e[p];
  return w;
}

Element jones_product(const std::vector<Element>& e, int m, int shift, double delta) {
  Element f = Element::identity(e[0].parent());
  for (int k = 0; k < m; ++k) f = f * descending_word(e, m + k + shift, 1 + k + shift);
  return std::pow(delta, -0.5 * m * (m - 1)) * f;
}

SubAlgebraEmbedding generated(const std::vector<Element>& e, int from, int to,
                              const AlgPtr& top) {
  std::vector<Element> seed;
  for (int p = from; p <= to; ++p) seed.push_back(e[p]);
  return span_closure(seed, top);
}

}  // namespace

Element InclusionData::j1_apply(const Element& a) const {
  return Element::from_vector(A.sub, j1 * a.to_vector());
}

Element InclusionData::j2_apply(const Element& b) const {
  return Element::from_vector(B.sub, j2 * b.to_vector());
}

LinearMap j_antiautomorphism(const BratteliTower& t, int n) {
  if (n < 1 || 2 * n > t.levels)
    throw AlgebraError("j_n needs 1 <= n and floor 2n inside the tower");
  const AlgPtr& alg = t.algebra(2 * n);
  std::vector<Element> gens, imgs;
  for (int p = 1; p <= 2 * n - 1; ++p) {
    gens.push_back(jones_projection(t, 2 * n, p));
    imgs.push_back(jones_projection(t, 2 * n, 2 * n - p));
  }
  return LinearMap(extend_over_words(alg, alg, gens, imgs, true).map);
}

LinearMap j_antiautomorphism(const InclusionData& d, int n) {
  return j_antiautomorphism(d.tower, n);
}

InclusionData build_inclusion(int l, int m) {
  if (m < 1) throw AlgebraError("m must be positive");
  InclusionData d;
  d.l = l;
  d.m = m;
  d.tower = build_tower(l, 3 * m);
  d.delta = d.tower.delta;
  d.tau = std::pow(d.delta, m);
  d.top = d.tower.algebra(3 * m);

  // Depth 2 forces the centres of N_0'∩N_1 and N_0'∩N_3 to have the same
  // dimension; the Gram test alone does not see every failure.
  const int z1 = d.tower.algebra(m)->num_blocks();
  const int z3 = d.top->num_blocks();
  if (z1 != z3)
    throw ConstructionError("P_0 ⊂ P_" + std::to_string(m) + " is not of depth 2 for l=" +
                            std::to_string(l) + " (centres of dimension " +
                            std::to_string(z1) + " and " + std::to_string(z3) + ")");

  d.e.push_back(Element::identity(d.top));
  for (int p = 1; p < 3 * m; ++p) d.e.push_back(jones_projection(d.tower, 3 * m, p));
  d.f1 = jones_product(d.e, m, 0, d.delta);
  d.f2 = jones_product(d.e, m, m, d.delta);

  d.A = floor_embedding(d.tower, 2 * m, 3 * m);
  d.At = floor_embedding(d.tower, m, 2 * m);
  d.B = generated(d.e, m + 1, 3 * m - 1, d.top);
  d.base = generated(d.e, m + 1, 2 * m - 1, d.top);
  d.H = watatani_index(d.base);
  d.h = positive_sqrt(d.H);

  d.j1 = j_antiautomorphism(d.tower, m).matrix;
  std::vector<Element> gens, imgs;
  for (int p = m + 1; p <= 3 * m - 1; ++p) {
    gens.push_back(d.eB(p));
    imgs.push_back(d.eB(4 * m - p));
  }
  d.j2 = extend_over_words(d.B.sub, d.B.sub, gens, imgs, true).map;

  const Pairing pr = tl_pairing(d);
  if (pr.degenerate()) {
    const auto [lo, hi] = pr.singular_range();
    throw ConstructionError("pairing is degenerate (smallest singular value " +
                            std::to_string(lo) + ", largest " + std::to_string(hi) + ")");
  }
  return d;
}

Pairing tl_pairing(const InclusionData& d) {
  const Element k = d.h * d.f2 * d.f1 * d.h;
  const int na = d.A.sub->dim(), nb = d.B.sub->dim();
  // tr(x y) = sum_k w_k x_k y_{k^T}, so the Gram matrix is one product.
  const auto tr = transpose_index(*d.top);
  const RVec& w = d.top->coordinate_weights();
  CMat kb(d.top->dim(), nb);
  for (int t = 0; t < nb; ++t) {
    const CVec y = (k * d.B.image_of_unit(t)).to_vector();
    for (int c = 0; c < d.top->dim(); ++c) kb(c, t) = w(c) * y(tr[c]);
  }
  Pairing pr{d.A.sub, d.B.sub, CMat(na, nb)};
  pr.gram = std::pow(d.tau, -2.0) * d.A.inject.transpose() * kb;
  return pr;
}

Json inclusion_to_json(const InclusionData& d) {
  Json j;
  j["l"] = d.l;
  j["m"] = d.m;
  j["delta"] = d.delta;
  j["tau"] = d.tau;
  j["floor_dims"] = Json::array();
  for (int r = 0; r <= d.tower.levels; ++r) j["floor_dims"].push_back(d.tower.algebra(r)->dim());
  j["A_blocks"] = d.A.sub->block_dims();
  j["B_blocks"] = d.B.sub->block_dims();
  j["base_blocks"] = d.base.sub->block_dims();
  return j;
}

}  // namespace groupoidal
