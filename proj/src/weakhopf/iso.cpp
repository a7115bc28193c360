#include <algorithm>
#include <cmath>

#include "groupoidal/weakhopf.hpp"

namespace groupoidal {

double intertwiner_residual(const WeakHopfData& w1, const WeakHopfData& w2,
                            const CMat& map) {
  const int n = w1.dim();
  if (w2.dim() != n || map.rows() != n || map.cols() != n) return INFINITY;
  const AlgPtr& A1 = w1.algebra;
  const AlgPtr& A2 = w2.algebra;
  double r = 0.0;
  std::vector<Element> img;
  for (int k = 0; k < n; ++k) img.push_back(Element::from_vector(A2, map.col(k)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Element lhs = img[a] * img[b];
      const int c = unit_product(*A1, a, b);
      if (c >= 0) lhs -= img[c];
      r = std::max(r, lhs.max_abs());
    }
  const auto tr = transpose_index(*A1);
  for (int k = 0; k < n; ++k) r = std::max(r, distance(img[tr[k]], img[k].adjoint()));
  for (int k = 0; k < n; ++k) {
    const CMat lhs = w2.coproduct_coeff(CVec(map.col(k)));
    const CMat rhs = map * w1.coproduct_coeff(k) * map.transpose();
    r = std::max(r, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  r = std::max(r, (map.transpose() * w2.eps - w1.eps).cwiseAbs().maxCoeff());
  r = std::max(r, (w2.antipode * map - map * w1.antipode).cwiseAbs().maxCoeff());
  const CVec one1 = Element::identity(A1).to_vector();
  r = std::max(r, distance(Element::from_vector(A2, map * one1), Element::identity(A2)));
  // Bijectivity.
  Eigen::JacobiSVD<CMat> svd(map);
  const RVec& sv = svd.singularValues();
  if (sv(n - 1) < kDegeneracyThreshold * std::max(1.0, sv(0))) return INFINITY;
  return r;
}

IsoResult iso_check(const WeakHopfData& w1, const WeakHopfData& w2,
                    const std::vector<std::pair<Element, Element>>& gen_map) {
  IsoResult out;
  const int n1 = w1.dim();
  if (w2.dim() != n1) {
    out.failure = "algebras have different dimensions";
    return out;
  }
  // Words over generators and their adjoints, so the extension is a
  // *-homomorphism whenever it exists.
  std::vector<Element> gens, imgs;
  for (const auto& [g, h] : gen_map) {
    gens.push_back(g);
    imgs.push_back(h);
    gens.push_back(g.adjoint());
    imgs.push_back(h.adjoint());
  }
  try {
    const WordExtension ext =
        extend_over_words(w1.algebra, w2.algebra, gens, imgs, false);
    out.map = ext.map;
    out.residual = ext.residual;
  } catch (const ConstructionError& e) {
    out.failure = e.what();
    return out;
  }
  out.residual = std::max(out.residual, intertwiner_residual(w1, w2, out.map));
  out.ok = out.residual <= kExtensionThreshold;
  if (!out.ok) out.failure = "map does not intertwine the structure";
  return out;
}

}  // namespace groupoidal
