#include <algorithm>
#include <deque>

#include "groupoidal/matalg.hpp"

namespace groupoidal {

WordExtension extend_over_words(const AlgPtr& domain, const AlgPtr& codomain,
                                const std::vector<Element>& gens,
                                const std::vector<Element>& images, bool anti,
                                double threshold, const Element* unit_image) {
  if (gens.size() != images.size())
    throw AlgebraError("generator and image lists differ in length");
  const int n = domain->dim();
  // Orthonormal basis Q of the words seen so far, with YQ the images of its
  // columns, so the map on span(Q) is YQ Q^*.
  CMat Q(n, 0), YQ(codomain->dim(), 0);
  WordExtension out;
  std::deque<std::pair<Element, Element>> queue;
  auto consider = [&](const Element& x, const Element& y) {
    const CVec xv = x.to_vector(), yv = y.to_vector();
    const double xn = std::max(1.0, xv.norm());
    CVec c = Q.adjoint() * xv;
    CVec r = xv - Q * c;
    if (r.norm() > 1e-9 * xn) {
      const CVec c2 = Q.adjoint() * r;
      r -= Q * c2;
      c += c2;
    }
    const double rn = r.norm();
    if (rn <= 1e-9 * xn) {
      const double err = (YQ * c - yv).norm();
      out.residual = std::max(out.residual, err);
      if (err > threshold * std::max(1.0, yv.norm()))
        throw ConstructionError("generator map does not extend consistently over words");
      return;
    }
    Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
    YQ.conservativeResize(Eigen::NoChange, YQ.cols() + 1);
    Q.col(Q.cols() - 1) = r / rn;
    YQ.col(YQ.cols() - 1) = (yv - YQ.leftCols(YQ.cols() - 1) * c) / rn;
    queue.push_back({x, y});
  };
  consider(Element::identity(domain),
           unit_image ? *unit_image : Element::identity(codomain));
  for (std::size_t g = 0; g < gens.size(); ++g) consider(gens[g], images[g]);
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    // Dependent words are still checked after the span fills up, once per
    // queued word, so an inconsistent assignment cannot slip through.
    for (std::size_t g = 0; g < gens.size(); ++g)
      consider(x * gens[g], anti ? images[g] * y : y * images[g]);
  }
  if (Q.cols() < n) throw ConstructionError("generators do not generate the algebra");
  out.map = YQ * Q.adjoint();
  return out;
}

}  // namespace groupoidal
