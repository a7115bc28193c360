#include <algorithm>
#include <cmath>
#include <random>

#include "groupoidal/matalg.hpp"

namespace groupoidal {

SubAlgebraEmbedding::SubAlgebraEmbedding(AlgPtr s, AlgPtr a, CMat inj)
    : sub(std::move(s)), ambient(std::move(a)), inject(std::move(inj)) {
  if (inject.rows() != ambient->dim() || inject.cols() != sub->dim())
    throw AlgebraError("embedding matrix shape mismatch");
  factor();
}

void SubAlgebraEmbedding::factor() {
  const RVec& w = ambient->coordinate_weights();
  CMat g = inject.adjoint() * w.asDiagonal() * inject;
  gram_.compute(0.5 * (g + g.adjoint().eval()));
  if (gram_.info() != Eigen::Success)
    throw AlgebraError("embedding Gram matrix is singular");
  const RVec d = gram_.vectorD().real();
  if (d.size() && d.minCoeff() <= 1e-14 * std::max(1.0, d.maxCoeff()))
    throw AlgebraError("embedding Gram matrix is singular");
}

Element SubAlgebraEmbedding::apply(const Element& x) const {
  if (x.parent()->dim() != sub->dim())
    throw AlgebraError("element is not in the embedded subalgebra");
  return Element::from_vector(ambient, inject * x.to_vector());
}

Element SubAlgebraEmbedding::image_of_unit(int k) const {
  return Element::from_vector(ambient, inject.col(k));
}

CVec SubAlgebraEmbedding::expectation_coords(const Element& x) const {
  if (x.parent()->dim() != ambient->dim())
    throw AlgebraError("element is not in the ambient algebra");
  const RVec& w = ambient->coordinate_weights();
  return gram_.solve(inject.adjoint() * w.asDiagonal() * x.to_vector());
}

Element SubAlgebraEmbedding::expectation_in_sub(const Element& x) const {
  return Element::from_vector(sub, expectation_coords(x));
}

double SubAlgebraEmbedding::distance_to_image(const Element& x) const {
  const CVec c = expectation_coords(x);
  return (x.to_vector() - inject * c).cwiseAbs().maxCoeff();
}

double SubAlgebraEmbedding::homomorphism_residual() const {
  double r = (apply(Element::identity(sub)) - Element::identity(ambient)).max_abs();
  std::vector<Element> imgs;
  for (int k = 0; k < sub->dim(); ++k) imgs.push_back(image_of_unit(k));
  for (int a = 0; a < sub->dim(); ++a) {
    const auto ua = sub->unit(a);
    // u_a^* is the transposed unit
    const int at = sub->basis_index(ua.block, ua.col, ua.row);
    r = std::max(r, (imgs[a].adjoint() - imgs[at]).max_abs());
    for (int b = 0; b < sub->dim(); ++b) {
      const auto ub = sub->unit(b);
      Element prod = imgs[a] * imgs[b];
      if (ua.block == ub.block && ua.col == ub.row)
        prod -= imgs[sub->basis_index(ua.block, ua.row, ub.col)];
      r = std::max(r, prod.max_abs());
    }
  }
  return r;
}

SubAlgebraEmbedding compose(const SubAlgebraEmbedding& inner,
                            const SubAlgebraEmbedding& outer) {
  if (!inner.ambient->same_shape(*outer.sub))
    throw AlgebraError("cannot compose embeddings with mismatched algebras");
  return SubAlgebraEmbedding(inner.sub, outer.ambient,
                             outer.inject * inner.inject);
}

SubAlgebraEmbedding identity_embedding(const AlgPtr& a) {
  return SubAlgebraEmbedding(a, a, CMat::Identity(a->dim(), a->dim()));
}

Element conditional_expectation(const SubAlgebraEmbedding& emb,
                                const Element& x) {
  return emb.apply(emb.expectation_in_sub(x));
}

namespace {

// Null vectors of the commutation system inside one ambient block.
std::vector<CVec> block_commutant(const std::vector<CMat>& gens, int d) {
  const int n = d * d;
  RowStack stack(n);
  for (const auto& g : gens) {
    CMat op = CMat::Zero(n, n);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        for (int k = 0; k < d; ++k) {
          op(r * d + c, k * d + c) += g(r, k);
          op(r * d + c, r * d + k) -= g(k, c);
        }
    stack.add(op);
  }
  const CMat ns = stack.nullspace(1e-8);
  std::vector<CVec> out;
  for (int j = 0; j < ns.cols(); ++j) out.push_back(ns.col(j));
  return out;
}

}  // namespace

std::vector<Element> commutant(const AlgPtr& ambient,
                               const std::vector<Element>& gens) {
  std::vector<Element> out;
  for (int b = 0; b < ambient->num_blocks(); ++b) {
    const int d = ambient->block_dim(b);
    std::vector<CMat> gb;
    for (const auto& g : gens) gb.push_back(g.block(b));
    for (const auto& v : block_commutant(gb, d)) {
      Element e(ambient);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) e.block(b)(r, c) = v(r * d + c);
      out.push_back(e);
    }
  }
  return orthonormalize(out);
}

std::vector<Element> commutant(const SubAlgebraEmbedding& emb) {
  std::vector<Element> gens;
  for (int k = 0; k < emb.sub->dim(); ++k) gens.push_back(emb.image_of_unit(k));
  return commutant(emb.ambient, gens);
}

std::vector<Element> relative_commutant(const SubAlgebraEmbedding& within,
                                        const std::vector<Element>& gens) {
  const int k = within.sub->dim();
  std::vector<Element> units;
  for (int j = 0; j < k; ++j) units.push_back(within.image_of_unit(j));
  RowStack stack(k);
  for (const auto& g : gens) {
    CMat cols(within.ambient->dim(), k);
    for (int j = 0; j < k; ++j)
      cols.col(j) = (units[j] * g - g * units[j]).to_vector();
    stack.add(cols);
  }
  const CMat ns = stack.nullspace(1e-8);
  std::vector<Element> out;
  for (int j = 0; j < ns.cols(); ++j)
    out.push_back(Element::from_vector(within.ambient, within.inject * ns.col(j)));
  return orthonormalize(out);
}

namespace {

struct Spectral {
  double value;
  int block;
  CVec vec;
};

// Spectral projections of a self-adjoint ambient element, clustered.
std::vector<std::pair<double, Element>> spectral_projections(const Element& x) {
  const AlgPtr& alg = x.parent();
  std::vector<Spectral> all;
  double scale = 1.0;
  for (int b = 0; b < alg->num_blocks(); ++b) {
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (x.block(b) + x.block(b).adjoint()));
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      all.push_back({es.eigenvalues()(i), b, es.eigenvectors().col(i)});
      scale = std::max(scale, std::abs(es.eigenvalues()(i)));
    }
  }
  std::sort(all.begin(), all.end(),
            [](const Spectral& a, const Spectral& b) { return a.value < b.value; });
  std::vector<std::pair<double, Element>> out;
  const double thr = kClusterThreshold * scale;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (out.empty() || all[i].value - all[i - 1].value > thr)
      out.emplace_back(all[i].value, Element(alg));
    Element& p = out.back().second;
    p.block(all[i].block) += all[i].vec * all[i].vec.adjoint();
  }
  return out;
}

Element random_combination(const std::vector<Element>& basis, std::mt19937_64& rng,
                           bool complex_coeffs) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Element acc(basis.front().parent());
  for (const auto& b : basis) {
    const cplx c = complex_coeffs ? cplx(nd(rng), nd(rng)) : cplx(nd(rng), 0.0);
    acc += c * b;
  }
  return acc;
}

Element self_adjoint_part(const Element& x) { return 0.5 * (x + x.adjoint()); }

std::pair<int, int> first_support(const Element& p) {
  for (int b = 0; b < p.parent()->num_blocks(); ++b)
    for (int r = 0; r < p.block(b).rows(); ++r)
      if (std::abs(p.block(b)(r, r)) > 1e-8) return {b, r};
  return {p.parent()->num_blocks(), 0};
}

struct BlockUnits {
  int n = 0;
  std::pair<int, int> key;
  double weight = 0.0;
  std::vector<Element> units;  // row-major n x n
};

bool build_block(const Element& central, const std::vector<Element>& basis,
                 std::mt19937_64& rng, BlockUnits& out) {
  const AlgPtr& alg = central.parent();
  std::vector<Element> corner;
  for (const auto& v : basis) corner.push_back(central * v);
  corner = orthonormalize(corner, 1e-8);
  const int dimc = static_cast<int>(corner.size());
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dimc))));
  if (n * n != dimc) return false;
  std::vector<Element> minimal;
  if (n == 1) {
    minimal.push_back(central);
  } else {
    Element a = self_adjoint_part(random_combination(corner, rng, false));
    double bound = 1.0;
    for (const auto& blk : a.blocks()) bound += blk.norm();
    const Element comp = Element::identity(alg) - central;
    const Element shifted = a + (-2.0 * bound) * comp;
    for (auto& [val, proj] : spectral_projections(shifted)) {
      if (val < -1.5 * bound) continue;
      minimal.push_back(proj);
    }
    if (static_cast<int>(minimal.size()) != n) return false;
  }
  const double tq = minimal[0].trace().real();
  out.n = n;
  out.key = first_support(central);
  out.weight = tq;
  out.units.assign(static_cast<std::size_t>(n) * n, Element(alg));
  std::vector<Element> row1(n, Element(alg));
  row1[0] = minimal[0];
  const Element y = random_combination(corner, rng, true);
  for (int k = 1; k < n; ++k) {
    Element v = minimal[0] * y * minimal[k];
    const double c = (v * v.adjoint()).trace().real() / tq;
    if (!(c > 1e-12)) return false;
    row1[k] = (1.0 / std::sqrt(c)) * v;
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      out.units[j * n + k] = row1[j].adjoint() * row1[k];
  return true;
}

SubAlgebraEmbedding decompose_impl(const std::vector<Element>& basis,
                                   const std::vector<Element>& gens,
                                   const AlgPtr& ambient, std::uint64_t seed) {
  // Center: combinations of the basis commuting with every generator.
  const int k = static_cast<int>(basis.size());
  auto center_of = [&](const std::vector<Element>& with) {
    RowStack stack(k);
    for (const auto& g : with) {
      CMat cols(ambient->dim(), k);
      for (int j = 0; j < k; ++j) cols.col(j) = (basis[j] * g - g * basis[j]).to_vector();
      stack.add(cols);
    }
    const CMat ns = stack.nullspace(1e-8);
    std::vector<Element> out;
    for (int j = 0; j < ns.cols(); ++j) {
      Element z(ambient);
      for (int i = 0; i < k; ++i) z += ns(i, j) * basis[i];
      out.push_back(z);
    }
    return out;
  };
  // Two generic elements of a semisimple algebra generate it, so for large
  // spans a few random combinations stand in for the generators; the result
  // is confirmed against all of them.
  constexpr std::size_t kGeneratorProbeThreshold = 12;
  std::vector<Element> center;
  bool confirmed = false;
  if (gens.size() > kGeneratorProbeThreshold) {
    std::mt19937_64 prng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Element> probes;
    for (int i = 0; i < 3; ++i) {
      probes.push_back(random_combination(basis, prng, true));
      probes.push_back(probes.back().adjoint());
    }
    center = center_of(probes);
    double worst = 0.0, scale = 1e-300;
    for (const auto& z : center)
      for (const auto& g : gens) {
        worst = std::max(worst, (z * g - g * z).max_abs());
        scale = std::max(scale, z.max_abs() * g.max_abs());
      }
    confirmed = worst <= 1e-8 * scale;
  }
  if (!confirmed) center = center_of(gens);
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<Element> herm;
    for (const auto& z : center) herm.push_back(self_adjoint_part(z));
    for (const auto& z : center) herm.push_back(self_adjoint_part(cplx(0, 1) * z));
    const Element zc = random_combination(herm, rng, false);
    auto projs = spectral_projections(zc);
    if (projs.size() != center.size()) continue;
    std::vector<BlockUnits> blocks;
    bool ok = true;
    for (auto& pr : projs) {
      BlockUnits bu;
      if (!build_block(pr.second, basis, rng, bu)) {
        ok = false;
        break;
      }
      blocks.push_back(std::move(bu));
    }
    if (!ok) continue;
    int total = 0;
    for (const auto& b : blocks) total += b.n * b.n;
    if (total != k) continue;
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const BlockUnits& a, const BlockUnits& b) {
                       if (a.n != b.n) return a.n < b.n;
                       return a.key < b.key;
                     });
    std::vector<int> dims;
    std::vector<double> weights;
    for (const auto& b : blocks) {
      dims.push_back(b.n);
      weights.push_back(b.weight);
    }
    AlgPtr sub = MultiMatrixAlgebra::make(dims, weights);
    CMat inj(ambient->dim(), sub->dim());
    int col = 0;
    for (const auto& b : blocks)
      for (const auto& u : b.units) inj.col(col++) = u.to_vector();
    return SubAlgebraEmbedding(sub, ambient, inj);
  }
  throw AlgebraError("block decomposition failed to separate the center");
}

}  // namespace

SubAlgebraEmbedding decompose_subalgebra(const std::vector<Element>& span,
                                         const AlgPtr& ambient,
                                         std::uint64_t rng_seed) {
  std::vector<Element> basis = orthonormalize(span, 1e-9);
  if (basis.empty()) throw AlgebraError("empty subalgebra");
  return decompose_impl(basis, basis, ambient, rng_seed);
}

SubAlgebraEmbedding span_closure(const std::vector<Element>& seed,
                                 const AlgPtr& ambient, std::uint64_t rng_seed) {
  std::vector<Element> gens;
  for (const auto& s : seed) {
    if (s.parent()->dim() != ambient->dim())
      throw AlgebraError("seed element outside the ambient algebra");
    gens.push_back(s);
    if (!is_self_adjoint(s, 1e-12 * std::max(1.0, s.max_abs())))
      gens.push_back(s.adjoint());
  }
  const RVec sw = ambient->coordinate_weights().cwiseSqrt();
  std::vector<CVec> q;
  std::vector<Element> basis;
  auto try_add = [&](const Element& e) {
    CVec v = sw.cwiseProduct(e.to_vector());
    const double n0 = v.norm();
    if (n0 <= 1e-13) return;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : q) v -= u * u.dot(v);
    const double n1 = v.norm();
    if (n1 <= 1e-9 * n0) return;
    q.push_back(v / n1);
    basis.push_back(Element::from_vector(ambient, q.back().cwiseQuotient(sw.cast<cplx>())));
  };
  try_add(Element::identity(ambient));
  std::vector<Element> words{Element::identity(ambient)};
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (const auto& g : gens) {
      Element w = words[i] * g;
      const std::size_t before = basis.size();
      try_add(w);
      if (basis.size() > before) words.push_back(w);
    }
    if (static_cast<int>(basis.size()) == ambient->dim()) break;
  }
  return decompose_impl(basis, gens.empty() ? basis : gens, ambient, rng_seed);
}

}  // namespace groupoidal
