#include <algorithm>
#include <cmath>
#include <numbers>

#include "groupoidal/bratteli.hpp"

namespace groupoidal {

std::pair<int, int> BratteliTower::locate(const Path& p) const {
  const int floor = static_cast<int>(p.size()) - 1;
  if (floor < 0 || floor > levels) return {-1, -1};
  auto it = index[floor].find(p);
  if (it == index[floor].end()) return {-1, -1};
  return it->second;
}

double BratteliTower::trace_weight(int floor, int vertex) const {
  return vertex_weight[vertex - 1] /
         (vertex_weight[0] * std::pow(beta, floor));
}

BratteliTower build_tower(int l, int n_levels) {
  if (l < 3) throw AlgebraError("the linear graph A_l needs l >= 3");
  if (n_levels < 1) throw AlgebraError("a tower needs at least one floor");
  BratteliTower t;
  t.l = l;
  t.levels = n_levels;
  const double angle = std::numbers::pi / (l + 1);
  t.beta = 2.0 * std::cos(angle);
  t.delta = 1.0 / (t.beta * t.beta);
  for (int v = 1; v <= l; ++v) t.vertex_weight.push_back(std::sin(v * angle));

  std::vector<Path> current{{1}};
  for (int r = 0; r <= n_levels; ++r) {
    if (r > 0) {
      std::vector<Path> next;
      for (const auto& p : current)
        for (int step : {-1, 1}) {
          const int v = p.back() + step;
          if (v < 1 || v > l) continue;
          Path q = p;
          q.push_back(v);
          next.push_back(std::move(q));
        }
      current = std::move(next);
    }
    std::map<int, std::vector<Path>> by_end;
    for (const auto& p : current) by_end[p.back()].push_back(p);
    std::vector<BratteliTower::Block> blocks;
    std::vector<int> dims;
    std::vector<double> weights;
    std::map<Path, std::pair<int, int>> idx;
    for (auto& [v, paths] : by_end) {
      std::sort(paths.begin(), paths.end());
      const int b = static_cast<int>(blocks.size());
      for (int i = 0; i < static_cast<int>(paths.size()); ++i) idx[paths[i]] = {b, i};
      dims.push_back(static_cast<int>(paths.size()));
      weights.push_back(t.trace_weight(r, v));
      blocks.push_back({v, std::move(paths)});
    }
    t.floors.push_back(std::move(blocks));
    t.algebras.push_back(MultiMatrixAlgebra::make(dims, weights));
    t.index.push_back(std::move(idx));
  }

  for (int r = 0; r < n_levels; ++r) {
    const AlgPtr& lo = t.algebras[r];
    const AlgPtr& hi = t.algebras[r + 1];
    CMat inj = CMat::Zero(hi->dim(), lo->dim());
    for (int k = 0; k < lo->dim(); ++k) {
      const auto u = lo->unit(k);
      const auto& blk = t.floors[r][u.block];
      for (int step : {-1, 1}) {
        const int v = blk.vertex + step;
        if (v < 1 || v > l) continue;
        Path xi = blk.paths[u.row], eta = blk.paths[u.col];
        xi.push_back(v);
        eta.push_back(v);
        const auto a = t.locate(xi), b = t.locate(eta);
        inj(hi->basis_index(a.first, a.second, b.second), k) = 1.0;
      }
    }
    t.steps.emplace_back(lo, hi, std::move(inj));
  }
  return t;
}

SubAlgebraEmbedding floor_embedding(const BratteliTower& t, int from, int to) {
  if (from < 0 || to > t.levels || from > to)
    throw AlgebraError("floor embedding out of range");
  SubAlgebraEmbedding e = identity_embedding(t.algebras[from]);
  for (int r = from; r < to; ++r) e = compose(e, t.steps[r]);
  return e;
}

Element embed(const BratteliTower& t, const Element& x, int from, int to) {
  if (from < 0 || to > t.levels || from > to)
    throw AlgebraError("floor embedding out of range");
  if (x.parent()->dim() != t.algebras[from]->dim())
    throw AlgebraError("element is not on the given floor");
  Element y = x;
  for (int r = from; r < to; ++r) y = t.steps[r].apply(y);
  return y;
}

Element matrix_unit(const BratteliTower& t, const Path& xi, const Path& eta) {
  if (xi.size() != eta.size() || xi.empty() || xi.back() != eta.back())
    throw AlgebraError("matrix_unit needs two paths with a common end");
  const auto a = t.locate(xi), b = t.locate(eta);
  if (a.first < 0 || b.first < 0) throw AlgebraError("invalid path");
  const int floor = static_cast<int>(xi.size()) - 1;
  const AlgPtr& alg = t.algebras[floor];
  return Element::unit(alg, alg->basis_index(a.first, a.second, b.second));
}

std::vector<Element> normalized_units(const BratteliTower& t, int floor) {
  const AlgPtr& alg = t.algebra(floor);
  std::vector<Element> out;
  for (int k = 0; k < alg->dim(); ++k)
    out.push_back((1.0 / std::sqrt(alg->weight(alg->unit(k).block))) *
                  Element::unit(alg, k));
  return out;
}

Element jones_projection(const BratteliTower& t, int floor, int i) {
  if (floor < 0 || floor > t.levels) throw AlgebraError("floor out of range");
  if (i < 1 || i > floor - 1) throw AlgebraError("Jones projection index out of range");
  Element e(t.algebras[floor]);
  const auto& w = t.vertex_weight;
  for (int b = 0; b < static_cast<int>(t.floors[floor].size()); ++b) {
    const auto& paths = t.floors[floor][b].paths;
    const int n = static_cast<int>(paths.size());
    for (int r = 0; r < n; ++r) {
      const Path& xi = paths[r];
      if (xi[i - 1] != xi[i + 1]) continue;
      for (int c = 0; c < n; ++c) {
        const Path& eta = paths[c];
        bool same = true;
        for (int k = 0; k <= floor && same; ++k)
          if (k != i && xi[k] != eta[k]) same = false;
        if (!same) continue;
        e.block(b)(r, c) = std::sqrt(w[xi[i] - 1] * w[eta[i] - 1]) /
                           (t.beta * w[xi[i - 1] - 1]);
      }
    }
  }
  return e;
}

Element watatani_index(const SubAlgebraEmbedding& k) {
  Element H(k.ambient);
  for (int j = 0; j < k.sub->num_blocks(); ++j) {
    const int v = k.sub->block_dim(j);
    Element q(k.ambient);
    for (int r = 0; r < v; ++r) q += k.image_of_unit(k.sub->basis_index(j, r, r));
    const double tj =
        k.image_of_unit(k.sub->basis_index(j, 0, 0)).trace().real();
    H += (v / tj) * q;
  }
  return H;
}

double QuasiBase::residual(const std::vector<Element>& xs) const {
  double r = 0.0;
  for (const auto& x : xs) {
    Element left(x.parent()), right(x.parent());
    for (const auto& up : u) {
      left += up * conditional_expectation(target, up.adjoint() * x);
      right += conditional_expectation(target, x * up) * up.adjoint();
    }
    r = std::max({r, distance(left, x), distance(right, x)});
  }
  return r;
}

QuasiBase quasi_base(const std::vector<Element>& orthonormal,
                     const Element& h_inv, const SubAlgebraEmbedding& target) {
  QuasiBase q{{}, target};
  for (const auto& b : orthonormal) q.u.push_back(b * h_inv);
  return q;
}

QuasiBase quasi_base(const BratteliTower& t, int target_floor, int sub_floor,
                     const Element& h) {
  const Element h_inv = invert(h);
  return quasi_base(normalized_units(t, target_floor), h_inv,
                    floor_embedding(t, sub_floor, target_floor));
}

Json tower_to_json(const BratteliTower& t) {
  Json floors = Json::array();
  for (int r = 0; r <= t.levels; ++r) {
    Json vertices = Json::array();
    for (const auto& b : t.floors[r]) vertices.push_back(b.vertex);
    Json f = to_json(*t.algebras[r]);
    f["end_vertices"] = vertices;
    f["dim"] = t.algebras[r]->dim();
    floors.push_back(f);
  }
  return Json{{"graph", "A" + std::to_string(t.l)},
              {"l", t.l},
              {"levels", t.levels},
              {"beta", t.beta},
              {"delta", t.delta},
              {"floors", floors}};
}

}  // namespace groupoidal
