#pragma once

#include <map>
#include <vector>

#include "groupoidal/matalg.hpp"
#include "groupoidal/serialize.hpp"

namespace groupoidal {

using Path = std::vector<int>;  // vertices 1..l, first entry is 1

/// Path-model tower of the linear graph A_l: floor r is spanned by pairs of
/// length-r paths from vertex 1 ending at a common vertex.
struct BratteliTower {
  int l = 0;
  int levels = 0;
  double beta = 0.0;   // 2 cos(pi/(l+1)), the graph norm
  double delta = 0.0;  // beta^-2
  // Perron-Frobenius weights sin(v pi/(l+1)), index v-1.
  std::vector<double> vertex_weight;

  struct Block {
    int vertex;
    std::vector<Path> paths;  // lexicographic
  };
  std::vector<std::vector<Block>> floors;
  std::vector<AlgPtr> algebras;
  // Canonical inclusion floor r -> floor r+1, index r.
  std::vector<SubAlgebraEmbedding> steps;
  std::vector<std::map<Path, std::pair<int, int>>> index;

  const AlgPtr& algebra(int floor) const { return algebras.at(floor); }
  // Block index and position of a path at its floor, or {-1,-1}.
  std::pair<int, int> locate(const Path& p) const;
  double trace_weight(int floor, int vertex) const;
};

BratteliTower build_tower(int l, int n_levels);

/// Inclusion of floor `from` into floor `to` (from <= to).
SubAlgebraEmbedding floor_embedding(const BratteliTower& t, int from, int to);
Element embed(const BratteliTower& t, const Element& x, int from, int to);

/// T_(xi,eta) at the floor given by the path length.
Element matrix_unit(const BratteliTower& t, const Path& xi, const Path& eta);
/// All normalized matrix units s_p^{-1/2} T_p of a floor, in basis order.
std::vector<Element> normalized_units(const BratteliTower& t, int floor);

/// e_i at the given floor (1 <= i <= floor-1).
Element jones_projection(const BratteliTower& t, int floor, int i);

/// H = sum_j t_j^-1 v_j q_j over the blocks of the embedded subalgebra,
/// as an ambient element (Watatani index of the restricted trace).
Element watatani_index(const SubAlgebraEmbedding& k);

/// Family u_p with sum_p u_p E(u_p^* x) = x = sum_p E(x u_p) u_p^*.
struct QuasiBase {
  std::vector<Element> u;
  SubAlgebraEmbedding target;  // E is the trace expectation onto target.sub
  // Max entry of both Watatani sums minus x, over the given elements.
  double residual(const std::vector<Element>& xs) const;
};

/// u_p = b_p h^-1 for an orthonormal family b_p (trace inner product).
QuasiBase quasi_base(const std::vector<Element>& orthonormal,
                     const Element& h_inv, const SubAlgebraEmbedding& target);
/// Floor version: b_p are the normalized units of target_floor, E is onto
/// sub_floor, h is given as an element of target_floor.
QuasiBase quasi_base(const BratteliTower& t, int target_floor, int sub_floor,
                     const Element& h);

Json tower_to_json(const BratteliTower& t);

}  // namespace groupoidal
