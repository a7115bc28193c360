#pragma once

#include <string>
#include <vector>

#include "groupoidal/weakhopf.hpp"

namespace groupoidal {

/// Action of a structure G on an algebra M, one operator per unit of G:
/// u_g acts by m -> u_g |> m for a left action, m -> m <| u_g for a right
/// one. Operators are dense matrices, or for large modules the factored
/// form outer * (I (x) inner[g]) * lift, applied without being formed.
struct ModuleAction {
  AlgPtr module;
  std::vector<CMat> act;  // dense form; empty when factored
  bool right = false;
  CMat outer, lift;
  std::vector<CMat> inner;

  int count() const;  // number of units of G
  bool factored() const { return act.empty(); }
  // Operator of u_k, or of the element with unit coordinates g, applied to
  // the columns of v.
  CMat apply_unit(int k, const CMat& v) const;
  CMat apply(const CVec& g, const CMat& v) const;
  Element apply(const CVec& g, const Element& m) const;
  // Dense matrix of the element with unit coordinates g.
  CMat operator_of(const CVec& g) const;
};

/// Module-algebra laws of a left action (g |> (xy) = (g1 |> x)(g2 |> y),
/// (g |> x)^* = S(g)^* |> x^*, g |> 1 = eps_t(g) |> 1) or of the mirrored
/// right action, on all unit pairs, plus unitality 1 |> x = x. Names carry
/// the prefix.
std::vector<CheckResult> module_algebra_checks(const WeakHopfData& g,
                                               const ModuleAction& action,
                                               const std::string& prefix, double tol);

/// The four actions induced by a pairing <a, b>:
///   b <| a = <a, b1> b2   (right action of A on B)
///   b |> a = <a2, b> a1   (left action of B on A)
///   a |> b = <a, b2> b1   (left action of A on B)
///   a <| b = <a1, b> a2   (right action of B on A)
struct DualActions {
  ModuleAction a_on_b_right, b_on_a_left, a_on_b_left, b_on_a_right;
  std::vector<CheckResult> checks;
  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};
/// Builds the actions and checks the pairing characterizations
/// <x, b <| a> = <ax, b> and <b |> a, y> = <a, yb>, the module-algebra laws
/// of all four, standardness (x -> 1_b <| x maps A_s onto B_t with inverse
/// y -> y |> 1_a) and the base-algebra rules for x in A_t, y in A_s:
///   x |> b = (x |> 1_b) b,  y |> b = b (y |> 1_b),
///   b <| x = (1_b <| x) b,  b <| y = b (1_b <| y).
/// Throws ConstructionError on a degenerate pairing.
DualActions dual_actions(const WeakHopfData& wa, const WeakHopfData& wb, const Pairing& pr,
                         double tol = kDefaultTolerance);

/// M x| G for a left module algebra M: the quotient of M (x) G by
/// m (z |> 1) (x) g ~ m (x) z g, z in G_t, with
///   [x (x) g][y (x) h] = [x (g1 |> y) (x) g2 h],
///   [x (x) g]^* = [(g1^* |> x^*) (x) g2^*],
/// realized as a multi-matrix algebra.
struct CrossedProductAlgebra {
  AlgPtr M;
  WeakHopfData G;
  ModuleAction action;
  int quotient_rank = 0;           // dim of M (x)_{G_t} G
  bool quotient_from_subspace = false;  // rank of the explicit subspace, else block count
  AlgPtr algebra;
  SubAlgebraEmbedding i_M, i_G;
  // Algebra coordinates of [u_m (x) u_g] in column m * dim G + g, and a
  // preimage in M (x) G of every algebra unit. Both are empty when the
  // algebra was built without them.
  CMat cls, lift;
  // Jones route only: dimension of the space of invariant densities, and
  // the projection of L^2(M) onto L^2(N) as an element of the algebra.
  int density_solutions = 0;
  Element base_projection;
  std::vector<CheckResult> checks;

  int tensor_dim() const { return M->dim() * G.dim(); }
  Element bracket(const Element& m, const Element& g) const;  // [m (x) g]
  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

struct SmashOptions {
  double tol = kDefaultTolerance;
  // Full-basis checks of the product and involution laws (pairs of pure
  // tensors) run when the tensor space is at most this large.
  int full_check_limit = 400;
  std::uint64_t rng_seed = 7;
};

/// Generic construction through the explicit quotient and the Wedderburn
/// realization of its regular representation. Suited to small quotients.
CrossedProductAlgebra smash(const AlgPtr& M, const WeakHopfData& G, const ModuleAction& action,
                            const SmashOptions& opt = {});

/// Orthonormal basis (columns) of the complement of the identification
/// subspace span{m (z |> 1) (x) g - m (x) z g} in M (x) G.
CMat quotient_basis(const AlgPtr& M, const WeakHopfData& G, const ModuleAction& action,
                    double rel_tol = 1e-10);
/// dim M (x)_{G_t} G from the blocks of G_t: sum over blocks j of
/// dim(M (e_j |> 1)) dim(e_j G) for a minimal projector e_j of block j.
int quotient_rank_by_blocks(const AlgPtr& M, const WeakHopfData& G, const ModuleAction& action);

/// M x| G realized on L^2(M, tr) as the basic construction of N in M,
/// for an action whose crossed product is that extension. The action is
/// made unitary by the positive density c in M solving
/// tr(x^* (h^* |> y) c) = tr((h |> x)^* y c); the algebra is then the
/// commutant of right multiplication by N, one block per block of N.
struct JonesOptions {
  double tol = kDefaultTolerance;
  bool keep_class_map = true;  // compute cls and lift
  std::uint64_t rng_seed = 7;
};
CrossedProductAlgebra jones_extension(const SubAlgebraEmbedding& N_in_M, const WeakHopfData& G,
                                      const ModuleAction& action, const JonesOptions& opt = {});

/// Dual left action of the dual structure on a crossed product,
/// h |> [m (x) g] = [m (x) h |> g], in algebra coordinates. Requires cls and
/// lift. residual receives the worst failure of well-definedness.
ModuleAction dual_action_on(const CrossedProductAlgebra& X, const ModuleAction& on_G,
                            double* residual = nullptr);

/// Haar data, modular elements and Markov traces of a dual pair.
struct PairMeasures {
  HaarData haar_a, haar_b;
  ModularData g_a, g_b;  // g_s, g_t and their hatted counterparts
  CVec tr_a, tr_b;       // tr(x) = tr_a.dot(coords) without conjugation
  double d = 0.0, gamma = 0.0;
  double tau() const { return d * d / (gamma * gamma); }  // d^2 gamma^-2
  std::vector<CheckResult> checks;
};
PairMeasures pair_measures(const WeakHopfData& wa, const WeakHopfData& wb, const Pairing& pr,
                           double tol = kDefaultTolerance);

/// Conditional expectations of a structure onto its counital subalgebras
/// preserving its Markov trace, with their closed forms
/// E_s(a) = d gamma^-1 F_s(a g_t^-1), E_t(a) = d gamma^-1 F_t(g_s^-1 a).
struct BaseExpectations {
  SubAlgebraEmbedding target, source;
  CMat E_t, E_s;  // matrices on unit coordinates of the structure
  double closed_form_residual = 0.0;
};
BaseExpectations base_expectations(const WeakHopfData& w, const HaarData& haar,
                                   const ModularData& g, const CVec& tr);

/// A.B = A x| B with B acting by b |> a, together with everything the
/// finite commuting square needs. The realized algebra carries the Markov
/// trace as its weights.
struct DotAlgebra {
  CrossedProductAlgebra X;   // A x| B through the explicit quotient
  CrossedProductAlgebra BA;  // B x| A with A acting by a |> b, Jones route
  DualActions actions;
  PairMeasures measures;
  BaseExpectations exp_a, exp_b;
  CMat E_A, E_B;  // algebra coordinates -> A, B unit coordinates
  CVec trace_vec; // tr(x) = trace_vec.dot(coords) without conjugation
  Element f_b;    // Jones projector of A_t in A, an element of B
  Element f_a;    // d gamma^-1 g_s^-1/2 p_a g_s^-1/2 in A
  int relative_commutant_dim = -1;  // dim of i(B)' in i(A)
  int intersection_dim = -1;        // dim of i(A) meet i(B)
  std::vector<CheckResult> checks;
  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  cplx trace(const Element& x) const;
};
/// Also checks that the identity of A (x) B induces A x| B = A |x B, the
/// right crossed product by b <| a with [ay (x) b] ~ [a (x) (1_b <| y) b]
/// for y in A_s and [a (x) b][a' (x) b'] = [a a'1 (x) (b <| a'2) b'].
DotAlgebra dot_algebra(const WeakHopfData& wa, const WeakHopfData& wb, const Pairing& pr,
                       double tol = kDefaultTolerance);

/// Max over unit pairs (a, b) of |phi_a(g_s^-2 p_a (b |> a)) - <a, b>|, with
/// the intermediate identity (p_b hat g_t^-2) <| p_a = 1. Not applicable
/// unless A is regular.
struct PairingRecovery {
  bool applicable = false;
  double residual = 0.0;
  double unit_identity_residual = 0.0;
  double unit_specialization_residual = 0.0;  // a = 1
};
PairingRecovery pairing_recovery(const WeakHopfData& wa, const WeakHopfData& wb,
                                 const Pairing& pr, double tol = kDefaultTolerance);

/// Finite ladder of commuting squares
///   A_0 = A   < A_1 = A x| B < A_2 = A_1 x| A < ...
///   B_0 = B_t < B_1 = B      < B_2 = B x| A   < ...
/// with the dual action at each step. Column k is the square over floors
/// k, k+1.
struct LadderOptions {
  int depth = 3;
  long long dimension_cap = 20000;  // sum of floor dimensions
  double tol = kDefaultTolerance;
  std::uint64_t rng_seed = 7;
};
struct LadderSquare {
  int floor = 0;  // square between floors floor and floor + 1
  double commutation_residual = 0.0;  // E_{A_n} E_{B_{n+1}} vs E_{B_{n+1}} E_{A_n}
  double corner_residual = 0.0;       // both against E_{B_n}
};
struct LadderGrid {
  std::vector<AlgPtr> a_row, b_row;
  std::vector<SubAlgebraEmbedding> a_step, b_step;  // floor n into floor n+1
  std::vector<SubAlgebraEmbedding> vertical;        // B_n into A_n
  std::vector<Element> a_jones, b_jones;  // Jones projector of floor n-1 < n, inside floor n+1
  std::vector<LadderSquare> squares;
  double tau = 0.0;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, int>> commutant_dims;
  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};
/// Throws ConstructionError when either structure is not connected or the
/// floors would exceed the dimension cap.
LadderGrid ladder(const WeakHopfData& wa, const WeakHopfData& wb, const Pairing& pr,
                  const LadderOptions& opt = {});
/// Floor dimensions of the ladder up to depth without building it.
std::pair<std::vector<int>, std::vector<int>> ladder_dimensions(const WeakHopfData& wa,
                                                                const WeakHopfData& wb,
                                                                const Pairing& pr, int depth);

Json ladder_to_json(const LadderGrid& g);
Json dot_algebra_to_json(const DotAlgebra& d);

}  // namespace groupoidal
