#pragma once

#include <string>
#include <vector>

#include "groupoidal/weakhopf.hpp"

namespace groupoidal {

/// q = sum_i n_{j(i)}^-1 lambda_i^* (x) lambda_i over the matrix units of G_t,
/// with n_j the size of the block holding lambda_i.
struct Separator {
  TensorElement q;
  SubAlgebraEmbedding target;  // G_t inside the algebra
  // Worst residual over the units z of G_t of
  //   Q (S^-1(z) (x) 1) = Q (1 (x) z), (S^-1(z) (x) 1) Q = (1 (x) z) Q
  // for Q = (S^-1 (x) id)(q), and of
  //   Delta(1) (S^-1(z) (x) 1) = Delta(1) (1 (x) z),
  //   (S(z) (x) 1) Delta(1) = (1 (x) z) Delta(1).
  double exchange_residual = 0.0;
  double unit_exchange_residual = 0.0;
};
Separator separator(const WeakHopfData& w);

/// (S^-1 (x) id)(q)
TensorElement separator_image(const WeakHopfData& w, const TensorElement& q);

/// 1_(2) S(1_(1))
Element unit_contraction(const WeakHopfData& w);

struct KReport {
  Element k;
  Element k_squared;  // the contraction itself
  // k_square_contraction, radon_nikodym_trace, unit_coproduct_fixed,
  // unit_coproduct_factor, antipode_square_inner, antipode_square_fixes_k,
  // k_in_target
  std::vector<CheckResult> clauses;
  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};
/// Positive square root of the contraction, with every clause evaluated.
/// Throws ConstructionError when the contraction is not positive invertible.
KReport compute_k(const WeakHopfData& w, const Separator& sep,
                  double tol = kDefaultTolerance);
KReport compute_k(const WeakHopfData& w, double tol = kDefaultTolerance);

/// Canonical trace of a subalgebra: x -> Tr(L_x), which weighs a minimal
/// projector of an n x n block by n.
double canonical_trace(const SubAlgebraEmbedding& sub, const Element& x);

/// Delta(a) -> (1 (x) k^-1) Delta(a) (1 (x) k^-1), eps(a) -> eps(k a S(k)),
/// S(a) -> S(k^-1) k S(a) k^-1 S(k). The algebra pointer is shared with w.
/// k equal to the unit returns w unchanged.
WeakHopfData conjugate_structure(const WeakHopfData& w, const Element& k);

/// Coordinates of a -> k a S(k).
CMat counit_twist_matrix(const WeakHopfData& w, const Element& k);

/// Both directions of a duality between wa and wb under gram: coproducts
/// against products, counits against units, antipodes, and the star.
std::vector<CheckResult> duality_checks(const WeakHopfData& wa, const WeakHopfData& wb,
                                        const Pairing& pr, double tol);

struct PairingVariant {
  std::string name;
  Pairing pairing;
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct DeformationData {
  Element k;
  TensorElement q;
  WeakHopfData source;
  WeakHopfData deformed;
  KReport k_report;
  AxiomReport axioms;
  double regularity_residual = 0.0;
  bool regular = false;
  // unit_coproduct_separator, counit_two_forms, algebra_shared, and
  // isomorphic_to_source when the source was regular.
  std::vector<CheckResult> checks;
  // Right-hand structures the variants are checked against.
  WeakHopfData partner_source, partner_deformed, partner_transported;
  // "raw": [a, b] = <k a S(k), b> against the partner as given.
  // "partner_deformed": the partner deformed by its own k as well, with
  // [a, b] = <k a S(k), k_B b S(k_B)>.
  // "transported": the raw pairing against the structure it induces on the
  // partner algebra, which must itself pass the axioms and be regular.
  std::vector<PairingVariant> variants;
  int preferred_variant = -1;  // first variant whose checks pass, or -1
  const Pairing& pairing() const;
  bool passed() const;
};

/// Deforms w into a regular structure. partner is the structure on pr.right
/// dual to w under pr; when absent it is transported from w through pr.
DeformationData deform(const WeakHopfData& w, const Pairing& pr,
                       const WeakHopfData* partner = nullptr,
                       const VerifyOptions& opt = {});

/// Which structure maps differ between two structures on one algebra.
Json structure_diff(const WeakHopfData& before, const WeakHopfData& after);
Json deformation_to_json(const DeformationData& d);

}  // namespace groupoidal
