#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "groupoidal/bratteli.hpp"
#include "groupoidal/weakhopf.hpp"

namespace groupoidal {

/// Depth-2 inclusion N_0 = P_0 ⊂ N_1 = P_m inside the A_l Temperley-Lieb
/// tower, with N_k = P_{km}. Everything lives in the floor-3m algebra, which
/// is N_0'∩N_3.
struct InclusionData {
  int l = 0;
  int m = 0;
  double delta = 0.0;  // TL parameter, e_i e_{i±1} e_i = delta e_i
  double tau = 0.0;    // delta^m, Jones relation constant of f_1, f_2
  BratteliTower tower;  // floors 0..3m
  AlgPtr top;           // floor 3m

  SubAlgebraEmbedding A;     // N_0'∩N_2: floor 2m inside floor 3m
  SubAlgebraEmbedding B;     // N_1'∩N_3: generated by e_{m+1}..e_{3m-1}
  SubAlgebraEmbedding base;  // N_1'∩N_2: generated by e_{m+1}..e_{2m-1}
  SubAlgebraEmbedding At;    // N_0'∩N_1 inside A coordinates (floor m in floor 2m)

  std::vector<Element> e;  // e[p] at floor 3m for 1 <= p <= 3m-1, e[0] = 1
  Element f1, f2;          // Jones projections of N_0 ⊂ N_1 and N_1 ⊂ N_2
  Element H, h;            // index of tr on N_1'∩N_2 and its positive root
  CMat j1;                 // on A coordinates, e_p -> e_{2m-p}
  CMat j2;                 // on B coordinates, e_p -> e_{4m-p}

  // Coordinates of top-level elements lying in A or B, and back.
  Element to_A(const Element& x) const { return Element::from_vector(A.sub, A.expectation_coords(x)); }
  Element to_B(const Element& x) const { return Element::from_vector(B.sub, B.expectation_coords(x)); }
  Element from_A(const Element& a) const { return A.apply(a); }
  Element from_B(const Element& b) const { return B.apply(b); }
  Element j1_apply(const Element& a) const;  // a in A coordinates
  Element j2_apply(const Element& b) const;  // b in B coordinates
  // e_p as an element of A (1 <= p <= 2m-1) or of B (m+1 <= p <= 3m-1).
  Element eA(int p) const { return to_A(e.at(p)); }
  Element eB(int p) const { return to_B(e.at(p)); }
};

/// Throws ConstructionError when P_0 ⊂ P_m is not of depth 2, detected by
/// comparing the centres of N_0'∩N_1 and N_0'∩N_3, or by a degenerate Gram
/// matrix.
InclusionData build_inclusion(int l, int m);

/// Anti-multiplicative involution of floor 2n with e_p -> e_{2n-p}, as a
/// matrix on floor-2n coordinates.
LinearMap j_antiautomorphism(const BratteliTower& t, int n);
LinearMap j_antiautomorphism(const InclusionData& d, int n);

/// <a,b> = tau^-2 tr(a h f2 f1 h b) over the unit bases of A and B.
Pairing tl_pairing(const InclusionData& d);

struct TLStructure {
  WeakHopfData A, B;
  Pairing pairing;  // left A, right B
  double gram_min_sv = 0.0;
  double gram_condition = 0.0;
  // Residuals of building the structure: three routes to Delta_A, a second
  // formula for Delta_B, counit and antipode formulas against the pairing.
  std::vector<CheckResult> checks;
  double max_residual() const;
  const CheckResult* find(const std::string& name) const;
};

/// Delta by transposing the partner multiplication through the Gram matrix,
/// eps and S from their closed formulas. Throws ConstructionError on a
/// degenerate pairing or when a cross-check exceeds tol.
TLStructure build_structure(const InclusionData& d, double tol = kDefaultTolerance);

/// Delta_A from the expectation formula, computed inside floor 3m.
CMat coproduct_by_expectation(const InclusionData& d);
/// Delta_A from Delta_A(1), Delta_A(e_p) and Delta_A(e_m), extended
/// multiplicatively over words.
CMat coproduct_by_generators(const InclusionData& d);
/// Delta_B through a Pimsner-Popa base of A over N_0'∩N_1.
CMat coproduct_b_by_base(const InclusionData& d);

/// Identities the construction relies on, each as a full-basis residual:
/// Jones relations of f1/f2, commutation identities of h and j, pairing side
/// identities, Watatani quasi-bases, S^2 formulas, counit-map formula.
std::vector<CheckResult> construction_identities(const InclusionData& d,
                                                 const TLStructure& s,
                                                 double tol = kDefaultTolerance);

struct FormulaHaar {
  Element p_A, p_B;      // d^-1 h f1 h and d^-1 h f2 h
  CVec phi_A, phi_B;     // d^-1 tr(H j(H) x)
  int d = 0;             // dim N_1'∩N_2
};
FormulaHaar haar_from_formula(const InclusionData& d);

/// Self-duality: e_p -> e_{p+m} from W_A to W_B, and dual(W_A) against W_B.
struct SelfDualityReport {
  IsoResult shift;
  double dual_residual = 0.0;         // dual(W_A, pairing) vs W_B, identity map
  double double_dual_residual = 0.0;  // dual of dual of W_A vs W_A
  bool passed(double tol = kExtensionThreshold) const;
};
/// Throws AlgebraError for odd m.
SelfDualityReport selfduality_check(const InclusionData& d, const TLStructure& s);

/// a ▷ x = tau^-1 E_{N_1}(a x h f1 h^-1) for a in A and x in N_0'∩N_1, both
/// in A coordinates. Throws AlgebraError when x is outside N_0'∩N_1.
Element action_on_tower(const InclusionData& d, const Element& a, const Element& x);

struct ActionReport {
  std::vector<CheckResult> checks;  // module-algebra laws
  int fixed_point_dim = 0;
};
ActionReport action_report(const InclusionData& d, const TLStructure& s,
                           double tol = kDefaultTolerance);

/// Named units of the (l=4, m=2) example in A coordinates.
struct D13Fixture {
  InclusionData data;
  double z = 0.0;  // delta^{1/4}
  double delta = 0.0;
  std::map<std::string, Element> units;
  // Columns: c11 c12 c21 c22 e11 e12 e13 e21 e22 e23 e31 e32 e33 in the
  // path unit basis of A.
  CMat new_basis;
  std::vector<std::string> new_names;
  double relation_residual = 0.0;
  const Element& operator[](const std::string& k) const { return units.at(k); }
};
/// Throws ConstructionError when (l,m) != (4,2) or a relation fails.
D13Fixture d13_units(const InclusionData& d, double tol = kDefaultTolerance);
D13Fixture d13_units(double tol = kDefaultTolerance);

/// Coproduct of x in the new unit basis: coefficient matrix [i][j] on
/// new_i (x) new_j.
CMat d13_coproduct_new_basis(const D13Fixture& fx, const WeakHopfData& wa, const Element& x);

/// Coefficient-wise comparison with the published tables.
std::vector<CheckResult> d13_tables_check(const D13Fixture& fx, const WeakHopfData& wa,
                                          double tol = kDefaultTolerance);

Json inclusion_to_json(const InclusionData& d);

}  // namespace groupoidal
