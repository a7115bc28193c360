#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupoidal/matalg.hpp"
#include "groupoidal/serialize.hpp"

namespace groupoidal {

/// Candidate finite quantum groupoid on a multi-matrix algebra. Coordinates
/// are in the matrix-unit basis u_k of the algebra.
struct WeakHopfData {
  AlgPtr algebra;
  // Column k holds Delta(u_k) as coefficients on u_s (x) u_t, row s*n+t.
  CMat delta;
  CVec eps;       // eps(u_k)
  CMat antipode;  // column k = S(u_k)

  int dim() const { return algebra->dim(); }
  // Delta(u_k) as an n x n coefficient matrix [s][t].
  CMat coproduct_coeff(int k) const;
  CMat coproduct_coeff(const CVec& x) const;
  TensorElement coproduct(const Element& x) const;
  cplx counit(const Element& x) const;
  Element S(const Element& x) const;
};

/// Bilinear form <a_s, b_t> = gram(s,t) between two algebras.
struct Pairing {
  AlgPtr left, right;
  CMat gram;
  cplx operator()(const Element& a, const Element& b) const;
  // Smallest and largest singular values of the Gram matrix.
  std::pair<double, double> singular_range() const;
  bool degenerate() const;  // smallest < kDegeneracyThreshold * largest
  Pairing transposed() const;
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  bool passed = false;
};

struct AxiomReport {
  std::vector<CheckResult> checks;
  double tolerance = 0.0;
  double max_residual() const;
  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 42;
  int random_triples = 200;
};

AxiomReport verify_axioms(const WeakHopfData& w, const VerifyOptions& opt = {});

/// Matrices of eps_t and eps_s in the unit basis.
struct CounitMaps {
  CMat target;
  CMat source;
};
CounitMaps counit_maps(const WeakHopfData& w);

struct CounitalSubalgebras {
  SubAlgebraEmbedding target;  // G_t
  SubAlgebraEmbedding source;  // G_s
  double commutation_residual = 0.0;  // max |[x,y]| over unit pairs
  double image_residual = 0.0;        // distance of eps_t(G), eps_s(G) to G_t, G_s
};
CounitalSubalgebras counital_subalgebras(const WeakHopfData& w);

struct HaarProjection {
  Element p;
  int solution_dim = 0;     // dimension of the span of solutions found
  double ls_residual = 0.0; // least-squares residual before snapping
  double snap_shift = 0.0;  // largest eigenvalue move when snapping
};
/// Solves eps_t(g)p = gp, eps_t(p) = 1, S(p) = p, p = p*; throws
/// ConstructionError when the system is inconsistent or not unique or the
/// solution is not a projection.
HaarProjection haar_projection(const WeakHopfData& w);

/// Residuals of both characterizations (i), (ii) of a Haar projection.
double haar_projection_residual(const WeakHopfData& w, const Element& p);

/// phi(b) = <p, b> on the right algebra of the pairing (p lives on the left),
/// or phi(a) = <a, p> when measure_on_left.
CVec haar_measure(const Pairing& pr, const Element& partner_projection,
                  bool measure_on_left);
/// Both invariance characterizations of a Haar measure, with phi o eps_t =
/// eps and phi o eps_s = eps.
double haar_measure_residual(const WeakHopfData& w, const CVec& phi);

/// Structure on pr.right transported from w on pr.left.
struct DualReport {
  double product_residual = 0.0;  // <a, b b'> vs <Delta a, b (x) b'>
  double unit_residual = 0.0;     // <a, 1> vs eps(a)
  double star_residual = 0.0;     // <a, b*> vs conj <S(a)*, b>
};
WeakHopfData dual(const WeakHopfData& w, const Pairing& pr,
                  DualReport* report = nullptr);
/// Abstract dual realized as a multi-matrix algebra, with the canonical
/// evaluation pairing between w.algebra and it.
std::pair<WeakHopfData, Pairing> canonical_dual(const WeakHopfData& w);

/// Abstract finite-dimensional *-algebra by structure constants.
struct AbstractStarAlgebra {
  std::vector<CMat> left_mult;  // L(e_i), column j = coords of e_i e_j
  CMat star;                    // coords(x*) = star * conj(coords(x))
  CVec unit;
  int dim() const { return static_cast<int>(unit.size()); }
};
/// Wedderburn realization: the multi-matrix algebra and the matrix taking
/// its unit coordinates to abstract coordinates.
std::pair<AlgPtr, CMat> realize(const AbstractStarAlgebra& a,
                                std::uint64_t rng_seed = 7);

bool is_connected(const WeakHopfData& w);
bool is_regular(const WeakHopfData& w, double tol = kDefaultTolerance);
// dim(G_s ∩ Z(G)) and dim(G_t ∩ Z(G))
std::pair<int, int> center_intersections(const WeakHopfData& w);
double regularity_residual(const WeakHopfData& w);

struct IsoResult {
  bool ok = false;
  double residual = 0.0;
  std::string failure;  // empty on success
  CMat map;             // coordinates of W1 -> coordinates of W2
};
/// Extends the generator assignment over words and checks that it is an
/// isomorphism of weak Hopf *-algebras.
IsoResult iso_check(const WeakHopfData& w1, const WeakHopfData& w2,
                    const std::vector<std::pair<Element, Element>>& gen_map);
/// Residual of a given linear map being a structure-preserving bijection.
double intertwiner_residual(const WeakHopfData& w1, const WeakHopfData& w2,
                            const CMat& map);

/// Contraction helpers on Delta coefficients.
// (id (x) f) Delta(x) for a functional f given by its values on units.
CVec apply_right_functional(const WeakHopfData& w, const CVec& x, const CVec& f);
CVec apply_left_functional(const WeakHopfData& w, const CVec& x, const CVec& f);

/// Haar data: projection p, measure phi on the same algebra, d = phi(1),
/// gamma = phi(g_s^-1) once g_s is known.
struct HaarData {
  Element p;
  CVec phi;
  cplx d = 0.0;
  cplx gamma = 0.0;
};

/// F_t(a) = (id (x) phi)Delta(a), F_s(a) = (phi (x) id)Delta(a).
Element average_target(const WeakHopfData& w, const CVec& phi, const Element& a);
Element average_source(const WeakHopfData& w, const CVec& phi, const Element& a);

struct ModularData {
  Element g_s, g_t;
  double antipode_residual = 0.0;  // |S(g_t) - g_s|
  double haar_residual = 0.0;      // |g_s p - g_t p|
  double gamma_residual = 0.0;     // |phi(g_s^-1) - phi(g_t^-1)|
};
ModularData gs_gt(const WeakHopfData& w, HaarData& haar);
/// tr_a(a) = d gamma^-2 phi(g_s^-1 g_t^-1 a) as a functional on units.
CVec trace_functional(const WeakHopfData& w, const HaarData& haar,
                      const ModularData& g);

/// Small fixtures.
WeakHopfData group_algebra_z2();
// M_n^op (x) M_n realized on M_{n^2} through x^op -> x^T, with
// Delta(x^op (x) y) = n^-1 sum_ij (x^op (x) e_ij) (x) (e_ji^op (x) y). Its
// target counital subalgebra is M_n, so it is the smallest example with a
// non-commutative G_t.
WeakHopfData separable_pair_groupoid(int n);
WeakHopfData direct_sum(const WeakHopfData& a, const WeakHopfData& b);
WeakHopfData flipped_coproduct(const WeakHopfData& w);

// Coordinates of x* for a coordinate vector x of alg.
CVec star_coords(const MultiMatrixAlgebra& alg, const CVec& x);
// Index of u_k^* (the transposed unit).
std::vector<int> transpose_index(const MultiMatrixAlgebra& alg);

Json to_json(const WeakHopfData& w);
WeakHopfData weak_hopf_from_json(const Json& j, const std::string& where = "$");

}  // namespace groupoidal
