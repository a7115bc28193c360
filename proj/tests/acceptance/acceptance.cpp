// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "groupoidal/crossprod.hpp"
#include "groupoidal/deform.hpp"
#include "groupoidal/tlgroupoid.hpp"

using namespace groupoidal;

namespace {

// Pinned tolerances.
constexpr double kTables = 1e-9;
constexpr double kAxioms = 1e-9;
constexpr double kHaar = 1e-9;
constexpr double kDuality = 1e-8;
constexpr double kRoutes = 1e-9;
constexpr double kDeform = 1e-9;
constexpr double kTraceProperty = 1e-10;
constexpr double kMarkov = 1e-9;
constexpr double kSquare = 1e-9;
constexpr double kRecovery = 1e-8;
constexpr double kProperties = 1e-9;
constexpr double kTablesSeconds = 5.0;
constexpr double kAxiomsSeconds = 10.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void need(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
  void need_checks(const std::vector<CheckResult>& cs, double tol, const std::string& prefix = "") {
    for (const auto& c : cs) need(c.residual <= tol, prefix + c.name + " " + fmt(c.residual));
  }
  static std::string fmt(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2e", x);
    return b;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_residual(const std::vector<CheckResult>& cs) {
  double r = 0.0;
  for (const auto& c : cs) r = std::max(r, c.residual);
  return r;
}

const CheckResult* find(const std::vector<CheckResult>& cs, const std::string& name) {
  for (const auto& c : cs)
    if (c.name == name) return &c;
  return nullptr;
}

struct D13 {
  InclusionData d;
  TLStructure s;
};
const D13& d13() {
  static const D13 x = [] {
    D13 out{build_inclusion(4, 2), {}};
    out.s = build_structure(out.d);
    return out;
  }();
  return x;
}

void criterion_1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const InclusionData d = build_inclusion(4, 2);
  const TLStructure s = build_structure(d);
  const D13Fixture fx = d13_units(d);
  const auto cs = d13_tables_check(fx, s.A, kTables);
  const double t = seconds_since(t0);
  o.need_checks(cs, kTables);
  o.need(t < kTablesSeconds, "runtime");
  o.detail << cs.size() << " tables, max residual " << Outcome::fmt(max_residual(cs)) << ", "
           << Outcome::fmt(t) << " s";
}

void criterion_2(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (auto [l, m] : std::vector<std::pair<int, int>>{{3, 1}, {4, 2}}) {
    const InclusionData d = build_inclusion(l, m);
    const TLStructure s = build_structure(d);
    const std::string tag = "(" + std::to_string(l) + "," + std::to_string(m) + ") ";
    for (const auto* w : {&s.A, &s.B}) {
      const AxiomReport r = verify_axioms(*w);
      o.need_checks(r.checks, kAxioms, tag);
      o.need(is_connected(*w), tag + "connected");
      o.need(is_regular(*w), tag + "regular");
      worst = std::max(worst, r.max_residual());
    }
  }
  const double t = seconds_since(t0);
  o.need(t < kAxiomsSeconds, "runtime");
  o.detail << "max residual " << Outcome::fmt(worst) << ", connected and regular, "
           << Outcome::fmt(t) << " s";
}

void criterion_3(Outcome& o) {
  const auto& [d, s] = d13();
  const FormulaHaar fh = haar_from_formula(d);
  const double rb = distance(haar_projection(s.B).p, fh.p_B);
  const double ra = distance(haar_projection(s.A).p, fh.p_A);
  const double mb = haar_measure_residual(s.B, fh.phi_B);
  const double ma = haar_measure_residual(s.A, fh.phi_A);
  o.need(rb <= kHaar, "projection of B");
  o.need(ra <= kHaar, "projection of A");
  o.need(mb <= kHaar, "measure of B");
  o.need(ma <= kHaar, "measure of A");
  o.detail << "projection " << Outcome::fmt(std::max(ra, rb)) << ", measure invariance "
           << Outcome::fmt(std::max(ma, mb));
}

void criterion_4(Outcome& o) {
  const auto& [d, s] = d13();
  const SelfDualityReport r = selfduality_check(d, s);
  o.need(r.shift.ok, "generator shift: " + r.shift.failure);
  o.need(r.shift.residual < kDuality, "shift residual");
  o.need(r.dual_residual < kDuality, "dual vs B");
  o.detail << "shift " << Outcome::fmt(r.shift.residual) << ", dual "
           << Outcome::fmt(r.dual_residual);
}

void criterion_5(Outcome& o) {
  const auto& [d, s] = d13();
  const CMat e = coproduct_by_expectation(d);
  const CMat g = coproduct_by_generators(d);
  const double r1 = (s.A.delta - e).cwiseAbs().maxCoeff();
  const double r2 = (s.A.delta - g).cwiseAbs().maxCoeff();
  const double r3 = (e - g).cwiseAbs().maxCoeff();
  o.need(r1 <= kRoutes, "gram vs expectation");
  o.need(r2 <= kRoutes, "gram vs generators");
  o.need(r3 <= kRoutes, "expectation vs generators");
  o.detail << "pairwise " << Outcome::fmt(r1) << " " << Outcome::fmt(r2) << " "
           << Outcome::fmt(r3) << " over " << s.A.dim() * s.A.dim() << " x " << s.A.dim()
           << " coefficients";
}

// Regular structure conjugated by a positive element of its non-commutative
// target algebra, so that the deformation has something to undo.
WeakHopfData twisted_fixture() {
  const WeakHopfData reg = separable_pair_groupoid(2);
  const SubAlgebraEmbedding gt = counital_subalgebras(reg).target;
  CMat b(2, 2);
  b << 1.2, 0.3, 0.3, 0.7;
  Element g = Element::from_blocks(gt.sub, {b});
  g = (1.0 / std::sqrt((g * g).block(0).trace().real() / 2.0)) * g;
  return conjugate_structure(reg, invert(gt.apply(g)));
}

void criterion_6(Outcome& o) {
  const auto& [d, s] = d13();
  const KReport k = compute_k(s.A);
  o.need_checks(k.clauses, kDeform, "d13 ");
  const DeformationData dd = deform(s.A, s.pairing, &s.B);
  o.need(dd.axioms.passed() && dd.axioms.max_residual() <= kDeform, "d13 axioms");
  o.need(dd.regular, "d13 regular");

  const WeakHopfData tw = twisted_fixture();
  o.need(!is_regular(tw), "fixture should start non-regular");
  const KReport kt = compute_k(tw);
  o.need_checks(kt.clauses, kDeform, "twisted ");
  const DeformationData dt = deform(tw, canonical_dual(tw).second);
  o.need(dt.axioms.passed() && dt.axioms.max_residual() <= kDeform, "twisted axioms");
  o.need(dt.regular, "twisted regular");

  const WeakHopfData same = conjugate_structure(s.A, Element::identity(s.A.algebra));
  const bool bitwise = same.algebra == s.A.algebra && same.delta == s.A.delta &&
                       same.eps == s.A.eps && same.antipode == s.A.antipode;
  o.need(bitwise, "k = 1 is not the identity");
  o.detail << "k clauses " << Outcome::fmt(std::max(max_residual(k.clauses), max_residual(kt.clauses)))
           << ", deformed axioms " << Outcome::fmt(std::max(dd.axioms.max_residual(), dt.axioms.max_residual()))
           << ", regular, k = 1 bitwise";
}

void criterion_7(Outcome& o) {
  const auto& [d, s] = d13();
  const DotAlgebra x = dot_algebra(s.A, s.B, s.pairing);
  o.need_checks(x.checks, kSquare);
  for (const char* name : {"commuting_square", "square_product_formula", "E_A_trace_preserving",
                           "E_B_trace_preserving", "intersection_is_source",
                           "relative_commutant_is_target"}) {
    const CheckResult* c = find(x.checks, name);
    o.need(c && c->residual <= kSquare, name);
  }
  const CheckResult* tp = find(x.checks, "trace_property");
  o.need(tp && tp->residual <= kTraceProperty, "trace_property");
  const CheckResult* mk = find(x.checks, "markov_identity");
  o.need(mk && mk->residual <= kMarkov, "markov_identity");
  const int dim_at = counital_subalgebras(s.A).target.sub->dim();
  const int dim_as = counital_subalgebras(s.A).source.sub->dim();
  o.need(x.intersection_dim == dim_as, "A meet B dimension");
  o.need(x.relative_commutant_dim == dim_at, "relative commutant dimension");

  // Finite ladder of depth 3 over the same pair.
  const LadderGrid g = ladder(s.A, s.B, s.pairing);
  o.need_checks(g.checks, kSquare, "ladder ");
  o.detail << "dim A.B " << x.X.algebra->dim() << ", A meet B " << x.intersection_dim
           << ", commutant " << x.relative_commutant_dim << ", trace "
           << Outcome::fmt(tp ? tp->residual : -1) << ", markov "
           << Outcome::fmt(mk ? mk->residual : -1) << "; ladder to dim "
           << g.a_row.back()->dim() << ", " << g.squares.size() << " squares, worst "
           << Outcome::fmt(max_residual(g.checks));
}

void criterion_8(Outcome& o) {
  const auto& [d, s] = d13();
  const PairingRecovery r = pairing_recovery(s.A, s.B, s.pairing);
  o.need(r.applicable, "not applicable");
  o.need(r.residual < kRecovery, "residual");
  o.detail << s.A.dim() * s.B.dim() << " pairs, max residual " << Outcome::fmt(r.residual);
}

void criterion_9(Outcome& o) {
  const auto& [d, s] = d13();
  const auto ids = construction_identities(d, s);
  for (const char* name : {"quasi_base_over_N2", "quasi_base_relative", "quasi_base_A",
                           "h_commutation"}) {
    const CheckResult* c = find(ids, name);
    o.need(c && c->residual <= kProperties, name);
  }
  const ActionReport ar = action_report(d, s);
  o.need_checks(ar.checks, kProperties);
  o.need(ar.fixed_point_dim == 1, "fixed points");
  o.detail << "quasi-bases and h identities " << Outcome::fmt(max_residual(ids))
           << ", module laws " << Outcome::fmt(max_residual(ar.checks)) << ", fixed points "
           << ar.fixed_point_dim;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"golden dimension-13 tables", criterion_1},
      {"axiom suite", criterion_2},
      {"Haar agreement", criterion_3},
      {"self-duality", criterion_4},
      {"coproduct routes", criterion_5},
      {"deformation", criterion_6},
      {"crossed product", criterion_7},
      {"pairing recovery", criterion_8},
      {"property identities", criterion_9},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu %s: %s  %s\n", i + 1, criteria[i].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
