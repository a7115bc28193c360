#include <doctest.h>

#include <cmath>

#include "groupoidal/deform.hpp"
#include "groupoidal/tlgroupoid.hpp"

using namespace groupoidal;

namespace {

const TLStructure& d13_structure() {
  static const InclusionData d = build_inclusion(4, 2);
  static const TLStructure s = build_structure(d);
  return s;
}

struct Twisted {
  WeakHopfData regular;
  WeakHopfData twisted;
  Element g;  // positive element of G_t the regular structure was twisted by
};

// Regular M_2^op (x) M_2 structure conjugated by g^-1, where g^2 has
// normalized trace 1 on G_t = M_2. The result is a valid, non-regular
// structure whose k is g.
const Twisted& twisted() {
  static const Twisted t = [] {
    Twisted out;
    out.regular = separable_pair_groupoid(2);
    const SubAlgebraEmbedding gt = counital_subalgebras(out.regular).target;
    CMat b(2, 2);
    b << 1.2, 0.3, 0.3, 0.7;
    Element g = Element::from_blocks(gt.sub, {b});
    const double nt = (g * g).block(0).trace().real() / 2.0;
    g = (1.0 / std::sqrt(nt)) * g;
    out.g = gt.apply(g);
    out.twisted = conjugate_structure(out.regular, invert(out.g));
    return out;
  }();
  return t;
}

void require_all(const std::vector<CheckResult>& checks, double tol) {
  for (const auto& c : checks) {
    INFO(c.name << " residual " << c.residual);
    CHECK(c.residual <= tol);
  }
}

bool bitwise_equal(const WeakHopfData& a, const WeakHopfData& b) {
  return a.algebra == b.algebra && a.delta == b.delta && a.eps == b.eps &&
         a.antipode == b.antipode;
}

}  // namespace

TEST_SUITE("deform") {
  TEST_CASE("pair groupoid fixture and its twist") {
    const auto& t = twisted();
    CHECK(verify_axioms(t.regular).passed());
    CHECK(is_regular(t.regular));
    CHECK(counital_subalgebras(t.regular).target.sub->block_dims() == std::vector<int>{2});
    const auto rep = verify_axioms(t.twisted);
    for (const auto& c : rep.checks) {
      INFO(c.name << " " << c.residual);
      CHECK(c.passed);
    }
    CHECK(regularity_residual(t.twisted) > 0.5);
    CHECK_THROWS_AS(separable_pair_groupoid(0), AlgebraError);
  }

  TEST_CASE("separator") {
    // Hopf case: G_t = C1 and q = 1 (x) 1.
    const WeakHopfData z2 = group_algebra_z2();
    const Separator sz = separator(z2);
    const Element one = Element::identity(z2.algebra);
    CHECK((sz.q - tensor_elem(one, one)).max_abs() < 1e-12);

    // d13: G_t is abelian with two minimal projectors p, 1-p, and q is
    // p (x) p + (1-p) (x) (1-p).
    const auto& s = d13_structure();
    const Separator sd = separator(s.A);
    CHECK(sd.target.sub->block_dims() == std::vector<int>{1, 1});
    const Element p0 = sd.target.image_of_unit(0);
    const Element p1 = sd.target.image_of_unit(1);
    CHECK(distance(p0 * p0, p0) < 1e-10);
    CHECK(distance(p0 + p1, Element::identity(s.A.algebra)) < 1e-10);
    CHECK((sd.q - (tensor_elem(p0, p0) + tensor_elem(p1, p1))).max_abs() < 1e-10);
    CHECK(sd.exchange_residual < 1e-10);
    CHECK(sd.unit_exchange_residual < 1e-10);

    // Non-commutative G_t, non-regular structure: q picks up the 1/2 weights.
    const Separator st = separator(twisted().twisted);
    CHECK(st.exchange_residual < 1e-10);
    CHECK(st.unit_exchange_residual < 1e-10);
    const AlgPtr& gt = st.target.sub;
    TensorElement manual(twisted().twisted.algebra, twisted().twisted.algebra);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        manual += 0.5 * tensor_elem(st.target.image_of_unit(gt->basis_index(0, c, r)),
                                    st.target.image_of_unit(gt->basis_index(0, r, c)));
    CHECK((st.q - manual).max_abs() < 1e-12);
  }

  TEST_CASE("k in the Hopf case is the unit") {
    const WeakHopfData z2 = group_algebra_z2();
    const KReport kr = compute_k(z2);
    CHECK(distance(kr.k, Element::identity(z2.algebra)) < 1e-12);
    require_all(kr.clauses, 1e-10);
  }

  TEST_CASE("k on the dimension-13 example") {
    const auto& s = d13_structure();
    const KReport kr = compute_k(s.A);
    CHECK(kr.clauses.size() == 7);
    require_all(kr.clauses, 1e-10);
    CHECK(kr.find("antipode_square_fixes_k")->residual < 1e-10);
    // Independent evaluation of the contraction from Delta(1) and S.
    const CMat c = s.A.coproduct_coeff(Element::identity(s.A.algebra).to_vector());
    Element k2(s.A.algebra);
    for (int a = 0; a < s.A.dim(); ++a)
      for (int b = 0; b < s.A.dim(); ++b)
        if (std::abs(c(a, b)) > 0.0)
          k2 += c(a, b) * (Element::unit(s.A.algebra, b) * s.A.S(Element::unit(s.A.algebra, a)));
    CHECK(distance(kr.k_squared, k2) < 1e-12);
    CHECK(distance(kr.k * kr.k, k2) < 1e-10);
  }

  TEST_CASE("k recovers the twist of a non-regular structure") {
    const auto& t = twisted();
    const KReport kr = compute_k(t.twisted);
    require_all(kr.clauses, 1e-10);
    CHECK(distance(kr.k, t.g) < 1e-10);
    // Radon-Nikodym clause by hand: the canonical trace of M_2 is 2 Tr.
    const SubAlgebraEmbedding gt = counital_subalgebras(t.twisted).target;
    for (int i = 0; i < gt.sub->dim(); ++i) {
      const Element x = gt.image_of_unit(i);
      const auto u = gt.sub->unit(i);
      const double expect = u.row == u.col ? 2.0 : 0.0;
      CHECK(std::abs(t.twisted.counit(kr.k * x * kr.k) - expect) < 1e-10);
    }
  }

  TEST_CASE("non-positive contraction is rejected") {
    WeakHopfData w = group_algebra_z2();
    w.antipode = -w.antipode;
    CHECK_THROWS_AS(compute_k(w), ConstructionError);
  }

  TEST_CASE("deformation of a non-regular structure") {
    const auto& t = twisted();
    const auto [partner, pr] = canonical_dual(t.twisted);
    const DeformationData d = deform(t.twisted, pr, &partner);
    CHECK(d.axioms.passed());
    CHECK(d.regular);
    require_all(d.checks, 1e-10);
    CHECK(d.passed());
    // The twist is undone exactly.
    CHECK((d.deformed.delta - t.regular.delta).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((d.deformed.eps - t.regular.eps).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((d.deformed.antipode - t.regular.antipode).cwiseAbs().maxCoeff() < 1e-10);
    // The algebra is shared, not rebuilt.
    CHECK(d.deformed.algebra.get() == t.twisted.algebra.get());
    // Multiplicativity of the new coproduct on every basis pair.
    const AlgPtr& a = d.deformed.algebra;
    double rm = 0.0;
    for (int x = 0; x < a->dim(); ++x)
      for (int y = 0; y < a->dim(); ++y) {
        const Element ex = Element::unit(a, x), ey = Element::unit(a, y);
        const TensorElement lhs = d.deformed.coproduct(ex) * d.deformed.coproduct(ey);
        rm = std::max(rm, (lhs - d.deformed.coproduct(ex * ey)).max_abs());
      }
    CHECK(rm < 1e-10);
    // Pairing variants: only the transported one is a full duality here.
    REQUIRE(d.variants.size() == 3);
    CHECK_FALSE(d.variants[0].passed());
    CHECK(d.variants[0].checks[0].passed);  // A coproduct against B product
    CHECK_FALSE(d.variants[1].passed());
    CHECK(d.variants[2].passed());
    CHECK(d.preferred_variant == 2);
    CHECK(&d.pairing() == &d.variants[2].pairing);
    const Json diff = structure_diff(d.source, d.deformed);
    CHECK(diff["coproduct"]["changed"] == true);
    CHECK(diff["algebra"]["changed"] == false);
  }

  TEST_CASE("deformation of the dimension-13 example") {
    const auto& s = d13_structure();
    const DeformationData d = deform(s.A, s.pairing, &s.B);
    CHECK(d.passed());
    CHECK(d.axioms.max_residual() < 1e-9);
    require_all(d.checks, 1e-9);
    CHECK(d.checks.back().name == "isomorphic_to_source");
    for (const auto& v : d.variants) CHECK(v.passed());
    CHECK(d.preferred_variant == 0);
    // Without a partner the dual structure is transported from A.
    const DeformationData d2 = deform(s.A, s.pairing);
    CHECK(d2.passed());
    const Json j = deformation_to_json(d);
    CHECK(j["passed"] == true);
    CHECK(j["variants"].size() == 3);
  }

  TEST_CASE("deforming with k = 1 is the identity bit for bit") {
    const auto& s = d13_structure();
    const WeakHopfData out = conjugate_structure(s.A, Element::identity(s.A.algebra));
    CHECK(bitwise_equal(out, s.A));
    const WeakHopfData z2 = group_algebra_z2();
    const auto [partner, pr] = canonical_dual(z2);
    const DeformationData d = deform(z2, pr, &partner);
    CHECK(bitwise_equal(d.deformed, z2));
    const Json diff = structure_diff(z2, d.deformed);
    CHECK(diff["coproduct"]["changed"] == false);
    CHECK(diff["counit"]["changed"] == false);
    CHECK(diff["antipode"]["changed"] == false);
  }

  TEST_CASE("counit of the deformed structure on random triples") {
    const auto& t = twisted();
    const DeformationData d = deform(t.twisted, canonical_dual(t.twisted).second);
    VerifyOptions opt;
    opt.seed = 1234;
    opt.random_triples = 50;
    const auto rep = verify_axioms(d.deformed, opt);
    CHECK(rep.find("weak_counit")->passed);
    CHECK(rep.find("weak_counit_variant")->passed);
  }
}
