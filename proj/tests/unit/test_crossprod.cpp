#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "groupoidal/crossprod.hpp"
#include "groupoidal/tlgroupoid.hpp"

using namespace groupoidal;

namespace {

const TLStructure& d13_structure() {
  static const InclusionData d = build_inclusion(4, 2);
  static const TLStructure s = build_structure(d);
  return s;
}

const DualActions& d13_actions() {
  static const DualActions da = [] {
    const auto& s = d13_structure();
    return dual_actions(s.A, s.B, s.pairing);
  }();
  return da;
}

const DotAlgebra& d13_dot() {
  static const DotAlgebra d = [] {
    const auto& s = d13_structure();
    return dot_algebra(s.A, s.B, s.pairing);
  }();
  return d;
}

void require_all(const std::vector<CheckResult>& checks, double tol) {
  for (const auto& c : checks) {
    INFO(c.name << " residual " << c.residual);
    CHECK(c.residual <= tol);
  }
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Block sizes of the basic construction of sub in ambient: one block per
// block of sub, of size sum_j m_ij n_j, where m_ij is the rank of a minimal
// projector of sub block i inside ambient block j.
std::vector<int> basic_construction_blocks(const SubAlgebraEmbedding& e) {
  const AlgPtr& amb = e.ambient;
  std::vector<int> out;
  for (int i = 0; i < e.sub->num_blocks(); ++i) {
    const Element p = e.apply(Element::unit(e.sub, e.sub->basis_index(i, 0, 0)));
    int size = 0;
    for (int j = 0; j < amb->num_blocks(); ++j) {
      const double rank = p.block(j).trace().real();  // projector: trace = rank
      size += static_cast<int>(std::lround(rank)) * amb->block_dims()[j];
    }
    out.push_back(size);
  }
  return out;
}

WeakHopfData trivial_structure() {
  WeakHopfData w;
  w.algebra = MultiMatrixAlgebra::make({1}, {1.0});
  w.delta = CMat::Ones(1, 1);
  w.eps = CVec::Ones(1);
  w.antipode = CMat::Ones(1, 1);
  return w;
}

}  // namespace

TEST_SUITE("crossprod") {
  TEST_CASE("dual actions of the dimension-13 pair") {
    const auto& da = d13_actions();
    require_all(da.checks, 1e-10);
    CHECK(da.passed());
    const auto& s = d13_structure();
    CHECK(da.b_on_a_left.count() == s.B.dim());
    CHECK(da.a_on_b_left.count() == s.A.dim());
    // Independent evaluation of b |> a = <a2, b> a1 on a few units.
    for (int a = 0; a < s.A.dim(); a += 4)
      for (int b = 0; b < s.B.dim(); b += 5) {
        const CMat c = s.A.coproduct_coeff(a);
        CVec expect = CVec::Zero(s.A.dim());
        for (int i = 0; i < s.A.dim(); ++i)
          for (int j = 0; j < s.A.dim(); ++j) expect(i) += c(i, j) * s.pairing.gram(j, b);
        const CVec got = da.b_on_a_left.apply_unit(b, CVec::Unit(s.A.dim(), a));
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
      }
  }

  TEST_CASE("crossed product by the trivial structure returns the algebra") {
    const WeakHopfData one = trivial_structure();
    CHECK(verify_axioms(one).passed());
    const AlgPtr M = MultiMatrixAlgebra::uniform({2, 1});
    ModuleAction act;
    act.module = M;
    act.act = {CMat::Identity(M->dim(), M->dim())};
    const CrossedProductAlgebra X = smash(M, one, act);
    require_all(X.checks, 1e-10);
    CHECK(X.quotient_rank == M->dim());
    CHECK(sorted(X.algebra->block_dims()) == std::vector<int>{1, 2});
  }

  TEST_CASE("Heisenberg double of the group algebra of Z/2 is M_2") {
    const WeakHopfData z2 = group_algebra_z2();
    const auto [fun, pr] = canonical_dual(z2);
    const DualActions da = dual_actions(z2, fun, pr);
    require_all(da.checks, 1e-10);
    const CrossedProductAlgebra X = smash(z2.algebra, fun, da.b_on_a_left);
    require_all(X.checks, 1e-10);
    CHECK(X.quotient_rank == 4);
    CHECK(X.algebra->block_dims() == std::vector<int>{2});
  }

  TEST_CASE("target counital subalgebra crossed by the structure is the structure") {
    // a |> z = eps_t(a z) makes A_t a left A-module algebra, and
    // A_t x| A is isomorphic to A.
    const WeakHopfData& A = d13_structure().A;
    const SubAlgebraEmbedding At = counital_subalgebras(A).target;
    const CMat et = counit_maps(A).target;
    ModuleAction act;
    act.module = At.sub;
    for (int k = 0; k < A.dim(); ++k) {
      CMat op(At.sub->dim(), At.sub->dim());
      for (int j = 0; j < At.sub->dim(); ++j) {
        const CVec az = (Element::unit(A.algebra, k) * At.image_of_unit(j)).to_vector();
        op.col(j) = At.expectation_coords(Element::from_vector(A.algebra, et * az));
      }
      act.act.push_back(op);
    }
    require_all(module_algebra_checks(A, act, "", 1e-10), 1e-10);
    const CrossedProductAlgebra X = smash(At.sub, A, act);
    require_all(X.checks, 1e-10);
    CHECK(X.quotient_rank == A.dim());
    CHECK(sorted(X.algebra->block_dims()) == sorted(A.algebra->block_dims()));
  }

  TEST_CASE("both realizations of A x| B agree with the basic construction") {
    const auto& s = d13_structure();
    const auto& da = d13_actions();
    const DotAlgebra& d = d13_dot();
    const SubAlgebraEmbedding At = counital_subalgebras(s.A).target;
    const CrossedProductAlgebra J = jones_extension(At, s.B, da.b_on_a_left);
    require_all(J.checks, 1e-10);
    const auto expect = sorted(basic_construction_blocks(At));
    CHECK(expect == std::vector<int>{5, 8});
    CHECK(sorted(d.X.algebra->block_dims()) == expect);
    CHECK(sorted(J.algebra->block_dims()) == expect);
    CHECK(d.X.algebra->dim() == 89);
    CHECK(J.density_solutions >= 1);
    // Product law of the explicit quotient against the coproduct of B.
    const CrossedProductAlgebra& X = d.X;
    for (int x = 0; x < s.A.dim(); x += 5)
      for (int g = 0; g < s.B.dim(); g += 6)
        for (int y = 1; y < s.A.dim(); y += 5)
          for (int h = 2; h < s.B.dim(); h += 6) {
            const Element ex = Element::unit(s.A.algebra, x), ey = Element::unit(s.A.algebra, y);
            const Element eg = Element::unit(s.B.algebra, g), eh = Element::unit(s.B.algebra, h);
            const Element lhs = X.bracket(ex, eg) * X.bracket(ey, eh);
            Element rhs(X.algebra);
            const CMat c = s.B.coproduct_coeff(g);
            for (int i = 0; i < s.B.dim(); ++i)
              for (int j = 0; j < s.B.dim(); ++j)
                if (std::abs(c(i, j)) > 0.0)
                  rhs += c(i, j) * X.bracket(ex * da.b_on_a_left.apply(CVec::Unit(s.B.dim(), i), ey),
                                             Element::unit(s.B.algebra, j) * eh);
            CHECK(distance(lhs, rhs) < 1e-10);
          }
  }

  TEST_CASE("dot algebra of the dimension-13 pair") {
    const DotAlgebra& d = d13_dot();
    require_all(d.checks, 1e-9);
    CHECK(d.passed());
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(std::abs(d.measures.tau() - std::pow(phi, -4)) < 1e-10);
    CHECK(std::abs(d.measures.d - 2.0) < 1e-10);
    CHECK(d.relative_commutant_dim == 2);
    CHECK(d.intersection_dim == 2);
    CHECK(std::abs(d.trace(d.X.i_G.apply(d.f_b)) - d.measures.tau()) < 1e-10);
    CHECK(std::abs(d.trace(d.X.i_M.apply(d.f_a)) - d.measures.tau()) < 1e-10);
    CHECK(std::abs(d.trace(Element::identity(d.X.algebra)) - 1.0) < 1e-12);
    const Json j = dot_algebra_to_json(d);
    CHECK(j["passed"] == true);
  }

  TEST_CASE("pairing recovered from the dual action") {
    const auto& s = d13_structure();
    const PairingRecovery r = pairing_recovery(s.A, s.B, s.pairing);
    REQUIRE(r.applicable);
    CHECK(r.residual < 1e-10);
    CHECK(r.unit_identity_residual < 1e-10);
    CHECK(r.unit_specialization_residual < 1e-10);
  }

  TEST_CASE("ladder dimensions follow the inclusion") {
    const auto& s = d13_structure();
    const auto [a, b] = ladder_dimensions(s.A, s.B, s.pairing, 3);
    CHECK(a == std::vector<int>{13, 89, 610, 4181});
    CHECK(b == std::vector<int>{2, 13, 89, 610});
    // Each floor is a basic construction, so consecutive ratios approach
    // the index phi^4.
    const double phi4 = std::pow((1.0 + std::sqrt(5.0)) / 2.0, 4);
    CHECK(std::abs(static_cast<double>(a[3]) / a[2] - phi4) < 1e-3);
  }

  TEST_CASE("ladder of depth 2") {
    const auto& s = d13_structure();
    LadderOptions opt;
    opt.depth = 2;
    const LadderGrid g = ladder(s.A, s.B, s.pairing, opt);
    require_all(g.checks, 1e-9);
    CHECK(g.passed());
    REQUIRE(g.a_row.size() == 3);
    REQUIRE(g.b_row.size() == 3);
    CHECK(g.a_row[2]->dim() == 610);
    CHECK(g.b_row[2]->dim() == 89);
    REQUIRE(g.squares.size() == 2);
    for (const auto& sq : g.squares) {
      CHECK(sq.commutation_residual < 1e-10);
      CHECK(sq.corner_residual < 1e-10);
    }
    for (const auto& e : g.a_jones) {
      CHECK(distance(e * e, e) < 1e-10);
      CHECK(std::abs(e.trace() - g.tau) < 1e-10);
    }
    const std::vector<std::pair<std::string, int>> dims{{"B1' cap A0 in A1", 2},
                                                         {"A0' cap B1 in A1", 2},
                                                         {"B1' cap A in B2", 2},
                                                         {"A0' cap B2 in A2", 13}};
    CHECK(g.commutant_dims == dims);
    const Json j = ladder_to_json(g);
    CHECK(j["passed"] == true);
    CHECK(j["squares"].size() == 2);
  }

  TEST_CASE("ladder rejects oversize and disconnected input") {
    const auto& s = d13_structure();
    LadderOptions opt;
    opt.depth = 3;
    opt.dimension_cap = 1000;
    CHECK_THROWS_AS(ladder(s.A, s.B, s.pairing, opt), ConstructionError);
    const WeakHopfData w = direct_sum(group_algebra_z2(), group_algebra_z2());
    CHECK_FALSE(is_connected(w));
    const auto [partner, pr] = canonical_dual(w);
    CHECK_THROWS_AS(ladder(w, partner, pr), ConstructionError);
    opt.depth = 0;
    CHECK_THROWS_AS(ladder(s.A, s.B, s.pairing, opt), ConstructionError);
  }
}
