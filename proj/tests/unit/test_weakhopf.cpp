#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "groupoidal/weakhopf.hpp"

using namespace groupoidal;

namespace {

using Perm = std::array<int, 3>;

std::vector<Perm> s3() {
  std::vector<Perm> g;
  Perm p{0, 1, 2};
  do g.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return g;
}

int index_of(const std::vector<Perm>& g, const Perm& p) {
  return static_cast<int>(std::find(g.begin(), g.end(), p) - g.begin());
}

// Functions on S3: commutative, Delta(d_g) = sum_{hk=g} d_h (x) d_k, so not
// cocommutative.
WeakHopfData functions_on_s3() {
  const auto g = s3();
  const int n = 6;
  WeakHopfData w;
  w.algebra = MultiMatrixAlgebra::uniform(std::vector<int>(n, 1));
  w.delta = CMat::Zero(n * n, n);
  w.eps = CVec::Zero(n);
  w.antipode = CMat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    Perm inv{};
    for (int i = 0; i < 3; ++i) inv[g[a][i]] = i;
    w.antipode(index_of(g, inv), a) = 1.0;
    for (int b = 0; b < n; ++b) {
      Perm ab{};
      for (int i = 0; i < 3; ++i) ab[i] = g[a][g[b][i]];
      w.delta(a * n + b, index_of(g, ab)) = 1.0;
    }
  }
  w.eps(0) = 1.0;  // identity permutation sorts first
  return w;
}

}  // namespace

TEST_SUITE("weakhopf") {
  TEST_CASE("group algebra of Z/2 is a Hopf algebra") {
    const auto w = group_algebra_z2();
    const auto rep = verify_axioms(w);
    CHECK(rep.passed());
    CHECK(rep.max_residual() < 1e-14);
    CHECK(rep.checks.size() >= 15);
    const auto cm = counit_maps(w);
    // eps_t(x) = eps(x) 1 in the Hopf case.
    CHECK((cm.target - CVec::Ones(2) * w.eps.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    const auto cs = counital_subalgebras(w);
    CHECK(cs.target.sub->dim() == 1);
    CHECK(cs.source.sub->dim() == 1);
    CHECK(is_connected(w));
    CHECK(is_regular(w));
    const auto hp = haar_projection(w);
    CHECK(hp.solution_dim == 1);
    // (1+g)/2 is the first minimal projection.
    CHECK(distance(hp.p, Element::unit(w.algebra, 0)) < 1e-12);
    CHECK(haar_projection_residual(w, hp.p) < 1e-12);
  }

  TEST_CASE("deliberately broken antipode and counit are reported") {
    auto w = group_algebra_z2();
    w.antipode = CMat::Zero(2, 2);
    w.antipode(0, 1) = w.antipode(1, 0) = 1.0;
    auto rep = verify_axioms(w);
    CHECK_FALSE(rep.passed());
    CHECK_FALSE(rep.find("antipode_target")->passed);
    CHECK(rep.find("coassociativity")->passed);
    auto w2 = group_algebra_z2();
    w2.eps(1) = 0.5;
    CHECK_FALSE(verify_axioms(w2).find("counit_left")->passed);
    auto w3 = group_algebra_z2();
    w3.delta(0, 1) = 0.3;
    CHECK_FALSE(verify_axioms(w3).passed());
    w3.delta.resize(3, 2);
    CHECK_FALSE(verify_axioms(w3).passed());
  }

  TEST_CASE("functions on S3") {
    const auto w = functions_on_s3();
    const auto rep = verify_axioms(w);
    CHECK(rep.passed());
    CHECK(is_connected(w));
    const auto hp = haar_projection(w);
    CHECK(distance(hp.p, Element::unit(w.algebra, 0)) < 1e-12);

    // The canonical dual is the group algebra: blocks 1,1,2.
    auto [wd, pr] = canonical_dual(w);
    auto dims = wd.algebra->block_dims();
    std::sort(dims.begin(), dims.end());
    CHECK(dims == std::vector<int>{1, 1, 2});
    DualReport dr;
    dual(w, pr, &dr);
    CHECK(dr.product_residual < 1e-12);
    CHECK(dr.unit_residual < 1e-12);
    CHECK(dr.star_residual < 1e-12);
    CHECK(verify_axioms(wd).passed());
    CHECK(is_connected(wd));
    CHECK(is_regular(wd));

    // Haar measure of Fun(S3) from the Haar projection of the group algebra.
    const auto pd = haar_projection(wd).p;
    const CVec phi = haar_measure(pr, pd, true);
    CHECK(haar_measure_residual(w, phi) < 1e-12);
    for (int k = 0; k < 6; ++k) CHECK(std::abs(phi(k) - 1.0 / 6.0) < 1e-12);
    // The group algebra's Haar measure is the coefficient of the identity.
    const CVec phid = haar_measure(pr, hp.p, false);
    CHECK(haar_measure_residual(wd, phid) < 1e-12);

    // Double dual against the original.
    auto [wdd, pr2] = canonical_dual(wd);
    const CMat phi_map = pr2.gram.partialPivLu().solve(CMat(pr.gram.transpose()));
    CHECK(intertwiner_residual(w, wdd, phi_map) < 1e-10);

    // Flipping the coproduct of a non-cocommutative structure breaks the
    // identity map, although the flipped one is a valid structure.
    const auto wf = flipped_coproduct(w);
    CHECK(verify_axioms(wf).passed());
    std::vector<std::pair<Element, Element>> gens;
    for (int k = 0; k < 6; ++k)
      gens.push_back({Element::unit(w.algebra, k), Element::unit(wf.algebra, k)});
    CHECK(iso_check(w, w, gens).ok);
    const auto bad = iso_check(w, wf, gens);
    CHECK_FALSE(bad.ok);
    CHECK(!bad.failure.empty());
  }

  TEST_CASE("iso_check failure modes") {
    const auto w = functions_on_s3();
    // One generator cannot generate a six-dimensional algebra.
    std::vector<std::pair<Element, Element>> one_gen{
        {Element::unit(w.algebra, 1), Element::unit(w.algebra, 1)}};
    auto r = iso_check(w, w, one_gen);
    CHECK_FALSE(r.ok);
    CHECK(r.failure.find("generate") != std::string::npos);
    // d_0 -> d_0 + d_1 collides with d_1 -> d_1 under products.
    std::vector<std::pair<Element, Element>> bad;
    for (int k = 0; k < 6; ++k) bad.push_back({Element::unit(w.algebra, k), Element::unit(w.algebra, k)});
    bad[0].second += Element::unit(w.algebra, 1);
    r = iso_check(w, w, bad);
    CHECK_FALSE(r.ok);
    CHECK(r.failure.find("consistently") != std::string::npos);
  }

  TEST_CASE("direct sum is not connected") {
    const auto w = direct_sum(group_algebra_z2(), group_algebra_z2());
    CHECK(verify_axioms(w).passed());
    CHECK_FALSE(is_connected(w));
    CHECK(center_intersections(w) == std::pair{2, 2});
    CHECK(counital_subalgebras(w).target.sub->dim() == 2);
    CHECK(is_regular(w));
    // The Haar projection is still unique: the sum of both integrals.
    const auto hp = haar_projection(w);
    CHECK(haar_projection_residual(w, hp.p) < 1e-12);
  }

  TEST_CASE("canonical dual of Z/2 and modular data") {
    const auto w = group_algebra_z2();
    auto [wd, pr] = canonical_dual(w);
    CHECK(wd.dim() == 2);
    CHECK(verify_axioms(wd).passed());
    const auto pd = haar_projection(wd).p;
    HaarData haar{haar_projection(w).p, haar_measure(pr, pd, true)};
    CHECK(haar_measure_residual(w, haar.phi) < 1e-12);
    const auto g = gs_gt(w, haar);
    // Tracial Hopf case: g_s = g_t are scalars, |G|^{-1/2} for phi(1) = 1.
    const auto one = Element::identity(w.algebra);
    CHECK(distance(g.g_s, std::sqrt(0.5) * one) < 1e-12);
    CHECK(distance(g.g_t, g.g_s) < 1e-12);
    CHECK(std::abs(haar.d - 1.0) < 1e-12);
    CHECK(std::abs(haar.gamma - std::sqrt(2.0)) < 1e-12);
    CHECK(g.antipode_residual < 1e-12);
    CHECK(g.haar_residual < 1e-12);
    CHECK(g.gamma_residual < 1e-12);
    const CVec tr = trace_functional(w, haar, g);
    CHECK(std::abs(tr(0) - 0.5) < 1e-12);
    CHECK(std::abs(tr(1) - 0.5) < 1e-12);
  }

  TEST_CASE("whd-v1 round trip and schema errors") {
    const auto w = functions_on_s3();
    const Json j = to_json(w);
    const auto back = weak_hopf_from_json(Json::parse(j.dump()));
    CHECK((back.delta - w.delta).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.antipode - w.antipode).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.eps - w.eps).cwiseAbs().maxCoeff() == 0.0);
    Json broken = j;
    broken["schema"] = "whd-v0";
    CHECK_THROWS_AS(weak_hopf_from_json(broken), SchemaError);
    broken = j;
    broken.erase("antipode");
    CHECK_THROWS_WITH_AS(weak_hopf_from_json(broken), doctest::Contains("antipode"),
                         SchemaError);
    broken = j;
    broken["counit"][2] = "x";
    CHECK_THROWS_WITH_AS(weak_hopf_from_json(broken), doctest::Contains("$.counit[2]"),
                         SchemaError);
  }

  TEST_CASE("pairing helpers") {
    const auto a = MultiMatrixAlgebra::make({1, 1}, {0.5, 0.5});
    Pairing p{a, a, CMat::Identity(2, 2)};
    CHECK_FALSE(p.degenerate());
    CHECK(p(Element::zero(a), Element::identity(a)) == cplx(0.0));
    Pairing q{a, a, CMat::Zero(2, 2)};
    q.gram(0, 0) = 1.0;
    CHECK(q.degenerate());
    CHECK_THROWS_AS(haar_measure(q, Element::identity(a), true), ConstructionError);
    CHECK_THROWS_AS(dual(group_algebra_z2(), q), ConstructionError);
  }
}
