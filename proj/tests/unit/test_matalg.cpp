#include <doctest.h>

#include <cmath>
#include <random>

#include "groupoidal/matalg.hpp"
#include "groupoidal/serialize.hpp"

using namespace groupoidal;

namespace {

// z^2 is the positive root of z^4 + z^2 - 1 = 0, so z^4 = delta.
const double kZ = std::sqrt((std::sqrt(5.0) - 1.0) / 2.0);

AlgPtr level4() {
  const double d = std::pow(kZ, 4);
  return MultiMatrixAlgebra::make({2, 3}, {d * d, d * d / (kZ * kZ)});
}

Element from_two_blocks(const AlgPtr& a, CMat c, CMat d) {
  return Element::from_blocks(a, {std::move(c), std::move(d)});
}

// The three Jones projections of the level-4 A_4 path algebra, written out
// entry by entry.
std::vector<Element> hand_projections(const AlgPtr& a) {
  const double z = kZ, z2 = z * z, z3 = z2 * z, z4 = z2 * z2;
  CMat c1(2, 2), d1 = CMat::Zero(3, 3);
  c1 << 1, 0, 0, 0;
  d1(0, 0) = 1;
  CMat c2(2, 2), d2 = CMat::Zero(3, 3);
  c2 << z4, z3, z3, z2;
  d2.topLeftCorner(2, 2) = c2;
  CMat c3(2, 2), d3 = CMat::Zero(3, 3);
  c3 << 1, 0, 0, 0;
  d3(1, 1) = z2;
  d3(1, 2) = d3(2, 1) = z3;
  d3(2, 2) = z4;
  return {from_two_blocks(a, c1, d1), from_two_blocks(a, c2, d2),
          from_two_blocks(a, c3, d3)};
}

Element random_element(const AlgPtr& a, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CVec v(a->dim());
  for (int i = 0; i < a->dim(); ++i) v(i) = cplx(nd(rng), nd(rng));
  return Element::from_vector(a, v);
}

}  // namespace

TEST_SUITE("matalg") {
  TEST_CASE("basis counts and order") {
    auto a = MultiMatrixAlgebra::make({2, 3}, {0.2, 0.2});
    auto basis = mma_basis(a);
    CHECK(basis.size() == 13);
    CHECK(basis[0].block(0)(0, 0) == cplx(1));
    CHECK(basis[1].block(0)(0, 1) == cplx(1));
    CHECK(basis[5].block(1)(0, 1) == cplx(1));
    auto one = MultiMatrixAlgebra::make({1}, {1.0});
    auto b1 = mma_basis(one);
    REQUIRE(b1.size() == 1);
    CHECK(distance(b1[0], Element::identity(one)) == 0.0);
  }

  TEST_CASE("constructor rejects bad data") {
    CHECK_THROWS_AS(MultiMatrixAlgebra({2}, {0.0}), AlgebraError);
    CHECK_THROWS_AS(MultiMatrixAlgebra({0}, {1.0}), AlgebraError);
    CHECK_THROWS_AS(MultiMatrixAlgebra({2, 1}, {1.0}), AlgebraError);
    auto a = MultiMatrixAlgebra::uniform({2});
    auto b = MultiMatrixAlgebra::uniform({3});
    CHECK_THROWS_AS(Element::identity(a) + Element::identity(b), AlgebraError);
  }

  TEST_CASE("arithmetic identities") {
    auto a = level4();
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
      Element x = random_element(a, rng), y = random_element(a, rng);
      CHECK(distance(Element::identity(a) * x, x) == 0.0);
      CHECK(distance((x * y).adjoint(), y.adjoint() * x.adjoint()) < 1e-12);
      CHECK(distance(arith(x, y, ArithOp::Add), x + y) == 0.0);
      CHECK(distance(arith(x, y, ArithOp::Scale, 2.0), x + x) < 1e-15);
    }
    auto e = hand_projections(a);
    const double delta = std::pow(kZ, 4);
    CHECK(distance(e[1] * e[0] * e[1], delta * e[1]) < 1e-12);
    CHECK(distance(e[0] * e[1] * e[0], delta * e[0]) < 1e-12);
    CHECK(distance(e[2] * e[1] * e[2], delta * e[2]) < 1e-12);
    CHECK(distance(e[0] * e[2], e[2] * e[0]) < 1e-12);
  }

  TEST_CASE("trace properties") {
    auto a = level4();
    CHECK(a->total_trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(Element::identity(a).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    const double delta = std::pow(kZ, 4);
    CHECK(Element::unit(a, 0).trace().real() == doctest::Approx(delta * delta));
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
      Element x = random_element(a, rng), y = random_element(a, rng);
      CHECK(std::abs((x * y).trace() - (y * x).trace()) < 1e-12);
      CHECK((x.adjoint() * x).trace().real() >= -1e-12);
      CHECK(std::abs(inner(x, y) - (x.adjoint() * y).trace()) < 1e-12);
    }
  }

  TEST_CASE("tensor algebra") {
    auto a = level4();
    auto b = MultiMatrixAlgebra::make({1, 2}, {0.5, 0.25});
    auto ab = tensor_algebra(a, b);
    CHECK(ab->dim() == a->dim() * b->dim());
    CHECK(ab->total_trace() == doctest::Approx(1.0));
    auto one = tensor_elem(Element::identity(a), Element::identity(b));
    CHECK(distance(to_tensor_algebra(one, ab), Element::identity(ab)) < 1e-15);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
      Element x = random_element(a, rng), y = random_element(b, rng);
      Element u = random_element(a, rng), v = random_element(b, rng);
      auto xy = to_tensor_algebra(tensor_elem(x, y), ab);
      CHECK(std::abs(xy.trace() - x.trace() * y.trace()) < 1e-12);
      // (x⊗y)(u⊗v) = xu⊗yv
      auto prod = tensor_elem(x, y) * tensor_elem(u, v);
      CHECK((prod - tensor_elem(x * u, y * v)).max_abs() < 1e-12);
      CHECK((adjoint(tensor_elem(x, y)) - tensor_elem(x.adjoint(), y.adjoint())).max_abs() < 1e-12);
      auto back = from_tensor_algebra(xy, a, b);
      CHECK((back - tensor_elem(x, y)).max_abs() < 1e-15);
    }
  }

  TEST_CASE("conditional expectation") {
    auto a = level4();
    std::mt19937_64 rng(4);
    // Onto the scalars.
    auto scal = MultiMatrixAlgebra::make({1}, {1.0});
    CMat inj = Element::identity(a).to_vector();
    SubAlgebraEmbedding toC(scal, a, inj);
    Element x = random_element(a, rng);
    CHECK(distance(conditional_expectation(toC, x), x.trace() * Element::identity(a)) < 1e-12);
    // Onto span{1, e3}, built as a closure.
    auto e = hand_projections(a);
    auto emb = span_closure({e[2]}, a);
    CHECK(emb.sub->dim() == 2);
    CHECK(emb.sub->block_dims() == std::vector<int>{1, 1});
    CHECK(emb.homomorphism_residual() < 1e-12);
    CHECK(emb.distance_to_image(e[2]) < 1e-12);
    for (int t = 0; t < 20; ++t) {
      Element y = random_element(a, rng);
      Element ex = conditional_expectation(emb, y);
      CHECK(emb.distance_to_image(ex) < 1e-12);
      CHECK(distance(conditional_expectation(emb, ex), ex) < 1e-12);
      for (int k = 0; k < emb.sub->dim(); ++k) {
        Element s = emb.image_of_unit(k);
        CHECK(std::abs((ex * s).trace() - (y * s).trace()) < 1e-12);
      }
      Element p = e[2], q = Element::identity(a) - e[2];
      CHECK(distance(conditional_expectation(emb, p * y * q), p * ex * q) < 1e-12);
    }
  }

  TEST_CASE("span closure of the Jones projections") {
    auto a = level4();
    auto e = hand_projections(a);
    auto emb = span_closure(e, a);
    CHECK(emb.sub->block_dims() == std::vector<int>{2, 3});
    CHECK(emb.homomorphism_residual() < 1e-10);
    const double delta = std::pow(kZ, 4);
    CHECK(emb.sub->weight(0) == doctest::Approx(delta * delta).epsilon(1e-10));
    auto one = span_closure({Element::identity(a)}, a);
    CHECK(one.sub->dim() == 1);
    // Dimension equals the sum of squared block sizes.
    auto pair = span_closure({e[0], e[1]}, a);
    int total = 0;
    for (int d : pair.sub->block_dims()) total += d * d;
    CHECK(total == pair.sub->dim());
    CHECK(pair.sub->dim() == 5);
  }

  TEST_CASE("commutants") {
    auto a = level4();
    auto center = commutant(a, mma_basis(a));
    CHECK(center.size() == 2);
    auto full = commutant(a, {Element::identity(a)});
    CHECK(full.size() == 13);
    auto e = hand_projections(a);
    auto emb = span_closure({e[0]}, a);
    auto c1 = commutant(emb);
    auto c2 = commutant(a, c1);
    CHECK(c2.size() >= static_cast<std::size_t>(emb.sub->dim()));
    // Everything in the image of emb lies in the double commutant.
    auto dc = decompose_subalgebra(c2, a);
    for (int k = 0; k < emb.sub->dim(); ++k)
      CHECK(dc.distance_to_image(emb.image_of_unit(k)) < 1e-10);
    auto big = span_closure(e, a);
    auto rc = relative_commutant(big, {e[0]});
    CHECK(rc.size() == 7);  // commutant of e1 in M2+M3: 1+1 and 1+4
  }

  TEST_CASE("sqrt and inverse") {
    auto a = level4();
    auto e = hand_projections(a);
    const double z = kZ;
    Element one = Element::identity(a);
    Element H = std::pow(z, -4) * e[2] + std::pow(z, -2) * (one - e[2]);
    Element h = positive_sqrt(H);
    CHECK(distance(h, std::pow(z, -2) * e[2] + std::pow(z, -1) * (one - e[2])) < 1e-12);
    CHECK(distance(positive_sqrt(one), one) < 1e-15);
    CHECK(distance(invert(h) * h, one) < 1e-12);
    CHECK(distance(h * H, H * h) < 1e-12);
    CHECK(is_self_adjoint(h, 1e-14));
    CHECK_THROWS_AS(positive_sqrt(-1.0 * one), AlgebraError);
    CHECK_THROWS_AS(invert(e[0]), AlgebraError);
  }

  TEST_CASE("json round trip is lossless") {
    auto a = level4();
    std::mt19937_64 rng(5);
    Element x = random_element(a, rng);
    Json j = to_json(*a);
    auto a2 = algebra_from_json(Json::parse(j.dump()));
    CHECK(*a2 == *a);
    CHECK(a2->trace_weights() == a->trace_weights());
    Element x2 = element_from_json(Json::parse(to_json(x).dump()), a2);
    CHECK(x2.to_vector() == x.to_vector());
    LinearMap m(CMat::Random(4, 3));
    CHECK(linear_map_from_json(Json::parse(to_json(m).dump())).matrix == m.matrix);
    auto b = MultiMatrixAlgebra::make({1}, {1.0});
    TensorElement t(a, b, CMat::Random(13, 1));
    CHECK(tensor_from_json(Json::parse(to_json(t).dump()), a, b).coeff == t.coeff);
    CHECK_THROWS_AS(element_from_json(Json::parse("{\"blocks\": [[]]}"), a), SchemaError);
    CHECK_THROWS_AS(algebra_from_json(Json::parse("{\"block_dims\": [1]}")), SchemaError);
  }
}
