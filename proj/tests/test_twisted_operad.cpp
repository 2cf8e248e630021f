#include <array>

#include "doctest.h"
#include "kirbycat/errors.hpp"
#include "kirbycat/twisted_operad.hpp"

using namespace kirbycat;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

TwistedComponent box1(Rational a, Rational b) {
  return {RectAffine{{AxisMap{a, b}}}, {}};
}

// Unary k = 2 morphism scaling both axes by a, shifting the first by b.
OperadMorphism unary2(Rational a, Rational b, long twist) {
  TwistedEmbedding e{2, {{1, {RectAffine{{AxisMap{a, b}, AxisMap{a, 0}}},
                              {Integer(twist)}}}}};
  return {2, 1, 1, {1}, {e}};
}

}  // namespace

TEST_CASE("validate") {
  // boxes written as images (lo, hi) of (-1, 1)
  TwistedEmbedding ok{1, {{1, box1(q(1, 3), q(-2, 3))}, {2, box1(q(1, 3), q(1, 3))}}};
  CHECK(validate(ok).empty());

  TwistedEmbedding overlap{1, {{1, box1(q(1, 2), 0)}, {2, box1(q(3, 8), q(3, 8))}}};
  const auto v = validate(overlap);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("overlap") != std::string::npos);

  TwistedEmbedding flat{1, {{1, box1(0, 0)}}};
  CHECK_FALSE(validate(flat).empty());

  TwistedEmbedding outside{1, {{1, box1(q(1, 2), q(3, 4))}}};
  CHECK_FALSE(validate(outside).empty());

  TwistedEmbedding touching{1, {{1, box1(q(1, 2), q(-1, 2))}, {2, box1(q(1, 2), q(1, 2))}}};
  CHECK(validate(touching).empty());

  TwistedEmbedding short_twist{2, {{1, {RectAffine::identity(2), {}}}}};
  CHECK_FALSE(validate(short_twist).empty());
}

TEST_CASE("compose") {
  const auto outer = unary2(q(1, 2), 0, 2);
  const auto inner = unary2(q(1, 2), q(1, 4), 3);
  const auto c = compose(outer, inner);
  const auto& comp = c.fibers.at(0).components.at(1);
  CHECK(comp.affine.axes[0] == AxisMap{q(1, 4), q(1, 8)});
  CHECK(comp.affine.axes[1] == AxisMap{q(1, 4), 0});
  CHECK(comp.twist == std::vector<Integer>{5});
  CHECK(validate(c).empty());

  const auto id = identity_morphism(1, 2);
  CHECK(compose(outer, id) == outer);
  CHECK(compose(id, outer) == outer);

  CHECK_THROWS_AS(compose(identity_morphism(2, 2), outer), CompositionError);
  CHECK_THROWS_AS(compose(identity_morphism(1, 1), outer), CompositionError);
}

TEST_CASE("compose follows alpha through the basepoint") {
  // inner: <2> -> <1> packs both cubes side by side; outer: <1> -> <1>.
  TwistedEmbedding pack{1, {{1, box1(q(1, 2), q(-1, 2))}, {2, box1(q(1, 2), q(1, 2))}}};
  const OperadMorphism inner{1, 2, 1, {1, 1}, {pack}};
  const OperadMorphism drop{1, 1, 0, {0}, {}};
  const auto c = compose(drop, inner);
  CHECK(c.m == 2);
  CHECK(c.n == 0);
  CHECK(c.alpha == std::vector<std::size_t>{0, 0});
  CHECK(validate(c).empty());

  const OperadMorphism partial{1, 2, 1, {1, 0}, {TwistedEmbedding{1, {{1, box1(q(1, 2), 0)}}}}};
  CHECK(validate(partial).empty());
  const auto cp = compose(identity_morphism(1, 1), partial);
  CHECK(cp == partial);
}

TEST_CASE("identity_morphism") {
  const auto i1 = identity_morphism(1, 3);
  REQUIRE(i1.fibers.size() == 1);
  const auto& c = i1.fibers[0].components.at(1);
  CHECK(c.affine == RectAffine::identity(3));
  CHECK(c.twist == std::vector<Integer>{0, 0});
  CHECK(validate(i1).empty());

  const auto i0 = identity_morphism(0, 2);
  CHECK(i0.m == 0);
  CHECK(i0.n == 0);
  CHECK(i0.fibers.empty());
  CHECK(validate(i0).empty());
  CHECK_THROWS_AS(identity_morphism(1, 0), InvalidArgument);
}

TEST_CASE("check_operad_axioms") {
  for (std::size_t k : {1u, 2u, 3u}) {
    RandomMorphismSource src(k, 7 + k);
    const auto rep = check_operad_axioms(src, 100);
    CHECK(rep.trials == 100);
    CHECK(rep.passed());
    CHECK(rep.witnesses.empty());
  }
  RandomMorphismSource src(2, 1);
  CHECK_THROWS_AS(check_operad_axioms(src, 0), InvalidArgument);
}

TEST_CASE("check_operad_axioms: injected faults") {
  const auto twist_fault = [](const OperadMorphism& o, const OperadMorphism& i) {
    return compose_faulty(o, i, InjectedFault::MultiplyTwists);
  };
  const auto order_fault = [](const OperadMorphism& o, const OperadMorphism& i) {
    return compose_faulty(o, i, InjectedFault::ReversedAffineOrder);
  };
  RandomMorphismSource s2(2, 99);
  const auto r2 = check_operad_axioms(s2, 100, twist_fault);
  CHECK_FALSE(r2.passed());
  CHECK_FALSE(r2.witnesses.empty());

  RandomMorphismSource s1(1, 99);
  CHECK(check_operad_axioms(s1, 100, twist_fault).passed());
  RandomMorphismSource s1b(1, 99);
  const auto r1 = check_operad_axioms(s1b, 100, order_fault);
  CHECK_FALSE(r1.passed());
  CHECK(r1.evaluation_failures > 0);
}

TEST_CASE("framing_of_loop") {
  const std::array a{unary2(q(1, 2), 0, 1), unary2(q(1, 2), 0, -1)};
  CHECK(framing_of_loop(a) == 0);
  const std::array b{unary2(q(1, 2), 0, 2), unary2(q(1, 3), 0, 3)};
  CHECK(framing_of_loop(b) == 5);
  CHECK(framing_of_loop(std::span<const OperadMorphism>{}) == 0);

  const std::array bad{identity_morphism(2, 2)};
  CHECK_THROWS_AS(framing_of_loop(bad), InvalidArgument);
  const std::array flat{identity_morphism(1, 1)};
  CHECK_THROWS_AS(framing_of_loop(flat), InvalidArgument);
}

TEST_CASE("property: framing matches kinks and is independent of bracketing") {
  RandomMorphismSource src(2, 5);
  for (int t = 0; t < 200; ++t) {
    std::vector<OperadMorphism> ops;
    const auto len = 1 + t % 5;
    while (ops.size() < static_cast<std::size_t>(len)) {
      auto f = src.random_morphism(1, 1);
      if (f.alpha[0] == 1) ops.push_back(f);
    }
    const auto total = framing_of_loop(ops);

    const auto braid = loop_braid(ops);
    const auto rec = linking_data(close(braid));
    CHECK(Integer(static_cast<long>(rec.at(0, 0))) == total);

    auto left = ops[0];
    for (std::size_t i = 1; i < ops.size(); ++i) left = compose(left, ops[i]);
    auto right = ops.back();
    for (std::size_t i = ops.size() - 1; i-- > 0;) right = compose(ops[i], right);
    CHECK(left == right);
    CHECK(left.fibers[0].components.at(1).twist[0] == total);
    CHECK(validate(left).empty());
  }
}

TEST_CASE("property: composites of valid morphisms are valid") {
  for (std::size_t k : {1u, 2u, 3u}) {
    RandomMorphismSource src(k, 100 + k, 4);
    for (int t = 0; t < 200; ++t) {
      const auto a = src.random_arity();
      const auto b = src.random_arity();
      const auto c = src.random_arity();
      const auto g = src.random_morphism(a, b);
      const auto f = src.random_morphism(b, c);
      REQUIRE(validate(g).empty());
      REQUIRE(validate(f).empty());
      CHECK(validate(compose(f, g)).empty());
    }
  }
}
