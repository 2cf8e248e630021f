#include "doctest.h"
#include "kirbycat/errors.hpp"
#include "kirbycat/motivic.hpp"

#include <random>

using namespace kirbycat;

TEST_CASE("make_variable") {
  auto v = make_variable("Ob(R)");
  CHECK(v.domain() == "Ob(R)");
  CHECK_FALSE(v.is_bound());

  auto w = make_variable("[0,3]");
  CHECK(w.domain() == "[0,3]");
  CHECK_FALSE(w.is_bound());

  CHECK_THROWS_AS(make_variable(""), InvalidArgument);
}

TEST_CASE("specialize") {
  const auto shadow = make_variable(kShadowDomain);
  const auto a1 = specialize(shadow, "A1");
  CHECK(a1.is_bound());
  CHECK(*a1.element() == "A1");
  CHECK_FALSE(shadow.is_bound());  // original untouched

  CHECK_THROWS_AS(specialize(a1, "A2"), DoubleSpecialization);

  const auto dual = specialize(shadow, "A1*");
  CHECK(*dual.element() == "A1*");
  CHECK(dual.domain() == shadow.domain());

  CHECK_THROWS_AS(specialize(shadow, ""), InvalidArgument);
}

TEST_CASE("property: a second specialization always fails") {
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::string dom = "D" + std::to_string(rng() % 50);
    const std::string e1 = "x" + std::to_string(rng() % 50);
    const std::string e2 = "y" + std::to_string(rng() % 50);
    const auto v = specialize(make_variable(dom), e1);
    CHECK(v.is_bound());
    CHECK(*v.element() == e1);
    CHECK_THROWS_AS(specialize(v, e2), DoubleSpecialization);
    CHECK_THROWS_AS(specialize(v, e1), DoubleSpecialization);
  }
}

TEST_CASE("motivic frames") {
  const auto cw = frames::cw_complex(3);
  CHECK(cw.depth() == 4);
  CHECK(cw.transitions().size() == 3);
  CHECK(cw.level(0) == "0-skeleton");

  const auto in = frames::integration();
  CHECK(in.transitions().size() + 1 == in.levels().size());
  const auto sp = frames::space();
  CHECK(sp.transitions().size() + 1 == sp.levels().size());
  const auto var = frames::variable_over("[0,3]");
  CHECK(var.level(0) == "MotFr0[[0,3]]");

  CHECK_THROWS_AS(MotivicFrame("x", {}, {}), InvalidArgument);
  CHECK_THROWS_AS(MotivicFrame("x", {"a", "b"}, {}), InvalidArgument);
  CHECK_THROWS_AS(MotivicFrame("x", {"a"}, {"z"}), InvalidArgument);
  CHECK_NOTHROW(MotivicFrame("x", {"a"}, {}));
}

TEST_CASE("property: mismatched level and transition counts are rejected") {
  for (std::size_t levels = 0; levels < 6; ++levels) {
    for (std::size_t trans = 0; trans < 7; ++trans) {
      std::vector<std::string> l(levels, "x");
      std::vector<std::string> z(trans, "z");
      if (levels >= 1 && trans + 1 == levels) {
        CHECK_NOTHROW(MotivicFrame("c", l, z));
      } else {
        CHECK_THROWS_AS(MotivicFrame("c", l, z), InvalidArgument);
      }
    }
  }
}
