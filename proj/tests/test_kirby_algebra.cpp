#include "doctest.h"
#include "kirbycat/errors.hpp"
#include "kirbycat/kirby_algebra.hpp"
#include "oracles/smith_oracle.hpp"
#include "oracles/sturm_oracle.hpp"
#include "support/generators.hpp"

#include <algorithm>
#include <numeric>

using namespace kirbycat;
using G = Generator;

namespace {

LinkingMatrix slide_oracle(const LinkingMatrix& a, std::size_t i, std::size_t j,
                           int sign) {
  const auto n = a.size();
  std::vector<std::vector<Integer>> e(n, std::vector<Integer>(n, 0)), t1 = e,
                                                                      t2 = e;
  for (std::size_t k = 0; k < n; ++k) e[k][k] = 1;
  e[i][j] = sign;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t k = 0; k < n; ++k) t1[r][c] += e[r][k] * a(k, c);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t k = 0; k < n; ++k) t2[r][c] += t1[r][k] * e[c][k];
  std::vector<Integer> flat;
  for (auto& row : t2) flat.insert(flat.end(), row.begin(), row.end());
  return LinkingMatrix(n, flat);
}

SmithForm from_oracle(const oracle::Snf& s) {
  SmithForm f;
  f.invariant_factors = s.factors;
  f.free_rank = s.zero_count;
  return f;
}

}  // namespace

TEST_CASE("LinkingMatrix validation") {
  CHECK_THROWS_AS(LinkingMatrix(2, {0, 1, 2, 0}), InvalidArgument);
  CHECK_THROWS_AS(LinkingMatrix(2, {0, 1, 1}), InvalidArgument);
  CHECK(LinkingMatrix{{0, 1}, {1, 0}}.to_string() == "[0 1; 1 0]");
  CHECK(LinkingMatrix(0).to_string() == "[]");
}

TEST_CASE("from_closed_braid") {
  CHECK(from_closed_braid(close(FramedBraid::identity(3))) == LinkingMatrix(3));
  const FramedBraid hopf(2, {G::crossing(1, 1), G::crossing(1, 1)});
  CHECK(from_closed_braid(close(hopf)) == LinkingMatrix{{0, 1}, {1, 0}});
  const FramedBraid trefoil(2, {G::crossing(1, 1), G::crossing(1, 1),
                                G::crossing(1, 1)});
  CHECK(from_closed_braid(close(trefoil)) == LinkingMatrix{{3}});

  CrossingRecord odd{{{0}, {1}}, {0, 1, 1, 0}};
  CHECK_THROWS_AS(from_crossing_record(odd), MalformedDiagram);
}

TEST_CASE("blow_up and blow_down") {
  CHECK(blow_up(LinkingMatrix{{0}}, 1) == LinkingMatrix{{0, 0}, {0, 1}});
  CHECK(blow_up(LinkingMatrix(0), -1) == LinkingMatrix{{-1}});
  CHECK(blow_up(LinkingMatrix{{0, 1}, {1, 0}}, 1) ==
        LinkingMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});

  CHECK(blow_down(LinkingMatrix{{0, 0}, {0, 1}}, 1) == LinkingMatrix{{0}});
  CHECK_THROWS_AS(blow_down(LinkingMatrix{{2, 1}, {1, 0}}, 0), NotBlowdownable);
  CHECK(blow_down(LinkingMatrix{{-1}}, 0) == LinkingMatrix(0));
  CHECK_THROWS_AS(blow_down(LinkingMatrix{{2}}, 0), NotBlowdownable);
  CHECK_THROWS_AS(blow_down(LinkingMatrix{{1}}, 3), InvalidArgument);
}

TEST_CASE("handle_slide") {
  const LinkingMatrix hopf{{0, 1}, {1, 0}};
  CHECK(handle_slide(hopf, 0, 1, 1) == LinkingMatrix{{2, 1}, {1, 0}});
  CHECK(handle_slide(hopf, 0, 1, 1) == slide_oracle(hopf, 0, 1, 1));
  CHECK(handle_slide(hopf, 0, 1, -1) == LinkingMatrix{{-2, 1}, {1, 0}});
  CHECK(handle_slide(hopf, 0, 1, -1) == slide_oracle(hopf, 0, 1, -1));
  CHECK(handle_slide(LinkingMatrix(2), 1, 0, 1) == LinkingMatrix(2));
  CHECK_THROWS_AS(handle_slide(hopf, 1, 1, 1), InvalidArgument);
}

TEST_CASE("signature") {
  CHECK(signature(LinkingMatrix{{3}}) == 1);
  CHECK(signature(LinkingMatrix{{0, 1}, {1, 0}}) == 0);
  CHECK(oracle::signature(testgen::rows_of(LinkingMatrix{{0, 1}, {1, 0}})) == 0);
  CHECK(signature(LinkingMatrix(4)) == 0);
  CHECK(signature(LinkingMatrix{{-1, 0}, {0, -2}}) == -2);
}

TEST_CASE("smith") {
  const auto zero = smith(LinkingMatrix(3));
  CHECK(zero.free_rank == 3);
  CHECK(zero.invariant_factors.empty());

  const auto three = smith(LinkingMatrix{{3}});
  CHECK(three.invariant_factors == std::vector<Integer>{3});
  CHECK(three.free_rank == 0);
  CHECK(from_oracle(oracle::smith(testgen::rows_of(LinkingMatrix{{3}}))) == three);

  const auto unimod = smith(LinkingMatrix{{2, 1}, {1, 0}});
  CHECK(unimod.invariant_factors == std::vector<Integer>{1, 1});
  CHECK(unimod.free_rank == 0);
  CHECK(determinant(LinkingMatrix{{2, 1}, {1, 0}}) == -1);

  // a chain that needs the divisibility fix: diag(2, 3) -> (1, 6)
  CHECK(smith(LinkingMatrix{{2, 0}, {0, 3}}).invariant_factors ==
        std::vector<Integer>{1, 6});
  // non-square input
  const auto rect = smith_normal_form(2, 3, {2, 4, 6, 4, 8, 12});
  CHECK(rect.invariant_factors == std::vector<Integer>{2});
}

TEST_CASE("boundary_record") {
  const auto z = boundary_record(LinkingMatrix(2));
  CHECK(z.h1_free_rank == 2);
  CHECK(z.h1_torsion.empty());
  const auto h = boundary_record(LinkingMatrix{{0, 1}, {1, 0}});
  CHECK(h.h1_free_rank == 0);
  CHECK(h.h1_torsion.empty());
  const auto t = boundary_record(LinkingMatrix{{3}});
  CHECK(t.h1_torsion == std::vector<Integer>{3});
  CHECK(t.sigma == 1);
  CHECK(t.euler == 2);
}

TEST_CASE("kirby_equivalent") {
  const LinkingMatrix zero{{0}};
  const auto r = kirby_equivalent(zero, zero, 3);
  REQUIRE(std::holds_alternative<Equivalent>(r));
  CHECK(std::get<Equivalent>(r).path.empty());

  const auto up = blow_up(LinkingMatrix(0), 1);
  const auto down = kirby_equivalent(up, LinkingMatrix(0), 3);
  REQUIRE(std::holds_alternative<Equivalent>(down));
  CHECK(std::get<Equivalent>(down).path ==
        std::vector<KirbyMove>{KirbyMove::blow_down(0)});
  CHECK(std::get<Equivalent>(down).path[0].to_string() == "blow_down 1");

  const auto dist = kirby_equivalent(zero, LinkingMatrix{{3}}, 3);
  REQUIRE(std::holds_alternative<Distinguished>(dist));
  CHECK(std::get<Distinguished>(dist).invariant == "h1");

  CHECK_THROWS_AS(kirby_equivalent(zero, zero, 0), InvalidArgument);

  // [2 1; 1 0] is a slide away from the Hopf matrix
  const LinkingMatrix a{{2, 1}, {1, 0}};
  const LinkingMatrix b{{0, 1}, {1, 0}};
  const auto v = kirby_equivalent(a, b, 3);
  REQUIRE(std::holds_alternative<Equivalent>(v));
  const auto& e = std::get<Equivalent>(v);
  LinkingMatrix x = a;
  for (const auto& m : e.path) x = apply(x, m);
  CHECK(x.permuted(e.relabel) == b);
}

TEST_CASE("canonical_form") {
  const LinkingMatrix a{{5, 1, 0}, {1, 0, 2}, {0, 2, -1}};
  const auto c = canonical_form(a);
  CHECK(c.matrix == a.permuted(c.order));
  std::vector<std::size_t> p{0, 1, 2};
  do {
    CHECK(canonical_form(a.permuted(p)).matrix == c.matrix);
  } while (std::next_permutation(p.begin(), p.end()));
}

TEST_CASE("property: Smith form against independent oracles") {
  testgen::Rng rng(21);
  for (int t = 0; t < 1000; ++t) {
    const auto n = static_cast<std::size_t>(testgen::uniform(rng, 0, 5));
    const auto a = testgen::random_matrix(rng, n, -5, 5);
    const auto rows = testgen::rows_of(a);
    const auto mine = smith(a);
    CHECK(mine == from_oracle(oracle::smith(rows)));
    CHECK(mine == from_oracle(oracle::smith_by_minors(rows)));
    for (std::size_t k = 1; k < mine.invariant_factors.size(); ++k) {
      CHECK(mine.invariant_factors[k] % mine.invariant_factors[k - 1] == 0);
    }
  }
}

TEST_CASE("property: signature against Sturm counts") {
  testgen::Rng rng(22);
  for (int t = 0; t < 1000; ++t) {
    const auto n = static_cast<std::size_t>(testgen::uniform(rng, 0, 5));
    auto a = testgen::random_matrix(rng, n, -5, 5);
    // force repeated and zero eigenvalues now and then
    if (t % 5 == 0 && n >= 2) a = blow_up(blow_up(LinkingMatrix(n - 2), 1), 1);
    CHECK(signature(a) == oracle::signature(testgen::rows_of(a)));
  }
}

TEST_CASE("property: determinant against cofactor expansion") {
  testgen::Rng rng(23);
  for (int t = 0; t < 300; ++t) {
    const auto n = static_cast<std::size_t>(testgen::uniform(rng, 0, 5));
    const auto a = testgen::random_matrix(rng, n, -5, 5);
    CHECK(determinant(a) == oracle::det_cofactor(testgen::rows_of(a)));
  }
}

TEST_CASE("property: Kirby moves preserve boundary homology") {
  testgen::Rng rng(24);
  for (int t = 0; t < 200; ++t) {
    auto a = testgen::random_matrix(
        rng, static_cast<std::size_t>(testgen::uniform(rng, 0, 6)), -4, 4);
    const auto start = boundary_record(a);
    for (int s = 0; s < 20; ++s) {
      const auto m = testgen::random_move(rng, a);
      const auto before = boundary_record(a);
      const auto next = apply(a, m);
      const auto after = boundary_record(next);
      CHECK(after.h1_free_rank == start.h1_free_rank);
      CHECK(after.h1_torsion == start.h1_torsion);
      CHECK(after.euler == after.b2 + 1);
      if (m.kind == KirbyMove::Kind::BlowUp) {
        CHECK(after.sigma == before.sigma + m.sign);
        CHECK(after.b2 == before.b2 + 1);
        CHECK(blow_down(next, next.size() - 1) == a);
      } else if (m.kind == KirbyMove::Kind::Slide) {
        CHECK(after.sigma == before.sigma);
        CHECK(after.b2 == before.b2);
        CHECK(abs(determinant(next)) == abs(determinant(a)));
        CHECK(next == slide_oracle(a, m.i, m.j, m.sign));
        CHECK(handle_slide(next, m.i, m.j, -m.sign) == a);
      }
      a = next;
    }
  }
}

TEST_CASE("property: equivalence search paths replay") {
  testgen::Rng rng(25);
  for (int t = 0; t < 40; ++t) {
    const auto a = testgen::random_matrix(
        rng, static_cast<std::size_t>(testgen::uniform(rng, 1, 3)), -2, 2);
    auto b = a;
    for (int s = 0; s < 2; ++s) b = apply(b, testgen::random_move(rng, b));
    std::vector<std::size_t> p(b.size());
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::shuffle(p.begin(), p.end(), rng);
    b = b.permuted(p);
    const auto v = kirby_equivalent(a, b, 2);
    REQUIRE(std::holds_alternative<Equivalent>(v));
    const auto& e = std::get<Equivalent>(v);
    LinkingMatrix x = a;
    for (const auto& m : e.path) x = apply(x, m);
    CHECK(x.permuted(e.relabel) == b);
  }
}
