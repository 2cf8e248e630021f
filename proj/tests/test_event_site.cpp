#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "kirbycat/errors.hpp"
#include "kirbycat/event_site.hpp"
#include "support/generators.hpp"

using namespace kirbycat;

namespace {

FiniteFreeCategory chain3() {
  return FiniteFreeCategory({"A", "B", "C"}, {{"f", 0, 1}, {"g", 1, 2}});
}

FiniteFreeCategory out_tree(std::size_t levels) {
  std::vector<std::string> objs;
  std::vector<Arrow> arrows;
  const std::size_t n = (std::size_t{1} << levels) - 1;
  for (std::size_t i = 0; i < n; ++i) objs.push_back("t" + std::to_string(i));
  for (std::size_t i = 0; 2 * i + 2 < n; ++i) {
    arrows.push_back({"l" + std::to_string(i), i, 2 * i + 1});
    arrows.push_back({"r" + std::to_string(i), i, 2 * i + 2});
  }
  return FiniteFreeCategory(objs, arrows);
}

// Independent enumeration: walk forward from every object along generators.
std::set<Morphism> all_paths(const FiniteFreeCategory& c) {
  std::set<Morphism> out;
  std::vector<Morphism> stack;
  for (std::size_t o = 0; o < c.object_count(); ++o) stack.push_back({o, o, {}});
  while (!stack.empty()) {
    auto m = stack.back();
    stack.pop_back();
    out.insert(m);
    for (std::size_t a = 0; a < c.arrows().size(); ++a) {
      if (c.arrows()[a].source != m.target) continue;
      auto n = m;
      n.target = c.arrows()[a].target;
      n.path.push_back(a);
      stack.push_back(n);
    }
  }
  return out;
}

std::set<Morphism> into(const std::set<Morphism>& paths, std::size_t e) {
  std::set<Morphism> out;
  for (const auto& m : paths) if (m.target == e) out.insert(m);
  return out;
}

Morphism after(const Morphism& h, const Morphism& g) {
  Morphism r{g.source, h.target, g.path};
  r.path.insert(r.path.end(), h.path.begin(), h.path.end());
  return r;
}

using MSet = std::set<Morphism>;

struct BruteSite {
  std::set<Morphism> paths;
  std::size_t objects;

  std::vector<MSet> covering(std::size_t e) const {
    std::vector<MSet> out;
    const auto all = into(paths, e);
    std::size_t longest = 0;
    for (const auto& m : all) longest = std::max(longest, m.path.size());
    for (std::size_t n = 0; n <= longest + 1; ++n) {
      MSet s;
      for (const auto& m : all) if (m.path.size() >= n) s.insert(m);
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
  }
  bool is_covering(std::size_t e, const MSet& s) const {
    const auto cov = covering(e);
    return std::find(cov.begin(), cov.end(), s) != cov.end();
  }
  MSet pull(const MSet& s, const Morphism& psi) const {
    MSet out;
    for (const auto& h : into(paths, psi.source))
      if (s.count(after(psi, h))) out.insert(h);
    return out;
  }
  bool is_sieve(std::size_t e, const MSet& s) const {
    for (const auto& m : s)
      for (const auto& g : into(paths, m.source))
        if (!s.count(after(m, g))) return false;
    (void)e;
    return true;
  }
  // Transitivity over every subset of morphisms into every object.
  bool transitive() const {
    for (std::size_t e = 0; e < objects; ++e) {
      const auto all = into(paths, e);
      std::vector<Morphism> v(all.begin(), all.end());
      if (v.size() > 20) return false;
      for (std::size_t mask = 0; mask < (std::size_t{1} << v.size()); ++mask) {
        MSet s;
        for (std::size_t i = 0; i < v.size(); ++i)
          if (mask >> i & 1) s.insert(v[i]);
        if (!is_sieve(e, s) || is_covering(e, s)) continue;
        for (const auto& r : covering(e)) {
          bool local = true;
          for (const auto& f : r)
            if (!is_covering(f.source, pull(s, f))) { local = false; break; }
          if (local) return false;
        }
      }
    }
    return true;
  }
};

BruteSite brute(const FiniteFreeCategory& c) {
  return {all_paths(c), c.object_count()};
}

}  // namespace

TEST_CASE("degree") {
  const auto c = chain3();
  CHECK(degree(c.generator(0)) == 1);
  CHECK(degree(c.identity(2)) == 0);
  const FiniteFreeCategory d({"A", "B", "C", "D"},
                             {{"f", 0, 1}, {"g", 1, 2}, {"h", 2, 3}});
  const auto p = d.compose(d.generator(2), d.compose(d.generator(1), d.generator(0)));
  CHECK(degree(p) == 3);
  CHECK(d.describe(p) == "h o g o f");
  CHECK(d.describe(d.identity(0)) == "id_A");
}

TEST_CASE("sieve_geq") {
  const auto c = chain3();
  const auto paths = all_paths(c);
  const auto s1 = sieve_geq(c, 2, 1);
  MSet expect;
  for (const auto& m : into(paths, 2)) if (m.path.size() >= 1) expect.insert(m);
  CHECK(s1.members == expect);
  CHECK(s1.members.size() == 2);
  CHECK(s1.contains(c.generator(1)));
  CHECK(s1.contains(c.compose(c.generator(1), c.generator(0))));

  const auto s0 = sieve_geq(c, 2, 0);
  CHECK(s0.members == into(paths, 2));
  CHECK(s0.contains(c.identity(2)));

  CHECK(sieve_geq(c, 2, 5).members.empty());
  CHECK_THROWS_AS(sieve_geq(c, 7, 0), InvalidArgument);
}

TEST_CASE("restrict_sieve") {
  const auto c = chain3();
  const auto r = restrict_sieve(c, sieve_geq(c, 2, 2), c.generator(1));
  CHECK(r == sieve_geq(c, 1, 1));
  CHECK(r.members == MSet{c.generator(0)});

  CHECK(restrict_sieve(c, sieve_geq(c, 2, 0), c.generator(1)) == sieve_geq(c, 1, 0));
  const auto s = sieve_geq(c, 2, 1);
  CHECK(restrict_sieve(c, s, c.identity(2)) == s);
  CHECK_THROWS_AS(restrict_sieve(c, s, c.generator(0)), InvalidArgument);
}

TEST_CASE("covering_degree") {
  const auto c = chain3();
  CHECK(covering_degree(c, sieve_geq(c, 2, 1)) == 1u);
  CHECK(covering_degree(c, sieve_geq(c, 2, 9)) == 3u);
  Sieve odd{2, {c.generator(1)}};
  CHECK_FALSE(is_sieve(c, odd));
}

TEST_CASE("check_topology: examples") {
  const auto chain = check_topology(chain3());
  CHECK(chain.passed());
  CHECK(chain.degree_shift_law);
  CHECK(chain.member_restriction_maximal);
  CHECK(chain.violations.empty());

  const auto single = check_topology(FiniteFreeCategory({"E"}, {}));
  CHECK(single.passed());

  const auto tree = out_tree(4);
  REQUIRE(tree.object_count() == 15);
  const auto rep = check_topology(tree);
  CHECK(rep.passed());
  CHECK(brute(tree).transitive());
  CHECK(brute(chain3()).transitive());
}

TEST_CASE("check_topology: two arrows into one object break transitivity") {
  const FiniteFreeCategory v({"X", "Y", "E"}, {{"a", 0, 2}, {"b", 1, 2}});
  const auto rep = check_topology(v);
  CHECK(rep.maximal_covering);
  CHECK(rep.stability);
  CHECK_FALSE(rep.transitivity);
  CHECK_FALSE(brute(v).transitive());
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations.front().axiom == "transitivity");
}

TEST_CASE("check_topology: cycle and bound") {
  CHECK_THROWS_AS(FiniteFreeCategory({"A", "B"}, {{"f", 0, 1}, {"g", 1, 0}}),
                  Unsupported);
  CHECK_THROWS_AS(check_topology(out_tree(4), 8), Unsupported);
}

TEST_CASE("flows") {
  const auto c = chain3();
  const auto f = flows(c, 0, 2, 5);
  REQUIRE(f.size() == 1);
  CHECK(f[0] == c.compose(c.generator(1), c.generator(0)));
  CHECK(flows(c, 0, 2, 1).empty());
  const auto e = flows(c, 1, 1, 4);
  REQUIRE(e.size() == 1);
  CHECK(e[0] == c.identity(1));
  const FiniteFreeCategory d({"A", "B"}, {});
  CHECK(flows(d, 0, 1, 3).empty());
}

TEST_CASE("property: random acyclic categories") {
  testgen::Rng rng(41);
  std::size_t agree = 0;
  for (int t = 0; t < 150; ++t) {
    const auto c = testgen::random_acyclic_category(rng, 6, 10);
    const auto paths = all_paths(c);
    for (std::size_t e = 0; e < c.object_count(); ++e) {
      const auto in = into(paths, e);
      const auto listed = c.morphisms_into(e);
      CHECK(MSet(listed.begin(), listed.end()) == in);
      for (std::size_t n = 0; n <= c.depth(e) + 1; ++n) {
        const auto s = sieve_geq(c, e, n);
        CHECK(is_sieve(c, s));
        for (const auto& psi : in) {
          const auto r = restrict_sieve(c, s, psi);
          const std::size_t shifted = n > psi.degree() ? n - psi.degree() : 0;
          CHECK(r == sieve_geq(c, psi.source, shifted));
        }
      }
    }
    for (std::size_t a = 0; a < c.object_count(); ++a)
      for (std::size_t b = 0; b < c.object_count(); ++b) {
        MSet expect;
        for (const auto& m : paths)
          if (m.source == a && m.target == b && m.path.size() <= 3) expect.insert(m);
        const auto got = flows(c, a, b, 3);
        CHECK(MSet(got.begin(), got.end()) == expect);
      }
    const auto rep = check_topology(c);
    CHECK(rep.maximal_covering);
    CHECK(rep.stability);
    CHECK(rep.degree_shift_law);
    if (rep.transitivity == brute(c).transitive()) ++agree;
  }
  CHECK(agree == 150);
}
