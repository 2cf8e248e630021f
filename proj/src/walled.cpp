#include "kirbycat/walled.hpp"

#include <numeric>

#include "kirbycat/errors.hpp"

namespace kirbycat {

WalledBraid make_walled(const FramedBraid& f) { return WalledBraid(f); }

std::optional<WallMatching> try_matching(const WalledBraid& w) {
  if (!(w.left_wall() == w.right_wall())) return std::nullopt;
  WallMatching m;
  m.to_domain.resize(w.strands());
  std::iota(m.to_domain.begin(), m.to_domain.end(), std::size_t{0});
  return m;
}

ClosedBraid identify_walls(const WalledBraid& w, const WallMatching& m) {
  const std::size_t n = w.strands();
  if (m.to_domain.size() != n) {
    throw InvalidArgument("matching has " + std::to_string(m.to_domain.size()) +
                          " entries for " + std::to_string(n) + " strands");
  }
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = m.to_domain[i];
    if (d >= n || hit[d]) throw InvalidArgument("matching is not a bijection");
    hit[d] = true;
    if (!(w.right_wall()[i] == w.left_wall()[d])) {
      throw InvalidArgument("matching glues " +
                            w.right_wall()[i].to_string() + " to " +
                            w.left_wall()[d].to_string());
    }
  }
  // Append a positive permutation braid carrying position i to to_domain[i].
  auto word = w.underlying().word();
  std::vector<std::size_t> dest = m.to_domain;
  for (std::size_t pass = 0; pass < n; ++pass) {
    for (std::size_t q = 0; q + 1 < n; ++q) {
      if (dest[q] > dest[q + 1]) {
        std::swap(dest[q], dest[q + 1]);
        word.push_back(Generator::crossing(q + 1, 1));
      }
    }
  }
  return close(FramedBraid::between(n, std::move(word), w.left_wall(),
                                    w.left_wall()));
}

CrossingRecord walled_invariants(const WalledBraid& w) {
  const std::size_t n = w.strands();
  const auto perm = braid_permutation(w.underlying());
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (std::size_t p = 0; p < n; ++p) {
    const auto q = perm[p];
    if (w.right_wall()[q] == w.left_wall()[q]) {
      const auto a = find(p);
      const auto b = find(q);
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto r = find(p);
    if (slot[r] == n) {
      slot[r] = comps.size();
      comps.emplace_back();
    }
    comps[slot[r]].push_back(p);
  }
  return crossing_record(w.underlying(), comps);
}

WalledPresentation present(const WalledBraid& w) {
  return {w, walled_invariants(w)};
}

ConstrainedRecord project_to_constrained(const WalledBraid& w) {
  ConstrainedRecord r;
  r.source = w.left_wall();
  r.target = w.right_wall();
  r.tangle = walled_invariants(w);
  if (auto m = try_matching(w)) {
    r.kirby_image = from_closed_braid(identify_walls(w, *m));
    const auto phi = boundary_functor(kirby_projection(r));
    r.boundary = std::get<BoundaryRecord>(phi.elements().front());
  }
  return r;
}

KirbyFamily kirby_projection(const ConstrainedRecord& r) {
  if (!r.kirby_image) {
    throw InvalidArgument("walled braid has unmatched walls and no image in "
                          "the Kirby category");
  }
  return KirbyFamily(EventObject{r.source}, EventObject{r.target},
                     {*r.kirby_image});
}

}  // namespace kirbycat
