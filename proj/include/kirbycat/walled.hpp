#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kirbycat/kirby_algebra.hpp"
#include "kirbycat/kirby_category.hpp"
#include "kirbycat/ribbon.hpp"

namespace kirbycat {

// A braid stretched between two walls: the left wall is the domain word, the
// right wall the codomain word. Closable braids are walled braids with equal
// walls.
class WalledBraid {
 public:
  explicit WalledBraid(FramedBraid f) : underlying_(std::move(f)) {}

  const FramedBraid& underlying() const noexcept { return underlying_; }
  const TensorWord& left_wall() const noexcept { return underlying_.domain(); }
  const TensorWord& right_wall() const noexcept {
    return underlying_.codomain();
  }
  std::size_t strands() const noexcept { return underlying_.strands(); }

  friend bool operator==(const WalledBraid&, const WalledBraid&) = default;

 private:
  FramedBraid underlying_;
};

WalledBraid make_walled(const FramedBraid& f);

// to_domain[i] is the left-wall position glued to right-wall position i.
struct WallMatching {
  std::vector<std::size_t> to_domain;
  friend bool operator==(const WallMatching&, const WallMatching&) = default;
};

// The identity matching when the walls are equal words, otherwise nothing.
std::optional<WallMatching> try_matching(const WalledBraid& w);

// Glues the right wall to the left wall through m and closes. Throws
// InvalidArgument unless m is a label-preserving bijection.
ClosedBraid identify_walls(const WalledBraid& w, const WallMatching& m);

// Crossing counts over the strand components obtained by gluing each
// right-wall position to the left-wall position with the same index whenever
// their labels agree. Open strands stay separate components.
CrossingRecord walled_invariants(const WalledBraid& w);

struct WalledPresentation {
  WalledBraid braid;
  CrossingRecord record;
};
WalledPresentation present(const WalledBraid& w);

// A morphism of the constrained Kirby category. When the walls match, the
// projection to the Kirby category and its boundary are filled in.
struct ConstrainedRecord {
  std::string constraint = "walled";
  TensorWord source;
  TensorWord target;
  CrossingRecord tangle;
  std::optional<LinkingMatrix> kirby_image;
  std::optional<BoundaryRecord> boundary;
};

ConstrainedRecord project_to_constrained(const WalledBraid& w);

// The Kirby-category morphism a closable walled braid projects to.
KirbyFamily kirby_projection(const ConstrainedRecord& r);

}  // namespace kirbycat
