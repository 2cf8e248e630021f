#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kirbycat/motivic.hpp"

namespace kirbycat {

// An object of the ribbon category: an event, or a shadow variable created by
// the cabling map. `thickened` marks delta(e); `dual` marks a right dual.
struct ObjectLabel {
  std::variant<std::string, Variable> base;
  bool thickened = true;
  bool dual = false;

  static ObjectLabel event(std::string id, bool thickened = true,
                           bool dual = false);
  static ObjectLabel shadow(bool thickened = true);

  bool is_shadow() const noexcept {
    return std::holds_alternative<Variable>(base);
  }
  // Event id, or the element a shadow was specialized to. Empty for an
  // unbound shadow.
  std::optional<std::string> identity() const;
  std::string to_string() const;
};

// A specialized shadow compares equal to the object it took the identity of.
bool operator==(const ObjectLabel& a, const ObjectLabel& b);

// Tensor word of labels; the empty word is the formal unit I.
struct TensorWord {
  std::vector<ObjectLabel> labels;

  std::size_t size() const noexcept { return labels.size(); }
  bool is_unit() const noexcept { return labels.empty(); }
  const ObjectLabel& operator[](std::size_t i) const { return labels[i]; }

  static TensorWord uniform(std::size_t n, const ObjectLabel& label);
  std::string to_string() const;

  friend bool operator==(const TensorWord&, const TensorWord&) = default;
};

TensorWord operator*(const TensorWord& a, const TensorWord& b);

// The label used when a braid is written without explicit labels: delta(e).
ObjectLabel default_label();

// Braid generator with a one-based position, following the sigma_i
// convention. Crossing(i) acts on positions i and i+1; Kink(i) is a curl on
// the strand at position i. Sign +1 is a right-handed crossing / curl.
struct Generator {
  enum class Kind : std::uint8_t { Crossing, Kink };
  Kind kind = Kind::Crossing;
  std::size_t pos = 1;
  int sign = 1;

  static Generator crossing(std::size_t i, int sign) {
    return {Kind::Crossing, i, sign};
  }
  static Generator kink(std::size_t i, int sign) {
    return {Kind::Kink, i, sign};
  }
  std::string to_string() const;

  friend bool operator==(const Generator&, const Generator&) = default;
};

// perm[p] is the bottom position reached by the strand starting at top
// position p (zero-based).
using Permutation = std::vector<std::size_t>;

class FramedBraid {
 public:
  // Codomain is the domain permuted by the braid permutation.
  FramedBraid(std::size_t strands, std::vector<Generator> word,
              TensorWord domain);
  // Strands all labelled with default_label().
  FramedBraid(std::size_t strands, std::vector<Generator> word);

  // A morphism between possibly different objects A -> B (a walled braid):
  // the geometric braid followed by a relabelling of its bottom endpoints.
  static FramedBraid between(std::size_t strands, std::vector<Generator> word,
                             TensorWord domain, TensorWord codomain);
  static FramedBraid identity(TensorWord domain);
  static FramedBraid identity(std::size_t strands);

  std::size_t strands() const noexcept { return strands_; }
  const std::vector<Generator>& word() const noexcept { return word_; }
  const TensorWord& domain() const noexcept { return domain_; }
  const TensorWord& codomain() const noexcept { return codomain_; }

  std::string to_string() const;

  friend bool operator==(const FramedBraid&, const FramedBraid&) = default;

 private:
  FramedBraid() = default;
  void check_word() const;

  std::size_t strands_ = 0;
  std::vector<Generator> word_;
  TensorWord domain_;
  TensorWord codomain_;
};

// Partition of strand positions into the cycles of the closure. Components
// are ordered by their smallest position; positions inside a component are
// ascending. This is the canonical component order used everywhere.
class ClosedBraid {
 public:
  const FramedBraid& underlying() const noexcept { return underlying_; }
  const std::vector<std::vector<std::size_t>>& components() const noexcept {
    return components_;
  }
  std::size_t component_count() const noexcept { return components_.size(); }
  // Index of the component containing top position p.
  std::size_t component_of(std::size_t p) const { return owner_.at(p); }

 private:
  friend ClosedBraid close(const FramedBraid& f);
  ClosedBraid(FramedBraid f, std::vector<std::vector<std::size_t>> comps);

  FramedBraid underlying_;
  std::vector<std::vector<std::size_t>> components_;
  std::vector<std::size_t> owner_;
};

// Signed crossing counts between strand components. Off-diagonal entries
// count crossings between two components; diagonal entries are self-writhe
// plus kink signs (blackboard framing).
struct CrossingRecord {
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::int64_t> counts;  // row-major, components.size() squared

  std::size_t size() const noexcept { return components.size(); }
  std::int64_t at(std::size_t i, std::size_t j) const {
    return counts.at(i * components.size() + j);
  }
  friend bool operator==(const CrossingRecord&,
                         const CrossingRecord&) = default;
};

// Which original strand each position of a derived braid descends from.
struct Cabling {
  FramedBraid braid;
  std::vector<std::size_t> parent;  // original top position per new position
  std::vector<bool> is_copy;        // true for shadow copies
};

FramedBraid compose_braids(const FramedBraid& f, const FramedBraid& g);
FramedBraid tensor_braids(const FramedBraid& f, const FramedBraid& g);
Permutation braid_permutation(const FramedBraid& f);
bool can_close(const FramedBraid& f);
ClosedBraid close(const FramedBraid& f);
CrossingRecord linking_data(const ClosedBraid& c);

// Crossing counts of `f` for an arbitrary partition of its strands into
// components (components given as lists of top positions).
CrossingRecord crossing_record(
    const FramedBraid& f,
    const std::vector<std::vector<std::size_t>>& components);

// Blackboard-parallel copy of one closure component, each copy strand placed
// directly to the left of its original and labelled by an unbound shadow.
FramedBraid shadow_double(const FramedBraid& f,
                          std::span<const std::size_t> strands);
FramedBraid shadow_double(const FramedBraid& f, std::size_t component);
Cabling shadow_double_traced(const FramedBraid& f, std::size_t component);

// Handle slide of component `target` over component `over` realised on the
// diagram: cable `over`, route the copy next to the lowest strand of
// `target` by a conjugating crossing sequence, and fuse with a twist.
FramedBraid band_sum_add(const FramedBraid& f, std::size_t target,
                         std::size_t over);
Cabling band_sum_add_traced(const FramedBraid& f, std::size_t target,
                            std::size_t over);

// For each component of `derived` (a closure of cabling.braid), the
// component of `original` its non-copy strands come from; components made
// only of copies report the component of their parents.
std::vector<std::size_t> component_lineage(const ClosedBraid& original,
                                           const Cabling& cabling,
                                           const ClosedBraid& derived);

}  // namespace kirbycat
