#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kirbycat {

struct Arrow {
  std::string name;
  std::size_t source = 0;
  std::size_t target = 0;
};

// A generator path. `path` lists generator indices in the order they are
// applied, so the composite h o g has path g.path followed by h.path. The
// empty path is the identity of `source`.
struct Morphism {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::size_t> path;

  std::size_t degree() const noexcept { return path.size(); }
  friend auto operator<=>(const Morphism&, const Morphism&) = default;
};

// Free category on a finite acyclic graph of events.
class FiniteFreeCategory {
 public:
  // Throws Unsupported when the generator graph has a cycle, InvalidArgument
  // on duplicate objects or dangling arrows.
  FiniteFreeCategory(std::vector<std::string> objects,
                     std::vector<Arrow> arrows);

  const std::vector<std::string>& objects() const noexcept { return objects_; }
  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }
  std::size_t object_count() const noexcept { return objects_.size(); }
  std::optional<std::size_t> find_object(const std::string& name) const;
  std::size_t object(const std::string& name) const;  // throws if unknown

  Morphism identity(std::size_t object) const;
  Morphism generator(std::size_t arrow) const;
  // h o g; throws CompositionError unless target(g) == source(h).
  Morphism compose(const Morphism& h, const Morphism& g) const;

  // Every morphism with the given target, identity included.
  std::vector<Morphism> morphisms_into(std::size_t object) const;
  // Length of the longest path into `object`.
  std::size_t depth(std::size_t object) const;

  std::string describe(const Morphism& m) const;

 private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<std::vector<std::size_t>> incoming_;
};

struct Sieve {
  std::size_t over = 0;
  std::set<Morphism> members;

  bool contains(const Morphism& m) const { return members.count(m) != 0; }
  friend bool operator==(const Sieve&, const Sieve&) = default;
};

std::size_t degree(const Morphism& m);

// All morphisms into `object` of degree >= n. Throws InvalidArgument on an
// unknown object.
Sieve sieve_geq(const FiniteFreeCategory& c, std::size_t object,
                std::size_t n);

// {h : psi o h in S}, a sieve over the source of psi.
Sieve restrict_sieve(const FiniteFreeCategory& c, const Sieve& s,
                     const Morphism& psi);

// True when every member's precompositions are members.
bool is_sieve(const FiniteFreeCategory& c, const Sieve& s);

// Smallest n with s == sieve_geq(object, n), if any. The empty sieve is the
// degree-graded sieve above the depth of the object.
std::optional<std::size_t> covering_degree(const FiniteFreeCategory& c,
                                           const Sieve& s);

struct AxiomViolation {
  std::string axiom;
  std::string object;
  std::string witness;
};

struct TopologyReport {
  bool maximal_covering = true;
  bool stability = true;
  bool transitivity = true;
  // restrict(sieve_geq(E, n), psi) == sieve_geq(E', max(0, n - deg psi)) for
  // every covering sieve and every morphism psi into E.
  bool degree_shift_law = true;
  // Restriction along a member of a covering sieve is the maximal sieve.
  bool member_restriction_maximal = true;
  // Objects where the empty sieve is admitted as a covering sieve because
  // sieve_geq(E, n) is empty for large n.
  std::vector<std::string> empty_covering_objects;
  std::vector<AxiomViolation> violations;
  std::size_t sieves_checked = 0;

  bool passed() const {
    return maximal_covering && stability && transitivity;
  }
};

inline constexpr std::size_t kDefaultObjectBound = 32;
inline constexpr std::size_t kSieveEnumerationLimit = 1u << 20;

// Exhaustive check of the Grothendieck topology axioms for the family
// {sieve_geq(E, n)}: maximal sieve covers, stability under restriction, and
// transitivity over every sieve of every object.
TopologyReport check_topology(const FiniteFreeCategory& c,
                              std::size_t object_bound = kDefaultObjectBound);

// Generator paths from `from` to `to` of length at most max_len.
std::vector<Morphism> flows(const FiniteFreeCategory& c, std::size_t from,
                            std::size_t to, std::size_t max_len);

}  // namespace kirbycat
