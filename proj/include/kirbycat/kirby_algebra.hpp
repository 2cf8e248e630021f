#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

#include "kirbycat/ribbon.hpp"

namespace kirbycat {

using Integer = mpz_class;

// Symmetric integer matrix presenting the 2-handlebody M_L: entry (i,j) is
// the linking number of components i and j, the diagonal holds framings.
// Indices are zero-based.
class LinkingMatrix {
 public:
  LinkingMatrix() = default;
  explicit LinkingMatrix(std::size_t n);
  // Row-major entries; throws InvalidArgument unless square and symmetric.
  LinkingMatrix(std::size_t n, std::vector<Integer> entries);
  LinkingMatrix(std::initializer_list<std::initializer_list<long>> rows);

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * n_ + j];
  }
  const Integer& framing(std::size_t i) const { return (*this)(i, i); }
  const std::vector<Integer>& entries() const noexcept { return entries_; }

  // Sets (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, const Integer& v);

  // Simultaneous row/column permutation: new index k is old index order[k].
  LinkingMatrix permuted(const std::vector<std::size_t>& order) const;

  std::string to_string() const;

  friend bool operator==(const LinkingMatrix&, const LinkingMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Integer> entries_;
};

struct SmithForm {
  std::vector<Integer> invariant_factors;  // d1 | d2 | ..., all >= 1
  std::size_t free_rank = 0;

  friend bool operator==(const SmithForm&, const SmithForm&) = default;
};

// Invariant data of the boundary 3-manifold and the handlebody itself.
struct BoundaryRecord {
  std::size_t h1_free_rank = 0;
  std::vector<Integer> h1_torsion;  // invariant factors > 1
  std::size_t b2 = 0;
  std::size_t euler = 1;
  std::int64_t sigma = 0;

  std::string to_string() const;
  friend bool operator==(const BoundaryRecord&,
                         const BoundaryRecord&) = default;
};

// Surgery presentation of a closed braid. Throws MalformedDiagram on an odd
// inter-component crossing count.
LinkingMatrix from_closed_braid(const ClosedBraid& c);
LinkingMatrix from_crossing_record(const CrossingRecord& rec);

LinkingMatrix blow_up(const LinkingMatrix& a, int sign);
LinkingMatrix blow_down(const LinkingMatrix& a, std::size_t i);
// E A E^T with E = I + sign * e_ij: component i slides over component j.
LinkingMatrix handle_slide(const LinkingMatrix& a, std::size_t i,
                           std::size_t j, int sign);

std::int64_t signature(const LinkingMatrix& a);
Integer determinant(const LinkingMatrix& a);

// Smith normal form of a general rows x cols integer matrix (row-major).
SmithForm smith_normal_form(std::size_t rows, std::size_t cols,
                            std::vector<Integer> entries);
SmithForm smith(const LinkingMatrix& a);
BoundaryRecord boundary_record(const LinkingMatrix& a);

struct KirbyMove {
  enum class Kind : std::uint8_t { BlowUp, BlowDown, Slide };
  Kind kind = Kind::BlowUp;
  int sign = 1;
  std::size_t i = 0;
  std::size_t j = 0;

  static KirbyMove blow_up(int sign) { return {Kind::BlowUp, sign, 0, 0}; }
  static KirbyMove blow_down(std::size_t i) {
    return {Kind::BlowDown, 1, i, 0};
  }
  static KirbyMove slide(std::size_t i, std::size_t j, int sign) {
    return {Kind::Slide, sign, i, j};
  }
  // One-based text form: "blow_up +", "blow_down 2", "slide 1 2 -".
  std::string to_string() const;
  friend bool operator==(const KirbyMove&, const KirbyMove&) = default;
};

LinkingMatrix apply(const LinkingMatrix& a, const KirbyMove& m);

// Lexicographically minimal matrix over simultaneous row/column
// permutations; entries are compared column by column over the upper
// triangle, (0,0), (0,1), (1,1), (0,2), ...
struct CanonicalForm {
  LinkingMatrix matrix;
  std::vector<std::size_t> order;  // matrix == input.permuted(order)
};
CanonicalForm canonical_form(const LinkingMatrix& a);

struct Equivalent {
  std::vector<KirbyMove> path;
  // apply(path) to A, permuted by `relabel`, equals B.
  std::vector<std::size_t> relabel;
};
struct Distinguished {
  std::string invariant;
};
struct Unknown {
  std::size_t explored = 0;
};
using EquivalenceVerdict = std::variant<Equivalent, Distinguished, Unknown>;

inline constexpr std::size_t kSearchMaxComponents = 8;

// Compares boundary homology, then runs a breadth-first search over Kirby
// moves up to `depth` moves. Throws InvalidArgument when depth == 0.
EquivalenceVerdict kirby_equivalent(const LinkingMatrix& a,
                                    const LinkingMatrix& b, std::size_t depth);

}  // namespace kirbycat
