#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kirbycat/kirby_algebra.hpp"
#include "kirbycat/ribbon.hpp"

namespace kirbycat {

using Rational = mpq_class;

// x -> a x + b on one axis of the open cube (-1,1)^k.
struct AxisMap {
  Rational a = 1;
  Rational b = 0;
  friend bool operator==(const AxisMap&, const AxisMap&) = default;
};

struct RectAffine {
  std::vector<AxisMap> axes;

  std::size_t dim() const noexcept { return axes.size(); }
  static RectAffine identity(std::size_t k);
  // this o inner
  RectAffine after(const RectAffine& inner) const;
  std::vector<Rational> apply(const std::vector<Rational>& x) const;

  friend bool operator==(const RectAffine&, const RectAffine&) = default;
};

struct TwistedComponent {
  RectAffine affine;
  std::vector<Integer> twist;  // length k - 1

  friend bool operator==(const TwistedComponent&,
                         const TwistedComponent&) = default;
};

// Labelled cubes embedded into one cube. Keys are one-based elements of the
// source pointed set.
struct TwistedEmbedding {
  std::size_t k = 1;
  std::map<std::size_t, TwistedComponent> components;

  friend bool operator==(const TwistedEmbedding&,
                         const TwistedEmbedding&) = default;
};

// A morphism delta<m> -> delta<n>: a based map alpha (alpha[i-1] in 0..n,
// 0 the basepoint) and for each j in 1..n an embedding of the cubes over
// alpha^{-1}(j).
struct OperadMorphism {
  std::size_t k = 1;
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<std::size_t> alpha;
  std::vector<TwistedEmbedding> fibers;

  std::string to_string() const;
  friend bool operator==(const OperadMorphism&,
                         const OperadMorphism&) = default;
};

// Empty when the embedding is valid: every box inside the cube with positive
// scales, twists of length k - 1, and boxes pairwise disjoint.
std::vector<std::string> validate(const TwistedEmbedding& e);
// Also checks alpha against the fibers.
std::vector<std::string> validate(const OperadMorphism& f);

// outer o inner. Throws CompositionError unless inner.n == outer.m and the
// dimensions agree.
OperadMorphism compose(const OperadMorphism& outer,
                       const OperadMorphism& inner);
OperadMorphism identity_morphism(std::size_t n, std::size_t k);

using ComposeFn =
    std::function<OperadMorphism(const OperadMorphism&, const OperadMorphism&)>;

// Deliberately broken composition laws, used to check that the axiom
// harness notices them. MultiplyTwists has no effect when k = 1.
enum class InjectedFault { MultiplyTwists, ReversedAffineOrder };
OperadMorphism compose_faulty(const OperadMorphism& outer,
                              const OperadMorphism& inner,
                              InjectedFault fault);

// Seeded source of valid random morphisms in a fixed dimension.
class RandomMorphismSource {
 public:
  RandomMorphismSource(std::size_t k, std::uint64_t seed,
                       std::size_t max_arity = 3);

  std::size_t k() const noexcept { return k_; }
  std::size_t random_arity();
  OperadMorphism random_morphism(std::size_t m, std::size_t n);
  std::vector<Rational> random_point();
  // Identity with probability 1/4, otherwise random.
  OperadMorphism maybe_identity(std::size_t m, std::size_t n);

 private:
  Rational random_unit();  // in [0,1]

  std::size_t k_;
  std::size_t max_arity_;
  std::mt19937_64 rng_;
};

struct OperadAxiomReport {
  std::size_t trials = 0;
  std::size_t associativity_failures = 0;
  std::size_t identity_failures = 0;
  std::size_t evaluation_failures = 0;
  std::size_t validity_failures = 0;
  std::vector<std::string> witnesses;

  bool passed() const {
    return associativity_failures + identity_failures + evaluation_failures +
               validity_failures ==
           0;
  }
};

// Associativity, two-sided identity laws, validity of composites and a
// pointwise check (composite component and summed twist against stepwise
// evaluation) over random composable triples. Throws InvalidArgument when
// trials == 0.
OperadAxiomReport check_operad_axioms(RandomMorphismSource& source,
                                      std::size_t trials,
                                      const ComposeFn& compose_fn = compose);

// Sum of the twists of unary k = 2 morphisms. Throws InvalidArgument on any
// other input.
Integer framing_of_loop(std::span<const OperadMorphism> ops);

// One-strand braid whose kinks carry the same framing as the loop.
FramedBraid loop_braid(std::span<const OperadMorphism> ops);

}  // namespace kirbycat
