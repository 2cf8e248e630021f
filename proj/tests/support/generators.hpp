#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "kirbycat/event_site.hpp"
#include "kirbycat/kirby_algebra.hpp"
#include "kirbycat/kirby_category.hpp"
#include "kirbycat/ribbon.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

// Uniformly labelled braid, so always closable.
inline kirbycat::FramedBraid random_braid(Rng& rng, std::size_t max_strands,
                                          std::size_t max_gens,
                                          std::size_t min_strands = 1) {
  using kirbycat::Generator;
  const auto n = static_cast<std::size_t>(uniform(
      rng, static_cast<long>(min_strands), static_cast<long>(max_strands)));
  const auto len = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(max_gens)));
  std::vector<Generator> word;
  for (std::size_t t = 0; t < len; ++t) {
    const int sign = uniform(rng, 0, 1) ? 1 : -1;
    if (n >= 2 && uniform(rng, 0, 3) != 0) {
      word.push_back(Generator::crossing(
          static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(n) - 1)), sign));
    } else {
      word.push_back(Generator::kink(
          static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(n))), sign));
    }
  }
  return kirbycat::FramedBraid(n, std::move(word));
}

inline kirbycat::LinkingMatrix random_matrix(Rng& rng, std::size_t n, long lo,
                                             long hi) {
  kirbycat::LinkingMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) a.set(i, j, uniform(rng, lo, hi));
  }
  return a;
}

inline std::vector<std::vector<mpz_class>> rows_of(
    const kirbycat::LinkingMatrix& a) {
  std::vector<std::vector<mpz_class>> m(a.size(),
                                        std::vector<mpz_class>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) m[i][j] = a(i, j);
  }
  return m;
}

// A random valid Kirby move for `a`, or a blow-up when nothing else applies.
inline kirbycat::KirbyMove random_move(Rng& rng,
                                       const kirbycat::LinkingMatrix& a) {
  using kirbycat::KirbyMove;
  const auto n = a.size();
  const long pick = uniform(rng, 0, 9);
  if (pick < 6 && n >= 2) {
    const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 1));
    auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 2));
    if (j >= i) ++j;
    return KirbyMove::slide(i, j, uniform(rng, 0, 1) ? 1 : -1);
  }
  if (pick < 8) {
    for (std::size_t i = 0; i < n; ++i) {
      bool isolated = abs(a(i, i)) == 1;
      for (std::size_t j = 0; j < n && isolated; ++j) {
        if (j != i && a(i, j) != 0) isolated = false;
      }
      if (isolated) return KirbyMove::blow_down(i);
    }
  }
  return KirbyMove::blow_up(uniform(rng, 0, 1) ? 1 : -1);
}

// Acyclic category: objects 0..n-1, arrows only from lower to higher index.
inline kirbycat::FiniteFreeCategory random_acyclic_category(
    Rng& rng, std::size_t max_objects, std::size_t max_arrows) {
  const auto n = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_objects)));
  std::vector<std::string> objects;
  for (std::size_t i = 0; i < n; ++i) objects.push_back("E" + std::to_string(i));
  std::vector<kirbycat::Arrow> arrows;
  if (n >= 2) {
    const auto count = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(max_arrows)));
    for (std::size_t a = 0; a < count; ++a) {
      auto s = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n) - 2));
      auto t = static_cast<std::size_t>(uniform(rng, static_cast<long>(s) + 1, static_cast<long>(n) - 1));
      arrows.push_back({"g" + std::to_string(a), s, t});
    }
  }
  return kirbycat::FiniteFreeCategory(objects, arrows);
}

// Thickened objects o0 .. o3 of increasing size.
inline std::vector<kirbycat::EventObject> family_objects() {
  std::vector<kirbycat::EventObject> out;
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<std::string> ids;
    for (std::size_t j = 0; j <= i; ++j) {
      ids.push_back("o" + std::to_string(i) + "e" + std::to_string(j + 1));
    }
    out.push_back(kirbycat::EventObject::events(ids, true));
  }
  return out;
}

// Endomorphisms are sometimes the identity family; other words mix
// matrices with variable identities.
inline kirbycat::KirbyFamily random_family(Rng& rng,
                                           const kirbycat::EventObject& from,
                                           const kirbycat::EventObject& to) {
  using namespace kirbycat;
  if (from == to && uniform(rng, 0, 3) == 0) return kappa_identity(from);
  std::vector<KirbyFamily::Element> el;
  const auto len = uniform(rng, 1, 3);
  for (long k = 0; k < len; ++k) {
    if (uniform(rng, 0, 4) == 0) {
      el.emplace_back(VariableIdentity{IdentityKind::BoundarySum});
    } else {
      el.emplace_back(random_matrix(rng, static_cast<std::size_t>(uniform(rng, 0, 3)), -3, 3));
    }
  }
  return KirbyFamily(from, to, el);
}

}  // namespace testgen
