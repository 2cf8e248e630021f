#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "kirbycat/errors.hpp"
#include "kirbycat/kirby_algebra.hpp"
#include "kirbycat/motivic.hpp"
#include "kirbycat/ribbon.hpp"

namespace kirbycat {

// A tensor word of events: thickened for objects of the Kirby category,
// plain for objects of the category of 3-manifolds.
struct EventObject {
  TensorWord word;

  static EventObject events(const std::vector<std::string>& ids,
                            bool thickened);
  bool all_thickened() const;
  bool none_thickened() const;
  std::string to_string() const { return word.to_string(); }

  friend bool operator==(const EventObject&, const EventObject&) = default;
};

EventObject formal_tensor(const EventObject& x, const EventObject& y);

enum class IdentityKind {
  SphereProduct,  // connected sums of S^2 x S^1
  BoundarySum,    // boundary sums of S^2 x D^2
};

// Identity whose multiplicity is a variable, specialized to the length of the
// object's tensor word when it takes part in a composition.
struct VariableIdentity {
  IdentityKind kind = IdentityKind::BoundarySum;
  Variable multiplicity = make_variable("N");

  std::string to_string() const;
};

// The multiplicity is determined by the endpoint object, so identities of
// the same kind compare equal whether or not it has been specialized yet.
inline bool operator==(const VariableIdentity& a, const VariableIdentity& b) {
  return a.kind == b.kind;
}

template <class Payload>
struct PayloadTraits;

template <>
struct PayloadTraits<LinkingMatrix> {
  static constexpr IdentityKind kIdentity = IdentityKind::BoundarySum;
  static constexpr bool kThickened = true;
};

template <>
struct PayloadTraits<BoundaryRecord> {
  static constexpr IdentityKind kIdentity = IdentityKind::SphereProduct;
  static constexpr bool kThickened = false;
};

// A morphism of the Kirby category (payload LinkingMatrix) or of the category
// of 3-manifolds (payload BoundaryRecord): a nonempty directed family kept in
// normal form, where identities are absorbed unless the whole family is a
// single identity.
template <class Payload>
class DirectedFamily {
 public:
  using Element = std::variant<VariableIdentity, Payload>;

  DirectedFamily(EventObject source, EventObject target,
                 std::vector<Element> elements)
      : source_(std::move(source)), target_(std::move(target)) {
    if (elements.empty()) {
      throw InvalidArgument("directed family must be nonempty");
    }
    for (const auto& e : elements) {
      const auto* id = std::get_if<VariableIdentity>(&e);
      if (id && id->kind != PayloadTraits<Payload>::kIdentity) {
        throw InvalidArgument("identity kind does not match the category");
      }
    }
    normalize(std::move(elements));
  }

  const EventObject& source() const noexcept { return source_; }
  const EventObject& target() const noexcept { return target_; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  std::size_t length() const noexcept { return elements_.size(); }
  bool is_identity() const {
    return std::holds_alternative<VariableIdentity>(elements_.front());
  }

  friend bool operator==(const DirectedFamily&,
                         const DirectedFamily&) = default;

 private:
  void normalize(std::vector<Element> elements) {
    for (auto& e : elements) {
      if (!std::holds_alternative<VariableIdentity>(e)) {
        elements_.push_back(std::move(e));
      }
    }
    if (elements_.empty()) elements_.push_back(std::move(elements.front()));
  }

  EventObject source_;
  EventObject target_;
  std::vector<Element> elements_;
};

using KirbyFamily = DirectedFamily<LinkingMatrix>;
using PhiFamily = DirectedFamily<BoundaryRecord>;

// The identity on x: a single variable identity with unbound multiplicity.
// Throws InvalidArgument when the kind does not fit the object's thickening
// or the category.
template <class Payload>
DirectedFamily<Payload> identity_family(const EventObject& x,
                                        IdentityKind kind) {
  const bool ok = kind == IdentityKind::BoundarySum ? x.all_thickened()
                                                    : x.none_thickened();
  if (!ok || kind != PayloadTraits<Payload>::kIdentity) {
    throw InvalidArgument("identity kind does not match object " +
                          x.to_string());
  }
  return DirectedFamily<Payload>(
      x, x, {VariableIdentity{kind, make_variable("N")}});
}

PhiFamily phi_identity(const EventObject& x);
KirbyFamily kappa_identity(const EventObject& x);

// Concatenation of directed families followed by identity absorption.
PhiFamily phi_compose(const PhiFamily& f, const PhiFamily& g);
KirbyFamily kappa_compose(const KirbyFamily& f, const KirbyFamily& g);

// Elementwise boundary: payloads to their boundary records, boundary-sum
// identities to sphere-product identities, objects lose their thickening.
PhiFamily boundary_functor(const KirbyFamily& f);
EventObject boundary_object(const EventObject& x);

// Kirby-equivalence class key: the homology of the boundary.
struct KirbyClass {
  std::size_t h1_free_rank = 0;
  std::vector<Integer> h1_torsion;

  friend bool operator==(const KirbyClass&, const KirbyClass&) = default;
};
KirbyClass kirby_class(const LinkingMatrix& a);

}  // namespace kirbycat
