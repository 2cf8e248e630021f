#include "kirbycat/kirby_category.hpp"

#include <algorithm>

namespace kirbycat {

EventObject EventObject::events(const std::vector<std::string>& ids,
                                bool thickened) {
  EventObject x;
  for (const auto& id : ids) {
    x.word.labels.push_back(ObjectLabel::event(id, thickened));
  }
  return x;
}

bool EventObject::all_thickened() const {
  return std::all_of(word.labels.begin(), word.labels.end(),
                     [](const ObjectLabel& l) { return l.thickened; });
}

bool EventObject::none_thickened() const {
  return std::none_of(word.labels.begin(), word.labels.end(),
                      [](const ObjectLabel& l) { return l.thickened; });
}

EventObject formal_tensor(const EventObject& x, const EventObject& y) {
  return {x.word * y.word};
}

std::string VariableIdentity::to_string() const {
  const std::string base =
      kind == IdentityKind::SphereProduct ? "(S2xS1)#" : "(S2xD2)nat";
  if (multiplicity.is_bound()) return base + "[" + *multiplicity.element() + "]";
  return base;
}

namespace {

template <class P>
DirectedFamily<P> compose_families(const DirectedFamily<P>& f,
                                   const DirectedFamily<P>& g) {
  if (!(f.target() == g.source())) {
    throw CompositionError("cannot compose families: target " +
                           f.target().to_string() + " != source " +
                           g.source().to_string());
  }
  using Element = typename DirectedFamily<P>::Element;
  std::vector<Element> elements;
  auto append = [&](const DirectedFamily<P>& h) {
    const std::string n = std::to_string(h.source().word.size());
    for (auto e : h.elements()) {
      if (auto* id = std::get_if<VariableIdentity>(&e)) {
        if (!id->multiplicity.is_bound()) {
          id->multiplicity = specialize(id->multiplicity, n);
        } else if (*id->multiplicity.element() != n) {
          throw MalformedDiagram("identity multiplicity " +
                                 *id->multiplicity.element() +
                                 " does not match object of length " + n);
        }
      }
      elements.push_back(std::move(e));
    }
  };
  append(f);
  append(g);
  return DirectedFamily<P>(f.source(), g.target(), std::move(elements));
}

}  // namespace

PhiFamily phi_identity(const EventObject& x) {
  return identity_family<BoundaryRecord>(x, IdentityKind::SphereProduct);
}

KirbyFamily kappa_identity(const EventObject& x) {
  return identity_family<LinkingMatrix>(x, IdentityKind::BoundarySum);
}

PhiFamily phi_compose(const PhiFamily& f, const PhiFamily& g) {
  return compose_families(f, g);
}

KirbyFamily kappa_compose(const KirbyFamily& f, const KirbyFamily& g) {
  return compose_families(f, g);
}

EventObject boundary_object(const EventObject& x) {
  EventObject out = x;
  for (auto& l : out.word.labels) l.thickened = false;
  return out;
}

PhiFamily boundary_functor(const KirbyFamily& f) {
  std::vector<PhiFamily::Element> elements;
  for (const auto& e : f.elements()) {
    if (const auto* id = std::get_if<VariableIdentity>(&e)) {
      elements.emplace_back(
          VariableIdentity{IdentityKind::SphereProduct, id->multiplicity});
    } else {
      elements.emplace_back(boundary_record(std::get<LinkingMatrix>(e)));
    }
  }
  return PhiFamily(boundary_object(f.source()), boundary_object(f.target()),
                   std::move(elements));
}

KirbyClass kirby_class(const LinkingMatrix& a) {
  auto rec = boundary_record(a);
  return {rec.h1_free_rank, std::move(rec.h1_torsion)};
}

}  // namespace kirbycat
