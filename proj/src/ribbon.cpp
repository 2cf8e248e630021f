#include "kirbycat/ribbon.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "kirbycat/errors.hpp"

namespace kirbycat {

ObjectLabel ObjectLabel::event(std::string id, bool thickened, bool dual) {
  if (id.empty()) throw InvalidArgument("event identifier must be nonempty");
  return {std::move(id), thickened, dual};
}

ObjectLabel ObjectLabel::shadow(bool thickened) {
  return {make_variable(kShadowDomain), thickened, false};
}

std::optional<std::string> ObjectLabel::identity() const {
  if (const auto* id = std::get_if<std::string>(&base)) return *id;
  return std::get<Variable>(base).element();
}

std::string ObjectLabel::to_string() const {
  std::string core;
  if (const auto* id = std::get_if<std::string>(&base)) {
    core = *id;
  } else {
    const auto& v = std::get<Variable>(base);
    core = v.is_bound() ? "A*=" + *v.element() : std::string("A*");
  }
  if (thickened) core = "d(" + core + ")";
  if (dual) core += "*";
  return core;
}

bool operator==(const ObjectLabel& a, const ObjectLabel& b) {
  if (a.thickened != b.thickened || a.dual != b.dual) return false;
  auto ia = a.identity();
  auto ib = b.identity();
  if (!ia && !ib) {
    return std::get<Variable>(a.base) == std::get<Variable>(b.base);
  }
  return ia == ib;
}

TensorWord TensorWord::uniform(std::size_t n, const ObjectLabel& label) {
  return {std::vector<ObjectLabel>(n, label)};
}

std::string TensorWord::to_string() const {
  if (labels.empty()) return "I";
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += " (x) ";
    out += labels[i].to_string();
  }
  return out;
}

TensorWord operator*(const TensorWord& a, const TensorWord& b) {
  TensorWord out = a;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  return out;
}

ObjectLabel default_label() { return ObjectLabel::event("e"); }

std::string Generator::to_string() const {
  if (kind == Kind::Crossing) {
    return (sign > 0 ? "x" : "X") + std::to_string(pos);
  }
  return "k" + std::to_string(pos) + (sign > 0 ? "+" : "-");
}

namespace {

Permutation permutation_of(std::size_t n, const std::vector<Generator>& word) {
  // at[q] = strand currently at position q
  std::vector<std::size_t> at(n);
  std::iota(at.begin(), at.end(), std::size_t{0});
  for (const auto& g : word) {
    if (g.kind == Generator::Kind::Crossing) std::swap(at[g.pos - 1], at[g.pos]);
  }
  Permutation perm(n);
  for (std::size_t q = 0; q < n; ++q) perm[at[q]] = q;
  return perm;
}

TensorWord permute_word(const TensorWord& w, const Permutation& perm) {
  TensorWord out = w;
  for (std::size_t p = 0; p < perm.size(); ++p) out.labels[perm[p]] = w.labels[p];
  return out;
}

}  // namespace

FramedBraid::FramedBraid(std::size_t strands, std::vector<Generator> word,
                         TensorWord domain)
    : strands_(strands), word_(std::move(word)), domain_(std::move(domain)) {
  if (domain_.size() != strands_) {
    throw InvalidArgument("domain word has " + std::to_string(domain_.size()) +
                          " labels for " + std::to_string(strands_) +
                          " strands");
  }
  check_word();
  codomain_ = permute_word(domain_, permutation_of(strands_, word_));
}

FramedBraid::FramedBraid(std::size_t strands, std::vector<Generator> word)
    : FramedBraid(strands, std::move(word),
                  TensorWord::uniform(strands, default_label())) {}

FramedBraid FramedBraid::between(std::size_t strands,
                                 std::vector<Generator> word,
                                 TensorWord domain, TensorWord codomain) {
  if (domain.size() != strands || codomain.size() != strands) {
    throw InvalidArgument("boundary words must have one label per strand");
  }
  FramedBraid f;
  f.strands_ = strands;
  f.word_ = std::move(word);
  f.domain_ = std::move(domain);
  f.codomain_ = std::move(codomain);
  f.check_word();
  return f;
}

FramedBraid FramedBraid::identity(TensorWord domain) {
  const std::size_t n = domain.size();
  return FramedBraid(n, {}, std::move(domain));
}

FramedBraid FramedBraid::identity(std::size_t strands) {
  return FramedBraid(strands, {});
}

void FramedBraid::check_word() const {
  for (const auto& g : word_) {
    if (g.sign != 1 && g.sign != -1) {
      throw InvalidArgument("generator sign must be +1 or -1");
    }
    const bool ok = g.kind == Generator::Kind::Crossing
                        ? (g.pos >= 1 && g.pos + 1 <= strands_)
                        : (g.pos >= 1 && g.pos <= strands_);
    if (!ok) {
      throw InvalidArgument("generator " + g.to_string() +
                            " out of range for " + std::to_string(strands_) +
                            " strands");
    }
  }
}

std::string FramedBraid::to_string() const {
  std::ostringstream os;
  os << strands_ << ":";
  for (const auto& g : word_) os << ' ' << g.to_string();
  return os.str();
}

FramedBraid compose_braids(const FramedBraid& f, const FramedBraid& g) {
  if (f.strands() != g.strands() || !(f.codomain() == g.domain())) {
    throw CompositionError("cannot compose: codomain " +
                           f.codomain().to_string() + " != domain " +
                           g.domain().to_string());
  }
  auto word = f.word();
  word.insert(word.end(), g.word().begin(), g.word().end());
  return FramedBraid::between(f.strands(), std::move(word), f.domain(),
                              g.codomain());
}

FramedBraid tensor_braids(const FramedBraid& f, const FramedBraid& g) {
  auto word = f.word();
  for (auto gen : g.word()) {
    gen.pos += f.strands();
    word.push_back(gen);
  }
  return FramedBraid::between(f.strands() + g.strands(), std::move(word),
                              f.domain() * g.domain(),
                              f.codomain() * g.codomain());
}

Permutation braid_permutation(const FramedBraid& f) {
  return permutation_of(f.strands(), f.word());
}

bool can_close(const FramedBraid& f) { return f.domain() == f.codomain(); }

ClosedBraid::ClosedBraid(FramedBraid f,
                         std::vector<std::vector<std::size_t>> comps)
    : underlying_(std::move(f)),
      components_(std::move(comps)),
      owner_(underlying_.strands()) {
  for (std::size_t c = 0; c < components_.size(); ++c) {
    for (auto p : components_[c]) owner_[p] = c;
  }
}

ClosedBraid close(const FramedBraid& f) {
  if (!can_close(f)) {
    throw ClosureError("braid does not close: domain " +
                       f.domain().to_string() + " != codomain " +
                       f.codomain().to_string());
  }
  const auto perm = braid_permutation(f);
  std::vector<bool> seen(perm.size(), false);
  std::vector<std::vector<std::size_t>> comps;
  // Scanning positions in increasing order yields components ordered by
  // their smallest position.
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> cycle;
    for (std::size_t p = start; !seen[p]; p = perm[p]) {
      seen[p] = true;
      cycle.push_back(p);
    }
    std::sort(cycle.begin(), cycle.end());
    comps.push_back(std::move(cycle));
  }
  return ClosedBraid(f, std::move(comps));
}

CrossingRecord crossing_record(
    const FramedBraid& f,
    const std::vector<std::vector<std::size_t>>& components) {
  const std::size_t n = f.strands();
  const std::size_t c = components.size();
  std::vector<std::size_t> owner(n, c);
  for (std::size_t k = 0; k < c; ++k) {
    for (auto p : components[k]) {
      if (p >= n || owner[p] != c) {
        throw InvalidArgument("components must partition the strands");
      }
      owner[p] = k;
    }
  }
  if (std::find(owner.begin(), owner.end(), c) != owner.end()) {
    throw InvalidArgument("components must cover every strand");
  }

  CrossingRecord rec{components, std::vector<std::int64_t>(c * c, 0)};
  std::vector<std::size_t> at(n);
  std::iota(at.begin(), at.end(), std::size_t{0});
  for (const auto& g : f.word()) {
    if (g.kind == Generator::Kind::Kink) {
      const auto k = owner[at[g.pos - 1]];
      rec.counts[k * c + k] += g.sign;
      continue;
    }
    const auto a = owner[at[g.pos - 1]];
    const auto b = owner[at[g.pos]];
    if (a == b) {
      rec.counts[a * c + a] += g.sign;
    } else {
      rec.counts[a * c + b] += g.sign;
      rec.counts[b * c + a] += g.sign;
    }
    std::swap(at[g.pos - 1], at[g.pos]);
  }
  return rec;
}

CrossingRecord linking_data(const ClosedBraid& c) {
  return crossing_record(c.underlying(), c.components());
}

namespace {

Cabling double_strands(const FramedBraid& f, const std::vector<bool>& doubled) {
  const std::size_t n = f.strands();
  std::vector<std::size_t> at(n);
  std::iota(at.begin(), at.end(), std::size_t{0});
  std::vector<std::size_t> start(n);

  // start[q] = one-based new position of the block holding old position q
  auto layout = [&] {
    std::size_t next = 1;
    for (std::size_t q = 0; q < n; ++q) {
      start[q] = next;
      next += doubled[at[q]] ? 2 : 1;
    }
  };

  std::vector<Generator> word;
  for (const auto& g : f.word()) {
    layout();
    const std::size_t q = g.pos - 1;
    const std::size_t base = start[q];
    if (g.kind == Generator::Kind::Kink) {
      if (!doubled[at[q]]) {
        word.push_back(Generator::kink(base, g.sign));
      } else {
        word.push_back(Generator::kink(base, g.sign));
        word.push_back(Generator::kink(base + 1, g.sign));
        word.push_back(Generator::crossing(base, g.sign));
        word.push_back(Generator::crossing(base, g.sign));
      }
      continue;
    }
    const std::size_t a = doubled[at[q]] ? 2 : 1;
    const std::size_t b = doubled[at[q + 1]] ? 2 : 1;
    // Carry each strand of the left block, rightmost first, across the right
    // block; block-internal order is preserved.
    for (std::size_t k = a; k-- > 0;) {
      for (std::size_t j = 0; j < b; ++j) {
        word.push_back(Generator::crossing(base + k + j, g.sign));
      }
    }
    std::swap(at[q], at[q + 1]);
  }

  TensorWord domain;
  std::vector<std::size_t> parent;
  std::vector<bool> is_copy;
  for (std::size_t q = 0; q < n; ++q) {
    if (doubled[q]) {
      domain.labels.push_back(ObjectLabel::shadow(f.domain()[q].thickened));
      parent.push_back(q);
      is_copy.push_back(true);
    }
    domain.labels.push_back(f.domain()[q]);
    parent.push_back(q);
    is_copy.push_back(false);
  }
  const std::size_t width = domain.size();
  auto codomain = domain;
  return {FramedBraid::between(width, std::move(word), std::move(domain),
                               std::move(codomain)),
          std::move(parent), std::move(is_copy)};
}

std::vector<bool> component_mask(const FramedBraid& f,
                                 std::span<const std::size_t> strands) {
  const auto closed = close(f);
  if (strands.empty()) {
    throw InvalidArgument("cabling needs a nonempty strand set");
  }
  std::vector<std::size_t> sorted(strands.begin(), strands.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() >= f.strands()) {
    throw InvalidArgument("strand position out of range");
  }
  const auto& comp = closed.components()[closed.component_of(sorted.front())];
  if (sorted != comp) {
    throw InvalidArgument("strand set is not a closure component");
  }
  std::vector<bool> mask(f.strands(), false);
  for (auto p : comp) mask[p] = true;
  return mask;
}

}  // namespace

FramedBraid shadow_double(const FramedBraid& f,
                          std::span<const std::size_t> strands) {
  return double_strands(f, component_mask(f, strands)).braid;
}

Cabling shadow_double_traced(const FramedBraid& f, std::size_t component) {
  const auto closed = close(f);
  if (component >= closed.component_count()) {
    throw InvalidArgument("component index " + std::to_string(component + 1) +
                          " out of range");
  }
  return double_strands(
      f, component_mask(f, closed.components()[component]));
}

FramedBraid shadow_double(const FramedBraid& f, std::size_t component) {
  return shadow_double_traced(f, component).braid;
}

Cabling band_sum_add_traced(const FramedBraid& f, std::size_t target,
                            std::size_t over) {
  const auto closed = close(f);
  if (target == over) {
    throw InvalidArgument("cannot band-sum a component with itself");
  }
  if (target >= closed.component_count() ||
      over >= closed.component_count()) {
    throw InvalidArgument("component index out of range");
  }
  auto cab = shadow_double_traced(f, over);
  const auto& braid = cab.braid;
  const std::size_t n = braid.strands();

  std::size_t copy = n;
  std::size_t host = n;
  for (std::size_t p = 0; p < n; ++p) {
    if (cab.is_copy[p]) {
      if (copy == n) copy = p;
    } else if (host == n && closed.component_of(cab.parent[p]) == target) {
      host = p;
    }
  }

  // Conjugating route: carry the copy next to the host strand, splice with a
  // positive twist plus a compensating negative curl, then undo the route.
  // Routing crossings come back with opposite signs once the two strands
  // belong to one component, so no linking entry changes.
  std::vector<Generator> route;
  std::vector<Generator> unroute;
  std::size_t splice = 0;
  if (copy < host) {
    for (std::size_t p = copy + 1; p + 1 <= host; ++p) {
      route.push_back(Generator::crossing(p, +1));
    }
    splice = host;
  } else {
    for (std::size_t p = copy; p >= host + 2; --p) {
      route.push_back(Generator::crossing(p, +1));
    }
    splice = host + 1;
  }
  for (auto it = route.rbegin(); it != route.rend(); ++it) {
    unroute.push_back(Generator::crossing(it->pos, -1));
  }

  std::vector<Generator> word = route;
  word.push_back(Generator::crossing(splice, +1));
  word.push_back(Generator::kink(splice, -1));
  word.insert(word.end(), unroute.begin(), unroute.end());
  word.insert(word.end(), braid.word().begin(), braid.word().end());

  // The shadow takes on the identity of the strand it was fused with.
  TensorWord domain = braid.domain();
  const ObjectLabel& host_label = domain[host];
  const std::string element =
      host_label.identity().value_or(host_label.to_string());
  for (std::size_t p = 0; p < n; ++p) {
    if (!cab.is_copy[p]) continue;
    auto& label = domain.labels[p];
    label = ObjectLabel{
        specialize(std::get<Variable>(label.base), element),
        host_label.thickened, host_label.dual};
  }
  auto codomain = domain;
  cab.braid = FramedBraid::between(n, std::move(word), std::move(domain),
                                   std::move(codomain));
  return cab;
}

FramedBraid band_sum_add(const FramedBraid& f, std::size_t target,
                         std::size_t over) {
  return band_sum_add_traced(f, target, over).braid;
}

std::vector<std::size_t> component_lineage(const ClosedBraid& original,
                                           const Cabling& cabling,
                                           const ClosedBraid& derived) {
  std::vector<std::size_t> out;
  out.reserve(derived.component_count());
  for (const auto& comp : derived.components()) {
    std::optional<std::size_t> from_original;
    std::optional<std::size_t> from_copy;
    for (auto p : comp) {
      const auto k = original.component_of(cabling.parent.at(p));
      auto& slot = cabling.is_copy.at(p) ? from_copy : from_original;
      if (slot && *slot != k) {
        throw MalformedDiagram("derived component mixes original components");
      }
      slot = k;
    }
    out.push_back(from_original ? *from_original : *from_copy);
  }
  return out;
}

}  // namespace kirbycat
