#include "kirbycat/event_site.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "kirbycat/errors.hpp"

namespace kirbycat {

FiniteFreeCategory::FiniteFreeCategory(std::vector<std::string> objects,
                                       std::vector<Arrow> arrows)
    : objects_(std::move(objects)),
      arrows_(std::move(arrows)),
      incoming_(objects_.size()) {
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    for (std::size_t j = i + 1; j < objects_.size(); ++j) {
      if (objects_[i] == objects_[j]) {
        throw InvalidArgument("duplicate object " + objects_[i]);
      }
    }
  }
  std::vector<std::size_t> indegree(objects_.size(), 0);
  std::vector<std::vector<std::size_t>> outgoing(objects_.size());
  for (std::size_t a = 0; a < arrows_.size(); ++a) {
    const auto& arr = arrows_[a];
    if (arr.source >= objects_.size() || arr.target >= objects_.size()) {
      throw InvalidArgument("arrow " + arr.name + " has an unknown endpoint");
    }
    incoming_[arr.target].push_back(a);
    outgoing[arr.source].push_back(a);
    ++indegree[arr.target];
  }
  // Kahn's algorithm: every object must be removable.
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < objects_.size(); ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    const auto v = ready.back();
    ready.pop_back();
    ++removed;
    for (auto a : outgoing[v]) {
      if (--indegree[arrows_[a].target] == 0) ready.push_back(arrows_[a].target);
    }
  }
  if (removed != objects_.size()) {
    throw Unsupported("generator graph has a cycle; only acyclic categories "
                      "have finitely many morphisms");
  }
}

std::optional<std::size_t> FiniteFreeCategory::find_object(
    const std::string& name) const {
  auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - objects_.begin());
}

std::size_t FiniteFreeCategory::object(const std::string& name) const {
  auto idx = find_object(name);
  if (!idx) throw InvalidArgument("unknown object " + name);
  return *idx;
}

Morphism FiniteFreeCategory::identity(std::size_t object) const {
  if (object >= objects_.size()) throw InvalidArgument("unknown object index");
  return {object, object, {}};
}

Morphism FiniteFreeCategory::generator(std::size_t arrow) const {
  const auto& a = arrows_.at(arrow);
  return {a.source, a.target, {arrow}};
}

Morphism FiniteFreeCategory::compose(const Morphism& h,
                                     const Morphism& g) const {
  if (g.target != h.source) {
    throw CompositionError("cannot compose " + describe(h) + " after " +
                           describe(g));
  }
  Morphism out{g.source, h.target, g.path};
  out.path.insert(out.path.end(), h.path.begin(), h.path.end());
  return out;
}

std::vector<Morphism> FiniteFreeCategory::morphisms_into(
    std::size_t object) const {
  if (object >= objects_.size()) throw InvalidArgument("unknown object index");
  std::vector<Morphism> out{identity(object)};
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Morphism h = out[k];
    for (auto a : incoming_[h.source]) {
      Morphism m{arrows_[a].source, object, {a}};
      m.path.insert(m.path.end(), h.path.begin(), h.path.end());
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::size_t FiniteFreeCategory::depth(std::size_t object) const {
  std::size_t d = 0;
  for (const auto& m : morphisms_into(object)) d = std::max(d, m.degree());
  return d;
}

std::string FiniteFreeCategory::describe(const Morphism& m) const {
  if (m.path.empty()) return "id_" + objects_.at(m.source);
  std::string out;
  for (auto it = m.path.rbegin(); it != m.path.rend(); ++it) {
    if (!out.empty()) out += " o ";
    out += arrows_.at(*it).name;
  }
  return out;
}

std::size_t degree(const Morphism& m) { return m.degree(); }

Sieve sieve_geq(const FiniteFreeCategory& c, std::size_t object,
                std::size_t n) {
  if (object >= c.object_count()) {
    throw InvalidArgument("unknown object index " + std::to_string(object));
  }
  Sieve s{object, {}};
  for (auto& m : c.morphisms_into(object)) {
    if (m.degree() >= n) s.members.insert(std::move(m));
  }
  if (!is_sieve(c, s)) {
    throw MalformedDiagram("degree-graded family is not closed under "
                           "precomposition");
  }
  return s;
}

Sieve restrict_sieve(const FiniteFreeCategory& c, const Sieve& s,
                     const Morphism& psi) {
  if (psi.target != s.over) {
    throw InvalidArgument("restriction morphism " + c.describe(psi) +
                          " does not end at " + c.objects().at(s.over));
  }
  Sieve out{psi.source, {}};
  for (auto& h : c.morphisms_into(psi.source)) {
    if (s.contains(c.compose(psi, h))) out.members.insert(std::move(h));
  }
  return out;
}

bool is_sieve(const FiniteFreeCategory& c, const Sieve& s) {
  for (const auto& h : s.members) {
    if (h.target != s.over) return false;
    for (std::size_t a = 0; a < c.arrows().size(); ++a) {
      if (c.arrows()[a].target != h.source) continue;
      if (!s.contains(c.compose(h, c.generator(a)))) return false;
    }
  }
  return true;
}

std::optional<std::size_t> covering_degree(const FiniteFreeCategory& c,
                                           const Sieve& s) {
  const auto all = c.morphisms_into(s.over);
  std::size_t depth = 0;
  for (const auto& m : all) depth = std::max(depth, m.degree());
  for (std::size_t n = 0; n <= depth + 1; ++n) {
    std::size_t expected = 0;
    bool match = true;
    for (const auto& m : all) {
      const bool in = m.degree() >= n;
      expected += in;
      if (in != s.contains(m)) {
        match = false;
        break;
      }
    }
    if (match && expected == s.members.size()) return n;
  }
  return std::nullopt;
}

namespace {

// Morphisms into one object arranged as the tree of precompositions, with
// enumeration of every sieve (subtree-closed subset).
class SieveTree {
 public:
  SieveTree(const FiniteFreeCategory& c, std::size_t object)
      : nodes_(c.morphisms_into(object)), children_(nodes_.size()) {
    std::map<Morphism, std::size_t> index;
    for (std::size_t i = 0; i < nodes_.size(); ++i) index[nodes_[i]] = i;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& m = nodes_[i];
      if (m.path.empty()) continue;
      Morphism parent{c.arrows()[m.path.front()].target, m.target,
                      {m.path.begin() + 1, m.path.end()}};
      children_[index.at(parent)].push_back(i);
    }
  }

  // Calls visit(sieve) for every sieve until it returns false. Throws
  // Unsupported past `limit` sieves.
  void for_each_sieve(std::size_t over, std::size_t limit,
                      const std::function<bool(const Sieve&)>& visit) {
    over_ = over;
    limit_ = limit;
    count_ = 0;
    visit_ = &visit;
    member_.assign(nodes_.size(), false);
    std::vector<std::size_t> pending{0};
    recurse(pending);
  }

  std::size_t visited() const { return count_; }

 private:
  void mark(std::size_t node, bool value) {
    member_[node] = value;
    for (auto ch : children_[node]) mark(ch, value);
  }

  bool recurse(std::vector<std::size_t>& pending) {
    if (pending.empty()) {
      if (++count_ > limit_) {
        throw Unsupported("too many sieves to enumerate exhaustively");
      }
      Sieve s{over_, {}};
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (member_[i]) s.members.insert(nodes_[i]);
      }
      return (*visit_)(s);
    }
    const auto node = pending.back();
    pending.pop_back();
    bool go = true;
    // Either the whole subtree is in the sieve, or the node is out and each
    // child subtree is decided independently.
    mark(node, true);
    go = recurse(pending);
    mark(node, false);
    if (go) {
      const auto before = pending.size();
      pending.insert(pending.end(), children_[node].begin(),
                     children_[node].end());
      go = recurse(pending);
      pending.resize(before);
    }
    pending.push_back(node);
    return go;
  }

  std::vector<Morphism> nodes_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<bool> member_;
  std::size_t over_ = 0;
  std::size_t limit_ = 0;
  std::size_t count_ = 0;
  const std::function<bool(const Sieve&)>* visit_ = nullptr;
};

std::string describe_sieve(const FiniteFreeCategory& c, const Sieve& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& m : s.members) {
    if (!first) out += ", ";
    out += c.describe(m);
    first = false;
  }
  return out + "}";
}

}  // namespace

TopologyReport check_topology(const FiniteFreeCategory& c,
                              std::size_t object_bound) {
  if (c.object_count() > object_bound) {
    throw Unsupported("category has " + std::to_string(c.object_count()) +
                      " objects, bound is " + std::to_string(object_bound));
  }
  TopologyReport report;
  auto violate = [&](bool& flag, const std::string& axiom, std::size_t obj,
                     std::string witness) {
    flag = false;
    report.violations.push_back({axiom, c.objects()[obj], std::move(witness)});
  };

  for (std::size_t e = 0; e < c.object_count(); ++e) {
    const std::size_t depth = c.depth(e);
    std::vector<Sieve> covering;
    for (std::size_t n = 0; n <= depth + 1; ++n) {
      covering.push_back(sieve_geq(c, e, n));
    }
    report.empty_covering_objects.push_back(c.objects()[e]);

    // (a) the maximal sieve covers.
    Sieve maximal{e, {}};
    for (auto& m : c.morphisms_into(e)) maximal.members.insert(std::move(m));
    if (!covering_degree(c, maximal)) {
      violate(report.maximal_covering, "maximal", e,
              describe_sieve(c, maximal));
    }

    // (b) stability, with the exact degree shift of restrictions.
    for (std::size_t n = 0; n < covering.size(); ++n) {
      for (const auto& psi : c.morphisms_into(e)) {
        const auto r = restrict_sieve(c, covering[n], psi);
        if (!covering_degree(c, r)) {
          violate(report.stability, "stability", e,
                  "restriction of degree>=" + std::to_string(n) + " along " +
                      c.describe(psi) + " is " + describe_sieve(c, r));
        }
        const std::size_t shift =
            n > psi.degree() ? n - psi.degree() : std::size_t{0};
        if (!(r == sieve_geq(c, psi.source, shift))) {
          report.degree_shift_law = false;
        }
        if (covering[n].contains(psi) && !(r == sieve_geq(c, psi.source, 0))) {
          report.member_restriction_maximal = false;
        }
      }
    }

    // (c) transitivity over every sieve on e; stops at the first witness.
    SieveTree tree(c, e);
    tree.for_each_sieve(e, kSieveEnumerationLimit, [&](const Sieve& r) {
      if (covering_degree(c, r)) return true;
      for (std::size_t n = 0; n < covering.size(); ++n) {
        bool local = true;
        for (const auto& f : covering[n].members) {
          if (!covering_degree(c, restrict_sieve(c, r, f))) {
            local = false;
            break;
          }
        }
        if (local) {
          violate(report.transitivity, "transitivity", e,
                  "sieve " + describe_sieve(c, r) +
                      " is locally covering along degree>=" +
                      std::to_string(n) + " = " +
                      describe_sieve(c, covering[n]) +
                      " but is not degree-graded");
          return false;
        }
      }
      return true;
    });
    report.sieves_checked += tree.visited();
  }
  return report;
}

std::vector<Morphism> flows(const FiniteFreeCategory& c, std::size_t from,
                            std::size_t to, std::size_t max_len) {
  if (from >= c.object_count() || to >= c.object_count()) {
    throw InvalidArgument("unknown object index");
  }
  std::vector<Morphism> out;
  std::vector<Morphism> layer{c.identity(from)};
  for (std::size_t len = 0; !layer.empty(); ++len) {
    std::vector<Morphism> next;
    for (const auto& m : layer) {
      if (m.target == to) out.push_back(m);
      if (len == max_len) continue;
      for (std::size_t a = 0; a < c.arrows().size(); ++a) {
        if (c.arrows()[a].source == m.target) {
          next.push_back(c.compose(c.generator(a), m));
        }
      }
    }
    layer = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kirbycat
