#include "kirbycat/kirby_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "kirbycat/errors.hpp"

namespace kirbycat {

LinkingMatrix::LinkingMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}

LinkingMatrix::LinkingMatrix(std::size_t n, std::vector<Integer> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) {
    throw InvalidArgument("linking matrix needs " + std::to_string(n_ * n_) +
                          " entries, got " + std::to_string(entries_.size()));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) {
        throw InvalidArgument("linking matrix is not symmetric at (" +
                              std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ")");
      }
    }
  }
}

namespace {

std::vector<Integer> flatten(
    std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<Integer> out;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) {
      throw InvalidArgument("linking matrix rows must be square");
    }
    for (long v : row) out.emplace_back(v);
  }
  return out;
}

}  // namespace

LinkingMatrix::LinkingMatrix(
    std::initializer_list<std::initializer_list<long>> rows)
    : LinkingMatrix(rows.size(), flatten(rows)) {}

void LinkingMatrix::set(std::size_t i, std::size_t j, const Integer& v) {
  entries_.at(i * n_ + j) = v;
  entries_.at(j * n_ + i) = v;
}

LinkingMatrix LinkingMatrix::permuted(
    const std::vector<std::size_t>& order) const {
  if (order.size() != n_) {
    throw InvalidArgument("permutation size does not match matrix");
  }
  LinkingMatrix out(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t l = 0; l < n_; ++l) {
      out.entries_[k * n_ + l] = (*this)(order[k], order[l]);
    }
  }
  return out;
}

std::string LinkingMatrix::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) out += "; ";
    for (std::size_t j = 0; j < n_; ++j) {
      if (j) out += ' ';
      out += (*this)(i, j).get_str();
    }
  }
  return out + "]";
}

std::string BoundaryRecord::to_string() const {
  std::ostringstream os;
  os << "H1 = ";
  bool first = true;
  for (std::size_t i = 0; i < h1_free_rank; ++i, first = false) {
    os << (first ? "" : " + ") << "Z";
  }
  for (const auto& d : h1_torsion) {
    os << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  if (first) os << "0";
  os << ", b2 = " << b2 << ", euler = " << euler << ", sigma = " << sigma;
  return os.str();
}

LinkingMatrix from_crossing_record(const CrossingRecord& rec) {
  const std::size_t n = rec.size();
  LinkingMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.set(i, i, Integer(static_cast<long>(rec.at(i, i))));
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto c = rec.at(i, j);
      if (c % 2 != 0) {
        throw MalformedDiagram("odd crossing count " + std::to_string(c) +
                               " between components " +
                               std::to_string(i + 1) + " and " +
                               std::to_string(j + 1));
      }
      out.set(i, j, Integer(static_cast<long>(c / 2)));
    }
  }
  return out;
}

LinkingMatrix from_closed_braid(const ClosedBraid& c) {
  return from_crossing_record(linking_data(c));
}

LinkingMatrix blow_up(const LinkingMatrix& a, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("blow-up sign must be +-1");
  const std::size_t n = a.size();
  LinkingMatrix out(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) out.set(i, j, a(i, j));
  }
  out.set(n, n, sign);
  return out;
}

LinkingMatrix blow_down(const LinkingMatrix& a, std::size_t i) {
  if (i >= a.size()) {
    throw InvalidArgument("component index " + std::to_string(i + 1) +
                          " out of range");
  }
  if (abs(a(i, i)) != 1) {
    throw NotBlowdownable("component " + std::to_string(i + 1) +
                          " has framing " + a(i, i).get_str() + ", not +-1");
  }
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j != i && a(i, j) != 0) {
      throw NotBlowdownable("component " + std::to_string(i + 1) +
                            " links component " + std::to_string(j + 1));
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j != i) keep.push_back(j);
  }
  LinkingMatrix out(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    for (std::size_t l = k; l < keep.size(); ++l) {
      out.set(k, l, a(keep[k], keep[l]));
    }
  }
  return out;
}

LinkingMatrix handle_slide(const LinkingMatrix& a, std::size_t i,
                           std::size_t j, int sign) {
  if (i == j) throw InvalidArgument("cannot slide a component over itself");
  if (i >= a.size() || j >= a.size()) {
    throw InvalidArgument("component index out of range");
  }
  if (sign != 1 && sign != -1) throw InvalidArgument("slide sign must be +-1");
  const std::size_t n = a.size();
  LinkingMatrix out = a;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    out.set(i, k, a(i, k) + sign * a(j, k));
  }
  out.set(i, i, a(i, i) + a(j, j) + 2 * sign * a(i, j));
  return out;
}

std::int64_t signature(const LinkingMatrix& a) {
  const std::size_t n = a.size();
  std::vector<mpq_class> m(a.entries().begin(), a.entries().end());
  auto at = [&](std::size_t r, std::size_t c) -> mpq_class& {
    return m[r * n + c];
  };
  std::vector<bool> active(n, true);
  std::int64_t sig = 0;

  for (;;) {
    std::optional<std::size_t> piv;
    for (std::size_t i = 0; i < n && !piv; ++i) {
      if (active[i] && sgn(at(i, i)) != 0) piv = i;
    }
    if (piv) {
      const std::size_t p = *piv;
      const mpq_class d = at(p, p);
      sig += sgn(d) > 0 ? 1 : -1;
      active[p] = false;
      for (std::size_t r = 0; r < n; ++r) {
        if (!active[r] || sgn(at(r, p)) == 0) continue;
        const mpq_class f = at(r, p) / d;
        for (std::size_t c = 0; c < n; ++c) {
          if (active[c]) at(r, c) -= f * at(p, c);
        }
      }
      continue;
    }
    // Zero diagonal: a nonzero off-diagonal entry spans a hyperbolic plane
    // contributing +1 and -1. Take its Schur complement.
    std::optional<std::pair<std::size_t, std::size_t>> pair;
    for (std::size_t i = 0; i < n && !pair; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (active[j] && sgn(at(i, j)) != 0) {
          pair = {i, j};
          break;
        }
      }
    }
    if (!pair) break;
    const auto [i, j] = *pair;
    const mpq_class b = at(i, j);
    active[i] = active[j] = false;
    std::vector<std::size_t> rest;
    for (std::size_t r = 0; r < n; ++r) {
      if (active[r]) rest.push_back(r);
    }
    for (auto r : rest) {
      for (auto c : rest) {
        at(r, c) -= (at(r, i) * at(j, c) + at(r, j) * at(i, c)) / b;
      }
    }
  }
  return sig;
}

Integer determinant(const LinkingMatrix& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  std::vector<Integer> m = a.entries();
  auto at = [&](std::size_t r, std::size_t c) -> Integer& {
    return m[r * n + c];
  };
  Integer prev = 1;
  int sign = 1;
  // Bareiss fraction-free elimination.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && at(r, k) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(at(k, c), at(r, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

SmithForm smith_normal_form(std::size_t rows, std::size_t cols,
                            std::vector<Integer> entries) {
  if (entries.size() != rows * cols) {
    throw InvalidArgument("matrix entry count does not match its shape");
  }
  auto at = [&](std::size_t r, std::size_t c) -> Integer& {
    return entries[r * cols + c];
  };
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols; ++c) std::swap(at(a, c), at(b, c));
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows; ++r) std::swap(at(r, a), at(r, b));
  };

  SmithForm out;
  const std::size_t limit = std::min(rows, cols);
  for (std::size_t t = 0; t < limit; ++t) {
    bool exhausted = false;
    for (;;) {
      // Pivot: smallest nonzero |entry|, ties to the lowest row-major index.
      std::optional<std::pair<std::size_t, std::size_t>> piv;
      Integer best;
      for (std::size_t r = t; r < rows; ++r) {
        for (std::size_t c = t; c < cols; ++c) {
          if (at(r, c) == 0) continue;
          Integer v = abs(at(r, c));
          if (!piv || v < best) {
            piv = {r, c};
            best = v;
          }
        }
      }
      if (!piv) {
        exhausted = true;
        break;
      }
      swap_rows(t, piv->first);
      swap_cols(t, piv->second);

      bool dirty = false;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (at(r, t) == 0) continue;
        const Integer q = at(r, t) / at(t, t);
        for (std::size_t c = t; c < cols; ++c) at(r, c) -= q * at(t, c);
        dirty = dirty || at(r, t) != 0;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (at(t, c) == 0) continue;
        const Integer q = at(t, c) / at(t, t);
        for (std::size_t r = t; r < rows; ++r) at(r, c) -= q * at(r, t);
        dirty = dirty || at(t, c) != 0;
      }
      if (dirty) continue;

      std::optional<std::size_t> offender;
      for (std::size_t r = t + 1; r < rows && !offender; ++r) {
        for (std::size_t c = t + 1; c < cols; ++c) {
          if (at(r, c) % at(t, t) != 0) {
            offender = r;
            break;
          }
        }
      }
      if (!offender) break;
      for (std::size_t c = t; c < cols; ++c) at(t, c) += at(*offender, c);
    }
    if (exhausted) break;
    out.invariant_factors.push_back(abs(at(t, t)));
  }
  out.free_rank = rows - out.invariant_factors.size();
  return out;
}

SmithForm smith(const LinkingMatrix& a) {
  return smith_normal_form(a.size(), a.size(), a.entries());
}

BoundaryRecord boundary_record(const LinkingMatrix& a) {
  const auto snf = smith(a);
  BoundaryRecord rec;
  rec.h1_free_rank = snf.free_rank;
  for (const auto& d : snf.invariant_factors) {
    if (d > 1) rec.h1_torsion.push_back(d);
  }
  rec.b2 = a.size();
  rec.euler = 1 + a.size();
  rec.sigma = signature(a);
  return rec;
}

std::string KirbyMove::to_string() const {
  const char* s = sign > 0 ? "+" : "-";
  switch (kind) {
    case Kind::BlowUp:
      return std::string("blow_up ") + s;
    case Kind::BlowDown:
      return "blow_down " + std::to_string(i + 1);
    case Kind::Slide:
      return "slide " + std::to_string(i + 1) + " " + std::to_string(j + 1) +
             " " + s;
  }
  return {};
}

LinkingMatrix apply(const LinkingMatrix& a, const KirbyMove& m) {
  switch (m.kind) {
    case KirbyMove::Kind::BlowUp:
      return blow_up(a, m.sign);
    case KirbyMove::Kind::BlowDown:
      return blow_down(a, m.i);
    case KirbyMove::Kind::Slide:
      return handle_slide(a, m.i, m.j, m.sign);
  }
  return a;
}

namespace {

class Canonicalizer {
 public:
  explicit Canonicalizer(const LinkingMatrix& a) : a_(a), n_(a.size()) {
    used_.assign(n_, false);
  }

  CanonicalForm run() {
    order_.clear();
    seq_.clear();
    search();
    return {a_.permuted(best_order_), best_order_};
  }

 private:
  // Compares the current sequence against the best one over their common
  // prefix: <0 smaller, 0 equal, >0 larger.
  int compare_prefix() const {
    if (!have_best_) return -1;
    for (std::size_t k = 0; k < seq_.size(); ++k) {
      const int c = cmp(seq_[k], best_seq_[k]);
      if (c != 0) return c;
    }
    return 0;
  }

  void search() {
    const std::size_t depth = order_.size();
    if (depth == n_) {
      if (!have_best_ || compare_prefix() < 0) {
        best_seq_ = seq_;
        best_order_ = order_;
        have_best_ = true;
      }
      return;
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (used_[v]) continue;
      used_[v] = true;
      order_.push_back(v);
      const std::size_t mark = seq_.size();
      for (std::size_t r = 0; r <= depth; ++r) seq_.push_back(a_(order_[r], v));
      if (compare_prefix() <= 0) search();
      seq_.resize(mark);
      order_.pop_back();
      used_[v] = false;
    }
  }

  const LinkingMatrix& a_;
  std::size_t n_;
  std::vector<bool> used_;
  std::vector<std::size_t> order_;
  std::vector<Integer> seq_;
  bool have_best_ = false;
  std::vector<Integer> best_seq_;
  std::vector<std::size_t> best_order_;
};

std::vector<KirbyMove> moves_from(const LinkingMatrix& m) {
  std::vector<KirbyMove> out;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool isolated = abs(m(i, i)) == 1;
    for (std::size_t j = 0; j < n && isolated; ++j) {
      if (j != i && m(i, j) != 0) isolated = false;
    }
    if (isolated) out.push_back(KirbyMove::blow_down(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      out.push_back(KirbyMove::slide(i, j, +1));
      out.push_back(KirbyMove::slide(i, j, -1));
    }
  }
  if (n < kSearchMaxComponents) {
    out.push_back(KirbyMove::blow_up(+1));
    out.push_back(KirbyMove::blow_up(-1));
  }
  return out;
}

}  // namespace

CanonicalForm canonical_form(const LinkingMatrix& a) {
  if (a.empty()) return {a, {}};
  return Canonicalizer(a).run();
}

EquivalenceVerdict kirby_equivalent(const LinkingMatrix& a,
                                    const LinkingMatrix& b,
                                    std::size_t depth) {
  if (depth == 0) throw InvalidArgument("search depth must be positive");
  if (a.size() > kSearchMaxComponents || b.size() > kSearchMaxComponents) {
    throw Unsupported("equivalence search supports at most " +
                      std::to_string(kSearchMaxComponents) + " components");
  }
  const auto ra = boundary_record(a);
  const auto rb = boundary_record(b);
  if (ra.h1_free_rank != rb.h1_free_rank || ra.h1_torsion != rb.h1_torsion) {
    return Distinguished{"h1"};
  }

  const auto target = canonical_form(b);
  struct Node {
    LinkingMatrix matrix;
    std::size_t parent;
    KirbyMove move;
    std::vector<std::size_t> order;  // canonical order of `matrix`
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;

  auto finish = [&](std::size_t idx) {
    Equivalent eq;
    for (std::size_t k = idx; k != 0; k = nodes[k].parent) {
      eq.path.push_back(nodes[k].move);
    }
    std::reverse(eq.path.begin(), eq.path.end());
    const auto& ox = nodes[idx].order;
    eq.relabel.assign(ox.size(), 0);
    for (std::size_t k = 0; k < ox.size(); ++k) eq.relabel[target.order[k]] = ox[k];
    return eq;
  };

  auto start = canonical_form(a);
  nodes.push_back({a, 0, {}, start.order});
  seen.emplace(start.matrix.to_string(), 0);
  if (start.matrix == target.matrix) return finish(0);

  std::vector<std::size_t> frontier{0};
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<std::size_t> next;
    for (auto idx : frontier) {
      const LinkingMatrix current = nodes[idx].matrix;
      for (const auto& mv : moves_from(current)) {
        auto m2 = apply(current, mv);
        auto canon = canonical_form(m2);
        auto [it, inserted] =
            seen.emplace(canon.matrix.to_string(), nodes.size());
        if (!inserted) continue;
        nodes.push_back({std::move(m2), idx, mv, std::move(canon.order)});
        if (canon.matrix == target.matrix) return finish(nodes.size() - 1);
        next.push_back(nodes.size() - 1);
      }
    }
    frontier = std::move(next);
  }
  return Unknown{nodes.size()};
}

}  // namespace kirbycat
