#include "kirbycat/twisted_operad.hpp"

#include <algorithm>
#include <sstream>

#include "kirbycat/errors.hpp"

namespace kirbycat {

RectAffine RectAffine::identity(std::size_t k) {
  return {std::vector<AxisMap>(k)};
}

RectAffine RectAffine::after(const RectAffine& inner) const {
  if (inner.dim() != dim()) {
    throw CompositionError("cube dimensions differ");
  }
  RectAffine out;
  out.axes.reserve(dim());
  for (std::size_t t = 0; t < dim(); ++t) {
    const auto& o = axes[t];
    const auto& i = inner.axes[t];
    out.axes.push_back({o.a * i.a, o.a * i.b + o.b});
  }
  return out;
}

std::vector<Rational> RectAffine::apply(const std::vector<Rational>& x) const {
  if (x.size() != dim()) throw InvalidArgument("point has wrong dimension");
  std::vector<Rational> y;
  y.reserve(dim());
  for (std::size_t t = 0; t < dim(); ++t) {
    y.push_back(axes[t].a * x[t] + axes[t].b);
  }
  return y;
}

namespace {

std::string box_string(const RectAffine& r) {
  std::string out = "[";
  for (std::size_t t = 0; t < r.dim(); ++t) {
    if (t) out += "; ";
    out += r.axes[t].a.get_str() + "," + r.axes[t].b.get_str();
  }
  return out + "]";
}

bool disjoint(const RectAffine& x, const RectAffine& y) {
  for (std::size_t t = 0; t < x.dim(); ++t) {
    const auto& p = x.axes[t];
    const auto& q = y.axes[t];
    if (p.b + p.a <= q.b - q.a || q.b + q.a <= p.b - p.a) return true;
  }
  return false;
}

std::vector<Integer> add_twists(const std::vector<Integer>& x,
                                const std::vector<Integer>& y) {
  std::vector<Integer> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) out[t] = x[t] + y[t];
  return out;
}

std::vector<Integer> multiply_twists(const std::vector<Integer>& x,
                                     const std::vector<Integer>& y) {
  std::vector<Integer> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) out[t] = x[t] * y[t];
  return out;
}

using TwistRule = std::vector<Integer> (*)(const std::vector<Integer>&,
                                           const std::vector<Integer>&);

OperadMorphism compose_with(const OperadMorphism& outer,
                            const OperadMorphism& inner, TwistRule rule,
                            bool reversed) {
  if (inner.n != outer.m) {
    throw CompositionError("cannot compose: inner codomain <" +
                           std::to_string(inner.n) + "> but outer domain <" +
                           std::to_string(outer.m) + ">");
  }
  if (inner.k != outer.k) {
    throw CompositionError("cannot compose morphisms of different dimension");
  }
  OperadMorphism out;
  out.k = outer.k;
  out.m = inner.m;
  out.n = outer.n;
  out.alpha.assign(inner.m, 0);
  out.fibers.assign(outer.n, TwistedEmbedding{outer.k, {}});
  for (std::size_t i = 1; i <= inner.m; ++i) {
    const auto mid = inner.alpha.at(i - 1);
    if (mid == 0) continue;
    const auto j = outer.alpha.at(mid - 1);
    out.alpha[i - 1] = j;
    if (j == 0) continue;
    const auto& in_c = inner.fibers.at(mid - 1).components.at(i);
    const auto& out_c = outer.fibers.at(j - 1).components.at(mid);
    out.fibers[j - 1].components[i] = {
        reversed ? in_c.affine.after(out_c.affine)
                 : out_c.affine.after(in_c.affine),
                                       rule(out_c.twist, in_c.twist)};
  }
  return out;
}

}  // namespace

std::string OperadMorphism::to_string() const {
  std::ostringstream os;
  os << "k=" << k << " n=" << n << ":";
  for (std::size_t i = 1; i <= m; ++i) {
    const auto j = alpha.at(i - 1);
    os << ' ' << i << "->";
    if (j == 0) {
      os << '*';
      continue;
    }
    const auto& c = fibers.at(j - 1).components.at(i);
    os << j << ' ' << box_string(c.affine);
    if (!c.twist.empty()) {
      os << " t=";
      for (std::size_t t = 0; t < c.twist.size(); ++t) {
        if (t) os << ',';
        os << c.twist[t].get_str();
      }
    }
  }
  return os.str();
}

std::vector<std::string> validate(const TwistedEmbedding& e) {
  std::vector<std::string> out;
  for (const auto& [label, c] : e.components) {
    const std::string name = "component " + std::to_string(label);
    if (c.affine.dim() != e.k) {
      out.push_back(name + " has " + std::to_string(c.affine.dim()) +
                    " axes, expected " + std::to_string(e.k));
      continue;
    }
    if (c.twist.size() + 1 != e.k) {
      out.push_back(name + " has a twist of length " +
                    std::to_string(c.twist.size()));
    }
    for (std::size_t t = 0; t < e.k; ++t) {
      const auto& ax = c.affine.axes[t];
      if (sgn(ax.a) <= 0) {
        out.push_back(name + " axis " + std::to_string(t + 1) +
                      ": scale " + ax.a.get_str() + " is not positive");
      } else if (ax.b - ax.a < -1 || ax.b + ax.a > 1) {
        out.push_back(name + " axis " + std::to_string(t + 1) +
                      ": box leaves the cube");
      }
    }
  }
  for (auto it = e.components.begin(); it != e.components.end(); ++it) {
    for (auto jt = std::next(it); jt != e.components.end(); ++jt) {
      if (it->second.affine.dim() != e.k || jt->second.affine.dim() != e.k) {
        continue;
      }
      if (!disjoint(it->second.affine, jt->second.affine)) {
        out.push_back("components " + std::to_string(it->first) + " and " +
                      std::to_string(jt->first) + " overlap");
      }
    }
  }
  return out;
}

std::vector<std::string> validate(const OperadMorphism& f) {
  std::vector<std::string> out;
  if (f.alpha.size() != f.m) {
    out.push_back("alpha has " + std::to_string(f.alpha.size()) +
                  " entries for <" + std::to_string(f.m) + ">");
    return out;
  }
  if (f.fibers.size() != f.n) {
    out.push_back("expected " + std::to_string(f.n) + " fibers");
    return out;
  }
  for (std::size_t i = 1; i <= f.m; ++i) {
    const auto j = f.alpha[i - 1];
    if (j > f.n) {
      out.push_back("alpha(" + std::to_string(i) + ") = " +
                    std::to_string(j) + " out of range");
    } else if (j != 0 && !f.fibers[j - 1].components.count(i)) {
      out.push_back("fiber " + std::to_string(j) + " misses element " +
                    std::to_string(i));
    }
  }
  for (std::size_t j = 1; j <= f.n; ++j) {
    const auto& fiber = f.fibers[j - 1];
    if (fiber.k != f.k) {
      out.push_back("fiber " + std::to_string(j) + " has dimension " +
                    std::to_string(fiber.k));
    }
    for (const auto& [label, c] : fiber.components) {
      if (label == 0 || label > f.m || f.alpha[label - 1] != j) {
        out.push_back("fiber " + std::to_string(j) + " holds element " +
                      std::to_string(label) + " not mapped to it");
      }
    }
    for (auto& v : validate(fiber)) {
      out.push_back("fiber " + std::to_string(j) + ": " + v);
    }
  }
  return out;
}

OperadMorphism compose(const OperadMorphism& outer,
                       const OperadMorphism& inner) {
  return compose_with(outer, inner, add_twists, false);
}

OperadMorphism compose_faulty(const OperadMorphism& outer,
                              const OperadMorphism& inner,
                              InjectedFault fault) {
  if (fault == InjectedFault::MultiplyTwists) {
    return compose_with(outer, inner, multiply_twists, false);
  }
  return compose_with(outer, inner, add_twists, true);
}

OperadMorphism identity_morphism(std::size_t n, std::size_t k) {
  if (k == 0) throw InvalidArgument("cube dimension must be positive");
  OperadMorphism f;
  f.k = k;
  f.m = n;
  f.n = n;
  for (std::size_t j = 1; j <= n; ++j) {
    f.alpha.push_back(j);
    TwistedEmbedding e{k, {}};
    e.components[j] = {RectAffine::identity(k),
                       std::vector<Integer>(k - 1, Integer(0))};
    f.fibers.push_back(std::move(e));
  }
  return f;
}

RandomMorphismSource::RandomMorphismSource(std::size_t k, std::uint64_t seed,
                                           std::size_t max_arity)
    : k_(k), max_arity_(max_arity), rng_(seed) {
  if (k == 0) throw InvalidArgument("cube dimension must be positive");
}

std::size_t RandomMorphismSource::random_arity() {
  return std::uniform_int_distribution<std::size_t>(0, max_arity_)(rng_);
}

Rational RandomMorphismSource::random_unit() {
  const long q = std::uniform_int_distribution<long>(1, 12)(rng_);
  const long p = std::uniform_int_distribution<long>(0, q)(rng_);
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::vector<Rational> RandomMorphismSource::random_point() {
  std::vector<Rational> x;
  for (std::size_t t = 0; t < k_; ++t) {
    const long p = std::uniform_int_distribution<long>(1, 31)(rng_);
    Rational r(p, 16);
    r.canonicalize();
    x.push_back(r - 1);
  }
  return x;
}

OperadMorphism RandomMorphismSource::random_morphism(std::size_t m,
                                                     std::size_t n) {
  OperadMorphism f;
  f.k = k_;
  f.m = m;
  f.n = n;
  f.fibers.assign(n, TwistedEmbedding{k_, {}});
  std::vector<std::vector<std::size_t>> pre(n);
  for (std::size_t i = 1; i <= m; ++i) {
    std::size_t j = 0;
    if (n > 0 && std::uniform_int_distribution<int>(0, 4)(rng_) != 0) {
      j = std::uniform_int_distribution<std::size_t>(1, n)(rng_);
    }
    f.alpha.push_back(j);
    if (j) pre[j - 1].push_back(i);
  }
  std::uniform_int_distribution<long> twist(-3, 3);
  for (std::size_t j = 0; j < n; ++j) {
    const auto r = pre[j].size();
    for (std::size_t s = 0; s < r; ++s) {
      RectAffine box;
      // Axis 1 is cut into r slots, one per cube, so the boxes are disjoint.
      const Rational width(2, static_cast<unsigned long>(r));
      const Rational lo = Rational(-1) + width * static_cast<unsigned long>(s);
      Rational a = width / 2 * (random_unit() * Rational(7, 8) + Rational(1, 8));
      a.canonicalize();
      Rational b = lo + a + (width - 2 * a) * random_unit();
      b.canonicalize();
      box.axes.push_back({a, b});
      for (std::size_t t = 1; t < k_; ++t) {
        Rational at = random_unit() * Rational(7, 8) + Rational(1, 8);
        Rational bt = (1 - at) * (2 * random_unit() - 1);
        at.canonicalize();
        bt.canonicalize();
        box.axes.push_back({at, bt});
      }
      std::vector<Integer> tw;
      for (std::size_t t = 1; t < k_; ++t) tw.emplace_back(twist(rng_));
      f.fibers[j].components[pre[j][s]] = {std::move(box), std::move(tw)};
    }
  }
  return f;
}

OperadMorphism RandomMorphismSource::maybe_identity(std::size_t m,
                                                    std::size_t n) {
  if (m == n && std::uniform_int_distribution<int>(0, 3)(rng_) == 0) {
    return identity_morphism(n, k_);
  }
  return random_morphism(m, n);
}

namespace {

void record(OperadAxiomReport& rep, std::size_t& counter, std::string w) {
  ++counter;
  if (rep.witnesses.size() < 16) rep.witnesses.push_back(std::move(w));
}

}  // namespace

OperadAxiomReport check_operad_axioms(RandomMorphismSource& source,
                                      std::size_t trials,
                                      const ComposeFn& compose_fn) {
  if (trials == 0) throw InvalidArgument("trials must be at least 1");
  OperadAxiomReport rep;
  const auto k = source.k();
  for (std::size_t t = 0; t < trials; ++t) {
    ++rep.trials;
    const auto m = source.random_arity();
    const auto n = source.random_arity();
    const auto p = source.random_arity();
    const auto q = source.random_arity();
    const auto f = source.maybe_identity(m, n);
    const auto g = source.maybe_identity(n, p);
    const auto h = source.maybe_identity(p, q);
    const std::string tag = "trial " + std::to_string(t) + ": ";

    const auto left = compose_fn(compose_fn(h, g), f);
    const auto right = compose_fn(h, compose_fn(g, f));
    if (!(left == right)) {
      record(rep, rep.associativity_failures,
             tag + "(h.g).f = " + left.to_string() + " but h.(g.f) = " +
                 right.to_string());
    }

    if (!(compose_fn(identity_morphism(n, k), f) == f)) {
      record(rep, rep.identity_failures,
             tag + "id.f != f for f = " + f.to_string());
    }
    if (!(compose_fn(f, identity_morphism(m, k)) == f)) {
      record(rep, rep.identity_failures,
             tag + "f.id != f for f = " + f.to_string());
    }

    for (const auto* c : {&left, &right}) {
      const auto v = validate(*c);
      if (!v.empty()) {
        record(rep, rep.validity_failures,
               tag + "composite is not an embedding: " + v.front());
      }
    }

    // Push a point of every source cube through f, g, h one step at a time.
    for (std::size_t i = 1; i <= m; ++i) {
      const auto start = source.random_point();
      auto x = start;
      std::vector<Integer> twist(k - 1, Integer(0));
      std::size_t at = i;
      for (const auto* step : {&f, &g, &h}) {
        if (at == 0) break;
        const auto next = step->alpha.at(at - 1);
        if (next != 0) {
          const auto& c = step->fibers.at(next - 1).components.at(at);
          x = c.affine.apply(x);
          for (std::size_t s = 0; s + 1 < k; ++s) twist[s] += c.twist[s];
        }
        at = next;
      }
      if (left.alpha.at(i - 1) != at) {
        record(rep, rep.evaluation_failures,
               tag + "element " + std::to_string(i) + " lands in " +
                   std::to_string(left.alpha.at(i - 1)) + ", expected " +
                   std::to_string(at));
        continue;
      }
      if (at == 0) continue;
      const auto& c = left.fibers.at(at - 1).components.at(i);
      if (c.affine.apply(start) != x) {
        record(rep, rep.evaluation_failures,
               tag + "element " + std::to_string(i) +
                   ": composite box moves a point differently");
      }
      if (c.twist != twist) {
        record(rep, rep.evaluation_failures,
               tag + "element " + std::to_string(i) +
                   ": composite twist differs from the stepwise sum");
      }
    }
  }
  return rep;
}

Integer framing_of_loop(std::span<const OperadMorphism> ops) {
  Integer total = 0;
  for (const auto& f : ops) {
    if (f.k != 2 || f.m != 1 || f.n != 1 || f.alpha.size() != 1 ||
        f.alpha[0] != 1) {
      throw InvalidArgument("framing_of_loop takes unary k=2 morphisms, got " +
                            f.to_string());
    }
    total += f.fibers.at(0).components.at(1).twist.at(0);
  }
  return total;
}

FramedBraid loop_braid(std::span<const OperadMorphism> ops) {
  const Integer total = framing_of_loop(ops);
  if (abs(total) > 100000) throw Unsupported("framing too large to draw");
  const long count = total.get_si();
  std::vector<Generator> word;
  for (long s = 0; s < (count < 0 ? -count : count); ++s) {
    word.push_back(Generator::kink(1, count < 0 ? -1 : 1));
  }
  return FramedBraid(1, std::move(word));
}

}  // namespace kirbycat
