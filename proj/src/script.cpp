#include "kirbycat/script.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "kirbycat/errors.hpp"
#include "kirbycat/event_site.hpp"
#include "kirbycat/kirby_category.hpp"
#include "kirbycat/walled.hpp"

namespace kirbycat {

using nlohmann::json;

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

// ---------------------------------------------------------------- parsing

struct Token {
  std::string text;
  std::size_t col = 0;  // zero-based
};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_identifier(const std::string& s) {
  return !s.empty() &&
         (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_') &&
         std::all_of(s.begin(), s.end(), is_ident_char);
}

class Cursor {
 public:
  Cursor(std::string_view line, std::size_t lineno)
      : line_(line), lineno_(lineno) {}

  [[noreturn]] void fail(std::size_t col, const std::string& msg) const {
    throw ParseError(lineno_, col + 1, msg);
  }

  void skip_ws() {
    while (pos_ < line_.size() &&
           std::isspace(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
  }
  bool at_end() {
    skip_ws();
    return pos_ >= line_.size();
  }
  std::size_t col() const { return pos_; }
  char peek() {
    skip_ws();
    return pos_ < line_.size() ? line_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) {
      fail(pos_, std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  // Up to whitespace or one of `stops`.
  Token token(std::string_view stops = "") {
    skip_ws();
    Token t{"", pos_};
    while (pos_ < line_.size() &&
           !std::isspace(static_cast<unsigned char>(line_[pos_])) &&
           stops.find(line_[pos_]) == std::string_view::npos) {
      t.text += line_[pos_++];
    }
    if (t.text.empty()) fail(t.col, "unexpected end of statement");
    return t;
  }

  Token identifier(std::string_view what) {
    skip_ws();
    Token t{"", pos_};
    while (pos_ < line_.size() && is_ident_char(line_[pos_])) {
      t.text += line_[pos_++];
    }
    if (!is_identifier(t.text)) fail(t.col, "expected " + std::string(what));
    return t;
  }

  // A whitespace-delimited chunk; a bracketed group is read whole.
  Token chunk() {
    skip_ws();
    Token t{"", pos_};
    if (pos_ < line_.size() && line_[pos_] == '[') {
      const auto close = line_.find(']', pos_);
      if (close == std::string_view::npos) fail(pos_, "unterminated '['");
      t.text = std::string(line_.substr(pos_, close - pos_ + 1));
      pos_ = close + 1;
      return t;
    }
    return token();
  }

 private:
  std::string_view line_;
  std::size_t lineno_;
  std::size_t pos_ = 0;
};

std::optional<long long> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size() || s.size() > 18) return std::nullopt;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  }
  return std::stoll(s);
}

std::optional<Integer> parse_integer(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return std::nullopt;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  }
  return Integer(s[0] == '+' ? s.substr(1) : s);
}

std::optional<Rational> parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  auto num = parse_integer(s.substr(0, slash));
  if (!num) return std::nullopt;
  Integer den = 1;
  if (slash != std::string::npos) {
    auto d = parse_integer(s.substr(slash + 1));
    if (!d || sgn(*d) <= 0 || s[slash + 1] == '+') return std::nullopt;
    den = *d;
  }
  Rational r(*num, den);
  r.canonicalize();
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

Generator parse_generator(const Cursor& cur, const Token& t,
                          std::size_t strands) {
  const auto& s = t.text;
  Generator g;
  std::string digits;
  if (s[0] == 'x' || s[0] == 'X') {
    g.kind = Generator::Kind::Crossing;
    g.sign = s[0] == 'x' ? 1 : -1;
    digits = s.substr(1);
  } else if (s[0] == 'k' && s.size() >= 3 &&
             (s.back() == '+' || s.back() == '-')) {
    g.kind = Generator::Kind::Kink;
    g.sign = s.back() == '+' ? 1 : -1;
    digits = s.substr(1, s.size() - 2);
  } else {
    cur.fail(t.col, "unknown generator '" + s + "'");
  }
  const auto v = parse_int(digits);
  if (!v || digits[0] == '-' || digits[0] == '+') {
    cur.fail(t.col, "bad generator index in '" + s + "'");
  }
  const auto limit = g.kind == Generator::Kind::Crossing ? strands - 1 : strands;
  if (*v < 1 || static_cast<std::size_t>(*v) > limit || strands == 0) {
    cur.fail(t.col, "generator " + s + " out of range for " +
                        std::to_string(strands) + " strands");
  }
  g.pos = static_cast<std::size_t>(*v);
  return g;
}

ObjectLabel parse_label(const Cursor& cur, const Token& t) {
  std::string s = t.text;
  bool dual = false;
  if (!s.empty() && s.back() == '*') {
    dual = true;
    s.pop_back();
  }
  bool thick = false;
  if (s.size() > 3 && s.rfind("d(", 0) == 0 && s.back() == ')') {
    thick = true;
    s = s.substr(2, s.size() - 3);
  }
  if (!is_identifier(s)) cur.fail(t.col, "bad label '" + t.text + "'");
  return ObjectLabel::event(s, thick, dual);
}

LinkingMatrix parse_matrix(const Cursor& cur, const Token& t) {
  if (t.text.size() < 2 || t.text.front() != '[' || t.text.back() != ']') {
    cur.fail(t.col, "expected a bracketed matrix");
  }
  const std::string body = trim(t.text.substr(1, t.text.size() - 2));
  if (body.empty()) return LinkingMatrix(0);
  std::vector<std::vector<Integer>> rows;
  for (const auto& row : split(body, ';')) {
    std::istringstream is(row);
    std::vector<Integer> r;
    std::string e;
    while (is >> e) {
      auto v = parse_integer(e);
      if (!v) cur.fail(t.col, "bad matrix entry '" + e + "'");
      r.push_back(*v);
    }
    rows.push_back(std::move(r));
  }
  const auto n = rows.size();
  std::vector<Integer> entries;
  for (const auto& r : rows) {
    if (r.size() != n) cur.fail(t.col, "matrix is not square");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  try {
    return LinkingMatrix(n, std::move(entries));
  } catch (const Error& e) {
    cur.fail(t.col, e.what());
  }
}

std::size_t parse_count(const Cursor& cur, const Token& t,
                        std::string_view what) {
  const auto v = parse_int(t.text);
  if (!v || *v < 0 || t.text[0] == '+' || t.text[0] == '-') {
    cur.fail(t.col, "expected " + std::string(what) + ", got '" + t.text + "'");
  }
  return static_cast<std::size_t>(*v);
}

OperadDef parse_operad(Cursor& cur, std::string name) {
  std::optional<std::size_t> k, n;
  while (cur.peek() != ':') {
    if (cur.at_end()) cur.fail(cur.col(), "expected ':'");
    const auto opt = cur.token(":");
    const auto eq = opt.text.find('=');
    const std::string key = opt.text.substr(0, eq);
    if (eq == std::string::npos || (key != "k" && key != "n")) {
      cur.fail(opt.col, "expected k=<dim> or n=<arity>");
    }
    const auto v = parse_count(cur, {opt.text.substr(eq + 1), opt.col + eq + 1},
                               "a count");
    (key == "k" ? k : n) = v;
  }
  cur.expect(':');
  if (!k || *k == 0) cur.fail(cur.col(), "operad needs k=<dim> with dim >= 1");

  struct Comp {
    std::size_t i;
    std::size_t j;
    std::optional<TwistedComponent> c;
  };
  std::vector<Comp> comps;
  while (!cur.at_end()) {
    const auto t = cur.chunk();
    const auto arrow = t.text.find("->");
    if (arrow == std::string::npos) {
      cur.fail(t.col, "expected <i>-><j> or <i>->*");
    }
    const auto i = parse_count(cur, {t.text.substr(0, arrow), t.col}, "an index");
    const std::string rhs = t.text.substr(arrow + 2);
    Comp comp{i, 0, std::nullopt};
    if (rhs != "*") {
      comp.j = parse_count(cur, {rhs, t.col + arrow + 2}, "an index");
      if (comp.j == 0) cur.fail(t.col, "target index must be positive");
      const auto box = cur.chunk();
      if (box.text.front() != '[') cur.fail(box.col, "expected a box [a,b; ...]");
      TwistedComponent tc;
      const auto body = box.text.substr(1, box.text.size() - 2);
      for (const auto& axis : split(body, ';')) {
        const auto ab = split(trim(axis), ',');
        std::optional<Rational> a, b;
        if (ab.size() == 2) {
          a = parse_rational(trim(ab[0]));
          b = parse_rational(trim(ab[1]));
        }
        if (!a || !b) cur.fail(box.col, "bad axis '" + trim(axis) + "'");
        tc.affine.axes.push_back({*a, *b});
      }
      if (tc.affine.dim() != *k) {
        cur.fail(box.col, "box has " + std::to_string(tc.affine.dim()) +
                              " axes, expected " + std::to_string(*k));
      }
      if (cur.peek() == 't') {
        const auto tw = cur.chunk();
        if (tw.text.rfind("t=", 0) != 0) cur.fail(tw.col, "expected t=...");
        for (const auto& e : split(tw.text.substr(2), ',')) {
          auto v = parse_integer(e);
          if (!v) cur.fail(tw.col, "bad twist entry '" + e + "'");
          tc.twist.push_back(*v);
        }
      }
      if (tc.twist.size() + 1 != *k) {
        if (tc.twist.empty()) {
          tc.twist.assign(*k - 1, Integer(0));
        } else {
          cur.fail(t.col, "twist must have " + std::to_string(*k - 1) +
                              " entries");
        }
      }
      comp.c = std::move(tc);
    }
    comps.push_back(std::move(comp));
  }
  OperadMorphism f;
  f.k = *k;
  f.m = comps.size();
  std::size_t max_j = 0;
  for (const auto& c : comps) max_j = std::max(max_j, c.j);
  f.n = n.value_or(max_j);
  if (max_j > f.n) cur.fail(0, "target index exceeds n");
  f.alpha.assign(f.m, 0);
  f.fibers.assign(f.n, TwistedEmbedding{f.k, {}});
  std::vector<bool> seen(f.m + 1, false);
  for (auto& c : comps) {
    if (c.i == 0 || c.i > f.m || seen[c.i]) {
      cur.fail(0, "source indices must be 1.." + std::to_string(f.m) +
                      ", each once");
    }
    seen[c.i] = true;
    f.alpha[c.i - 1] = c.j;
    if (c.j) f.fibers[c.j - 1].components[c.i] = std::move(*c.c);
  }
  return {std::move(name), std::move(f)};
}

struct CommandShape {
  std::size_t min_args;
  std::size_t max_args;
  std::vector<std::string> options;
  // Which positional arguments name definitions.
  std::vector<std::size_t> name_args;
};

const std::map<std::string, CommandShape>& command_shapes() {
  static const std::map<std::string, CommandShape> shapes = {
      {"invariants", {1, 1, {}, {0}}},
      {"close", {1, 1, {}, {0}}},
      {"blowup", {2, 2, {}, {0}}},
      {"blowdown", {2, 2, {}, {0}}},
      {"slide", {4, 4, {}, {0}}},
      {"equiv", {2, 2, {"depth"}, {0, 1}}},
      {"cable", {2, 2, {}, {0}}},
      {"bandsum", {3, 3, {}, {0}}},
      {"boundary", {1, 1, {}, {0}}},
      {"sitecheck", {1, 1, {"bound"}, {0}}},
      {"axioms", {0, 1, {"k", "trials"}, {0}}},
      {"flows", {3, 3, {"len"}, {0}}},
      {"walled", {1, 1, {}, {0}}},
      {"compose", {2, 2, {}, {0, 1}}},
      {"validate", {1, 1, {}, {0}}},
      {"framing", {1, 64, {}, {0, 1, 2, 3, 4, 5, 6, 7}}},
  };
  return shapes;
}

bool names_all_args(const std::string& verb) { return verb == "framing"; }

std::vector<std::string> name_arguments(const Command& c) {
  const auto& shape = command_shapes().at(c.verb);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (names_all_args(c.verb) ||
        std::find(shape.name_args.begin(), shape.name_args.end(), i) !=
            shape.name_args.end()) {
      out.push_back(c.args[i]);
    }
  }
  return out;
}

Command parse_command(Cursor& cur, const Token& verb) {
  const auto it = command_shapes().find(verb.text);
  if (it == command_shapes().end()) {
    cur.fail(verb.col, "unknown statement '" + verb.text + "'");
  }
  const auto& shape = it->second;
  Command c{verb.text, {}, {}};
  std::vector<Token> args;
  while (!cur.at_end()) {
    const auto t = cur.token();
    const auto eq = t.text.find('=');
    if (eq == std::string::npos) {
      args.push_back(t);
      continue;
    }
    const auto key = t.text.substr(0, eq);
    if (std::find(shape.options.begin(), shape.options.end(), key) ==
        shape.options.end()) {
      cur.fail(t.col, "unknown option '" + key + "' for " + verb.text);
    }
    for (const auto& [k, v] : c.options) {
      if (k == key) cur.fail(t.col, "option '" + key + "' given twice");
    }
    const auto v = parse_count(cur, {t.text.substr(eq + 1), t.col + eq + 1},
                               "a nonnegative integer");
    c.options.emplace_back(key, std::to_string(v));
  }
  if (args.size() < shape.min_args || args.size() > shape.max_args) {
    cur.fail(verb.col, verb.text + " takes " + std::to_string(shape.min_args) +
                           (shape.max_args != shape.min_args
                                ? " to " + std::to_string(shape.max_args)
                                : std::string()) +
                           " arguments");
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    const bool is_name =
        names_all_args(c.verb) ||
        std::find(shape.name_args.begin(), shape.name_args.end(), i) !=
            shape.name_args.end();
    if (is_name) {
      if (!is_identifier(a.text)) cur.fail(a.col, "expected a name");
    } else if (a.text == "+" || a.text == "-") {
      const bool sign_slot = (c.verb == "blowup" && i == 1) ||
                             (c.verb == "slide" && i == 3);
      if (!sign_slot) cur.fail(a.col, "unexpected sign");
    } else if (c.verb == "flows") {
      if (!is_identifier(a.text)) cur.fail(a.col, "expected an object name");
    } else {
      const auto v = parse_int(a.text);
      if (!v || *v < 1 || a.text[0] == '+') {
        cur.fail(a.col, "expected a positive index, got '" + a.text + "'");
      }
      if ((c.verb == "blowup" && i == 1) || (c.verb == "slide" && i == 3)) {
        cur.fail(a.col, "expected + or -");
      }
    }
    c.args.push_back(a.text);
  }
  std::sort(c.options.begin(), c.options.end());
  return c;
}

struct Located {
  Statement statement;
  std::size_t line;
  std::vector<Token> name_tokens;
};

const std::string* defined_name(const Statement& s) {
  return std::visit(
      [](const auto& d) -> const std::string* {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Command> ||
                      std::is_same_v<T, LabelsDef>) {
          return nullptr;
        } else {
          return &d.name;
        }
      },
      s);
}

}  // namespace

Script parse(std::string_view text) {
  std::vector<Located> located;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    Cursor cur(line, lineno);
    if (cur.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    const auto head = cur.identifier("a statement");
    Located loc{Command{}, lineno, {}};
    if (head.text == "braid") {
      auto name = cur.identifier("a braid name");
      const auto count = cur.token(":");
      cur.expect(':');
      BraidDef b{name.text, parse_count(cur, count, "a strand count"), {}};
      while (!cur.at_end()) {
        b.word.push_back(parse_generator(cur, cur.token(), b.strands));
      }
      loc.statement = std::move(b);
      loc.name_tokens.push_back(name);
    } else if (head.text == "labels") {
      auto name = cur.identifier("a braid name");
      cur.expect(':');
      LabelsDef l{name.text, {}, std::nullopt};
      auto* target = &l.domain;
      while (!cur.at_end()) {
        const auto t = cur.token();
        if (t.text == "->") {
          if (l.codomain) cur.fail(t.col, "second '->'");
          l.codomain.emplace();
          target = &*l.codomain;
          continue;
        }
        target->push_back(parse_label(cur, t));
      }
      loc.statement = std::move(l);
      loc.name_tokens.push_back(name);
    } else if (head.text == "matrix") {
      auto name = cur.identifier("a matrix name");
      cur.expect(':');
      if (cur.peek() != '[') cur.fail(cur.col(), "expected '['");
      MatrixDef m{name.text, parse_matrix(cur, cur.chunk())};
      if (!cur.at_end()) cur.fail(cur.col(), "unexpected text after matrix");
      loc.statement = std::move(m);
      loc.name_tokens.push_back(name);
    } else if (head.text == "category") {
      auto name = cur.identifier("a category name");
      cur.expect(':');
      CategoryDef c{name.text, {}, {}};
      auto add_object = [&](const std::string& o, const Token& t) {
        if (!is_identifier(o)) cur.fail(t.col, "bad object name '" + o + "'");
        if (std::find(c.objects.begin(), c.objects.end(), o) ==
            c.objects.end()) {
          c.objects.push_back(o);
        }
      };
      while (!cur.at_end()) {
        const auto t = cur.token();
        const auto colon = t.text.find(':');
        if (colon == std::string::npos) {
          add_object(t.text, t);
          continue;
        }
        const auto arrow = t.text.find("->", colon);
        if (arrow == std::string::npos) {
          cur.fail(t.col, "expected name:Source->Target");
        }
        ArrowDef a{t.text.substr(0, colon),
                   t.text.substr(colon + 1, arrow - colon - 1),
                   t.text.substr(arrow + 2)};
        if (!is_identifier(a.name)) cur.fail(t.col, "bad arrow name");
        for (const auto& b : c.arrows) {
          if (b.name == a.name) cur.fail(t.col, "duplicate arrow " + a.name);
        }
        add_object(a.source, t);
        add_object(a.target, t);
        c.arrows.push_back(std::move(a));
      }
      loc.statement = std::move(c);
      loc.name_tokens.push_back(name);
    } else if (head.text == "operad") {
      auto name = cur.identifier("an operad name");
      loc.statement = parse_operad(cur, name.text);
      loc.name_tokens.push_back(name);
    } else {
      auto c = parse_command(cur, head);
      // Recover token positions of name arguments for error reporting.
      Cursor again(line, lineno);
      again.identifier("verb");
      std::vector<Token> toks;
      while (!again.at_end()) toks.push_back(again.token());
      const auto names = name_arguments(c);
      for (const auto& t : toks) {
        if (std::find(names.begin(), names.end(), t.text) != names.end()) {
          loc.name_tokens.push_back(t);
        }
      }
      loc.statement = std::move(c);
    }
    located.push_back(std::move(loc));
    if (end == text.size()) break;
  }

  // Names are unique, and no statement may refer to a later definition.
  std::map<std::string, std::size_t> defined_at;
  for (std::size_t s = 0; s < located.size(); ++s) {
    if (const auto* name = defined_name(located[s].statement)) {
      if (defined_at.count(*name)) {
        throw ParseError(located[s].line, located[s].name_tokens[0].col + 1,
                         "name '" + *name + "' is already defined");
      }
      defined_at[*name] = s;
    }
  }
  for (std::size_t s = 0; s < located.size(); ++s) {
    if (defined_name(located[s].statement)) continue;
    for (const auto& t : located[s].name_tokens) {
      const auto it = defined_at.find(t.text);
      if (it != defined_at.end() && it->second > s) {
        throw ParseError(located[s].line, t.col + 1,
                         "forward reference to '" + t.text + "'");
      }
    }
  }
  Script out;
  for (auto& l : located) out.statements.push_back(std::move(l.statement));
  return out;
}

// --------------------------------------------------------------- printing

std::string print(const Statement& s) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        std::string out;
        if constexpr (std::is_same_v<T, BraidDef>) {
          out = "braid " + d.name + " " + std::to_string(d.strands) + ":";
          for (const auto& g : d.word) out += " " + g.to_string();
        } else if constexpr (std::is_same_v<T, LabelsDef>) {
          out = "labels " + d.braid + ":";
          for (const auto& l : d.domain) out += " " + l.to_string();
          if (d.codomain) {
            out += " ->";
            for (const auto& l : *d.codomain) out += " " + l.to_string();
          }
        } else if constexpr (std::is_same_v<T, MatrixDef>) {
          out = "matrix " + d.name + ": " + d.matrix.to_string();
        } else if constexpr (std::is_same_v<T, CategoryDef>) {
          out = "category " + d.name + ":";
          for (const auto& o : d.objects) out += " " + o;
          for (const auto& a : d.arrows) {
            out += " " + a.name + ":" + a.source + "->" + a.target;
          }
        } else if constexpr (std::is_same_v<T, OperadDef>) {
          out = "operad " + d.name + " " + d.morphism.to_string();
        } else {
          out = d.verb;
          for (const auto& a : d.args) out += " " + a;
          for (const auto& [k, v] : d.options) out += " " + k + "=" + v;
        }
        return out;
      },
      s);
}

std::string print(const Script& s) {
  std::string out;
  for (const auto& st : s.statements) out += print(st) + "\n";
  return out;
}

// ---------------------------------------------------------------- running

namespace {

json integers(const std::vector<Integer>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

json boundary_json(const BoundaryRecord& r) {
  return {{"h1_free_rank", r.h1_free_rank},
          {"h1_torsion", integers(r.h1_torsion)},
          {"b2", r.b2},
          {"euler", r.euler},
          {"sigma", r.sigma}};
}

json crossing_json(const CrossingRecord& r) {
  json comps = json::array();
  for (const auto& c : r.components) {
    json one = json::array();
    for (auto p : c) one.push_back(p + 1);
    comps.push_back(one);
  }
  json counts = json::array();
  for (std::size_t i = 0; i < r.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < r.size(); ++j) row.push_back(r.at(i, j));
    counts.push_back(row);
  }
  return {{"components", comps}, {"counts", counts}};
}

std::string braid_text(const FramedBraid& f) {
  std::string out = f.to_string();
  out += " | " + f.domain().to_string() + " -> " + f.codomain().to_string();
  return out;
}

json label_list(const TensorWord& w) {
  json a = json::array();
  for (const auto& l : w.labels) a.push_back(l.to_string());
  return a;
}

std::string category_text(const FiniteFreeCategory& c) {
  std::string out;
  for (const auto& o : c.objects()) out += (out.empty() ? "" : " ") + o;
  for (const auto& a : c.arrows()) {
    out += " " + a.name + ":" + c.objects()[a.source] + "->" +
           c.objects()[a.target];
  }
  return out;
}

class Runner {
 public:
  Runner(const Script& s, const RunOptions& o) : script_(s), options_(o) {
    for (const auto& st : s.statements) {
      if (const auto* n = defined_name(st)) all_names_.insert(*n);
    }
  }

  void execute(const std::function<void(const CommandResult&)>& sink) {
    for (const auto& st : script_.statements) {
      std::visit([&](const auto& d) { define(d, sink); }, st);
    }
  }

  Definitions collect() {
    const std::function<void(const CommandResult&)> none;
    for (const auto& st : script_.statements) {
      if (std::holds_alternative<Command>(st)) continue;
      std::visit([&](const auto& d) { define(d, none); }, st);
    }
    return {braids_, matrices_, categories_, operads_};
  }

 private:
  void define(const BraidDef& b,
              const std::function<void(const CommandResult&)>&) {
    braids_.emplace(b.name, FramedBraid(b.strands, b.word));
  }

  void define(const LabelsDef& l,
              const std::function<void(const CommandResult&)>&) {
    auto& f = braid(l.braid);
    TensorWord dom{l.domain};
    if (l.codomain) {
      f = FramedBraid::between(f.strands(), f.word(), dom,
                               TensorWord{*l.codomain});
    } else {
      f = FramedBraid(f.strands(), f.word(), dom);
    }
  }

  void define(const MatrixDef& m,
              const std::function<void(const CommandResult&)>&) {
    matrices_.emplace(m.name, m.matrix);
  }

  void define(const CategoryDef& c,
              const std::function<void(const CommandResult&)>&) {
    std::vector<Arrow> arrows;
    auto index = [&](const std::string& o) {
      return static_cast<std::size_t>(
          std::find(c.objects.begin(), c.objects.end(), o) -
          c.objects.begin());
    };
    for (const auto& a : c.arrows) {
      arrows.push_back({a.name, index(a.source), index(a.target)});
    }
    categories_.emplace(c.name, FiniteFreeCategory(c.objects, arrows));
  }

  void define(const OperadDef& o,
              const std::function<void(const CommandResult&)>&) {
    operads_.emplace(o.name, o.morphism);
  }

  void define(const Command& c,
              const std::function<void(const CommandResult&)>& sink) {
    CommandResult r;
    r.command = c.verb;
    json opts = json::object();
    for (const auto& [k, v] : c.options) opts[k] = v;
    r.inputs = {{"args", c.args}, {"options", opts},
                {"operands", json::object()}};
    r.invariant_record = nullptr;
    current_ = &r;
    dispatch(c, r);
    current_ = nullptr;
    sink(r);
  }

  [[noreturn]] void unresolved(const std::string& name) const {
    if (all_names_.count(name)) {
      throw ResolutionError("'" + name + "' is used before its definition");
    }
    throw ResolutionError("undefined name '" + name + "'");
  }

  FramedBraid& braid(const std::string& name) {
    auto it = braids_.find(name);
    if (it == braids_.end()) unresolved(name);
    if (current_) current_->inputs["operands"][name] = braid_text(it->second);
    return it->second;
  }

  // A matrix, or the surgery presentation of a closable braid.
  LinkingMatrix matrix(const std::string& name) {
    if (auto it = matrices_.find(name); it != matrices_.end()) {
      if (current_) current_->inputs["operands"][name] = it->second.to_string();
      return it->second;
    }
    if (braids_.count(name)) return from_closed_braid(close(braid(name)));
    unresolved(name);
  }

  const FiniteFreeCategory& category(const std::string& name) {
    auto it = categories_.find(name);
    if (it == categories_.end()) unresolved(name);
    if (current_) current_->inputs["operands"][name] = category_text(it->second);
    return it->second;
  }

  const OperadMorphism& operad(const std::string& name) {
    auto it = operads_.find(name);
    if (it == operads_.end()) unresolved(name);
    if (current_) current_->inputs["operands"][name] = it->second.to_string();
    return it->second;
  }

  static std::size_t index(const std::string& s) {
    return static_cast<std::size_t>(std::stoull(s)) - 1;
  }
  static int sign(const std::string& s) { return s == "-" ? -1 : 1; }

  static std::optional<std::size_t> option(const Command& c,
                                           const std::string& key) {
    for (const auto& [k, v] : c.options) {
      if (k == key) return static_cast<std::size_t>(std::stoull(v));
    }
    return std::nullopt;
  }

  static void check_component(const LinkingMatrix& a, std::size_t i) {
    if (i >= a.size()) {
      throw InvalidArgument("component " + std::to_string(i + 1) +
                            " out of range for " + std::to_string(a.size()) +
                            " components");
    }
  }

  void matrix_result(CommandResult& r, const LinkingMatrix& a,
                     const std::string& prefix) {
    const auto rec = boundary_record(a);
    r.result["matrix"] = a.to_string();
    r.invariant_record = boundary_json(rec);
    r.text = prefix + a.to_string() + "  " + rec.to_string();
  }

  void dispatch(const Command& c, CommandResult& r) {
    const auto& v = c.verb;
    const auto& args = c.args;
    if (v == "invariants") {
      const auto a = matrix(args[0]);
      const auto rec = boundary_record(a);
      r.result = boundary_json(rec);
      r.result["matrix"] = a.to_string();
      r.result["determinant"] = determinant(a).get_str();
      r.invariant_record = boundary_json(rec);
      r.text = args[0] + ": " + a.to_string() + "  " + rec.to_string() +
               ", det = " + determinant(a).get_str();
    } else if (v == "close") {
      const auto cb = close(braid(args[0]));
      const auto a = from_closed_braid(cb);
      json comps = json::array();
      for (const auto& comp : cb.components()) {
        json one = json::array();
        for (auto p : comp) one.push_back(p + 1);
        comps.push_back(one);
      }
      r.result["components"] = comps;
      matrix_result(r, a, "closure of " + args[0] + ": " +
                              std::to_string(cb.component_count()) +
                              " components, ");
    } else if (v == "blowup") {
      matrix_result(r, blow_up(matrix(args[0]), sign(args[1])),
                    "blow_up " + args[1] + ": ");
    } else if (v == "blowdown") {
      const auto a = matrix(args[0]);
      check_component(a, index(args[1]));
      matrix_result(r, blow_down(a, index(args[1])),
                    "blow_down " + args[1] + ": ");
    } else if (v == "slide") {
      const auto a = matrix(args[0]);
      check_component(a, index(args[1]));
      check_component(a, index(args[2]));
      matrix_result(r,
                    handle_slide(a, index(args[1]), index(args[2]),
                                 sign(args[3])),
                    "slide " + args[1] + " over " + args[2] + " " + args[3] +
                        ": ");
    } else if (v == "equiv") {
      const auto depth = option(c, "depth").value_or(options_.depth);
      const auto verdict =
          kirby_equivalent(matrix(args[0]), matrix(args[1]), depth);
      r.result["depth"] = depth;
      if (const auto* e = std::get_if<Equivalent>(&verdict)) {
        json path = json::array();
        std::string moves;
        for (const auto& m : e->path) {
          path.push_back(m.to_string());
          moves += (moves.empty() ? "" : ", ") + m.to_string();
        }
        json relabel = json::array();
        for (auto p : e->relabel) relabel.push_back(p + 1);
        r.result["verdict"] = "Equivalent";
        r.result["path"] = path;
        r.result["relabel"] = relabel;
        r.text = "Equivalent via [" + moves + "]";
      } else if (const auto* d = std::get_if<Distinguished>(&verdict)) {
        r.result["verdict"] = "Distinguished";
        r.result["invariant"] = d->invariant;
        r.text = "Distinguished by " + d->invariant;
      } else {
        const auto& u = std::get<Unknown>(verdict);
        r.result["verdict"] = "Unknown";
        r.result["explored"] = u.explored;
        r.text = "Unknown after " + std::to_string(u.explored) + " states";
      }
    } else if (v == "cable") {
      const auto& f = braid(args[0]);
      const auto cb = close(f);
      const auto comp = index(args[1]);
      if (comp >= cb.component_count()) {
        throw InvalidArgument("component " + args[1] + " out of range");
      }
      const auto g = shadow_double(f, comp);
      r.result = {{"braid", g.to_string()},
                  {"strands", g.strands()},
                  {"labels", label_list(g.domain())}};
      r.text = "cable of component " + args[1] + ": " + braid_text(g);
    } else if (v == "bandsum") {
      const auto& f = braid(args[0]);
      const auto i = index(args[1]);
      const auto j = index(args[2]);
      const auto before = from_closed_braid(close(f));
      check_component(before, i);
      check_component(before, j);
      const auto g = band_sum_add(f, i, j);
      const auto after = from_closed_braid(close(g));
      const auto expected = handle_slide(before, i, j, 1);
      const bool agrees = canonical_form(after).matrix ==
                          canonical_form(expected).matrix;
      r.result["braid"] = g.to_string();
      r.result["expected"] = expected.to_string();
      r.result["agrees"] = agrees;
      matrix_result(r, after, "band sum " + args[1] + " over " + args[2] +
                                  ": " + g.to_string() + "  ");
      r.text += agrees ? "  (agrees with handle slide)"
                       : "  (DISAGREES with handle slide)";
    } else if (v == "boundary") {
      const auto a = matrix(args[0]);
      const auto source = EventObject::events(
          std::vector<std::string>(a.size(), "e"), true);
      const KirbyFamily fam(source, source, {a});
      const auto phi = boundary_functor(fam);
      const auto& rec = std::get<BoundaryRecord>(phi.elements().front());
      r.result = {{"source", phi.source().to_string()},
                  {"target", phi.target().to_string()},
                  {"length", phi.length()},
                  {"record", rec.to_string()}};
      r.invariant_record = boundary_json(rec);
      r.text = "boundary: " + rec.to_string();
    } else if (v == "sitecheck") {
      const auto& cat = category(args[0]);
      const auto rep = check_topology(
          cat, option(c, "bound").value_or(kDefaultObjectBound));
      json viol = json::array();
      for (const auto& x : rep.violations) {
        viol.push_back(
            {{"axiom", x.axiom}, {"object", x.object}, {"witness", x.witness}});
      }
      r.result = {{"maximal_covering", rep.maximal_covering},
                  {"stability", rep.stability},
                  {"transitivity", rep.transitivity},
                  {"degree_shift_law", rep.degree_shift_law},
                  {"member_restriction_maximal",
                   rep.member_restriction_maximal},
                  {"passed", rep.passed()},
                  {"sieves_checked", rep.sieves_checked},
                  {"empty_covering_objects", rep.empty_covering_objects},
                  {"violations", viol}};
      r.text = std::string(rep.passed() ? "all axioms pass" : "axioms FAIL") +
               " (maximal " + (rep.maximal_covering ? "ok" : "fail") +
               ", stability " + (rep.stability ? "ok" : "fail") +
               ", transitivity " + (rep.transitivity ? "ok" : "fail") +
               ", degree shift " + (rep.degree_shift_law ? "ok" : "fail") +
               ", " + std::to_string(rep.sieves_checked) + " sieves)";
      if (!rep.violations.empty()) {
        r.text += "; first violation at " + rep.violations[0].object + ": " +
                  rep.violations[0].witness;
      }
    } else if (v == "axioms") {
      std::size_t k = 2;
      if (!args.empty()) {
        const auto& f = operad(args[0]);
        k = f.k;
        const auto viol = validate(f);
        r.result["operand_valid"] = viol.empty();
      }
      k = option(c, "k").value_or(k);
      if (k == 0) throw InvalidArgument("k must be positive");
      const auto trials = option(c, "trials").value_or(100);
      RandomMorphismSource source(k, options_.seed);
      const auto rep = check_operad_axioms(source, trials);
      json faults = json::object();
      for (auto [fault, label] :
           {std::pair{InjectedFault::MultiplyTwists, "multiply_twists"},
            std::pair{InjectedFault::ReversedAffineOrder,
                      "reversed_affine_order"}}) {
        RandomMorphismSource again(k, options_.seed);
        const auto bad = check_operad_axioms(
            again, trials, [fault](const auto& o, const auto& i) {
              return compose_faulty(o, i, fault);
            });
        faults[label] = !bad.passed();
      }
      r.result["k"] = k;
      r.result["trials"] = rep.trials;
      r.result["passed"] = rep.passed();
      r.result["associativity_failures"] = rep.associativity_failures;
      r.result["identity_failures"] = rep.identity_failures;
      r.result["evaluation_failures"] = rep.evaluation_failures;
      r.result["validity_failures"] = rep.validity_failures;
      r.result["witnesses"] = rep.witnesses;
      r.result["faults_detected"] = faults;
      r.text = "operad axioms k=" + std::to_string(k) + ", " +
               std::to_string(rep.trials) + " trials: " +
               (rep.passed() ? "pass" : "FAIL") +
               "; injected faults detected: multiply_twists=" +
               (faults["multiply_twists"].get<bool>() ? "yes" : "no") +
               " reversed_affine_order=" +
               (faults["reversed_affine_order"].get<bool>() ? "yes" : "no");
    } else if (v == "flows") {
      const auto& cat = category(args[0]);
      const auto len = option(c, "len").value_or(4);
      const auto paths =
          flows(cat, cat.object(args[1]), cat.object(args[2]), len);
      json list = json::array();
      std::string text;
      for (const auto& p : paths) {
        list.push_back(cat.describe(p));
        text += (text.empty() ? "" : ", ") + cat.describe(p);
      }
      r.result = {{"paths", list}, {"count", paths.size()}};
      r.text = std::to_string(paths.size()) + " flows: " + text;
    } else if (v == "walled") {
      const auto w = make_walled(braid(args[0]));
      const auto rec = project_to_constrained(w);
      r.result = {{"constraint", rec.constraint},
                  {"source", rec.source.to_string()},
                  {"target", rec.target.to_string()},
                  {"tangle", crossing_json(rec.tangle)},
                  {"matched", rec.kirby_image.has_value()}};
      r.result["kirby_image"] =
          rec.kirby_image ? json(rec.kirby_image->to_string()) : json(nullptr);
      if (rec.boundary) r.invariant_record = boundary_json(*rec.boundary);
      r.text = "walled " + rec.source.to_string() + " | " +
               rec.target.to_string() +
               (rec.kirby_image ? ", Kirby image " + rec.kirby_image->to_string()
                                : std::string(", walls do not match"));
    } else if (v == "compose") {
      const auto h = compose(operad(args[0]), operad(args[1]));
      const auto viol = validate(h);
      r.result = {{"morphism", h.to_string()},
                  {"valid", viol.empty()},
                  {"violations", viol}};
      r.text = args[0] + " o " + args[1] + " = " + h.to_string();
    } else if (v == "validate") {
      const auto viol = validate(operad(args[0]));
      r.result = {{"valid", viol.empty()}, {"violations", viol}};
      r.text = viol.empty() ? "valid" : "invalid: " + viol.front();
    } else if (v == "framing") {
      std::vector<OperadMorphism> ops;
      for (const auto& a : args) ops.push_back(operad(a));
      const auto total = framing_of_loop(ops);
      const auto strand = loop_braid(ops);
      const auto kinks = from_closed_braid(close(strand));
      r.result = {{"framing", total.get_str()},
                  {"kink_framing", kinks(0, 0).get_str()}};
      r.text = "framing " + total.get_str();
    }
  }

  const Script& script_;
  RunOptions options_;
  std::set<std::string> all_names_;
  std::map<std::string, FramedBraid> braids_;
  std::map<std::string, LinkingMatrix> matrices_;
  std::map<std::string, FiniteFreeCategory> categories_;
  std::map<std::string, OperadMorphism> operads_;
  CommandResult* current_ = nullptr;
};

}  // namespace

json CommandResult::record() const {
  return {{"command", command},
          {"inputs", inputs},
          {"result", result},
          {"invariant_record", invariant_record}};
}

void run(const Script& s, const RunOptions& options,
         const std::function<void(const CommandResult&)>& sink) {
  Runner(s, options).execute(sink);
}

Definitions definitions(const Script& s) {
  return Runner(s, RunOptions{}).collect();
}

std::vector<CommandResult> run(const Script& s, const RunOptions& options) {
  std::vector<CommandResult> out;
  run(s, options, [&](const CommandResult& r) { out.push_back(r); });
  return out;
}

std::string render(const CommandResult& r, OutputFormat format) {
  if (format == OutputFormat::Machine) return r.record().dump();
  std::string head = r.command;
  for (const auto& a : r.inputs.at("args")) head += " " + a.get<std::string>();
  return head + " => " + r.text;
}

std::vector<std::string> schema_violations(const json& rec) {
  std::vector<std::string> out;
  if (!rec.is_object()) return {"record is not an object"};
  for (const auto& [key, value] : rec.items()) {
    if (key != "command" && key != "inputs" && key != "result" &&
        key != "invariant_record") {
      out.push_back("unexpected field " + key);
    }
  }
  if (!rec.contains("command") || !rec["command"].is_string()) {
    out.push_back("command must be a string");
  } else if (!command_shapes().count(rec["command"].get<std::string>())) {
    out.push_back("unknown command " + rec["command"].dump());
  }
  if (!rec.contains("inputs") || !rec["inputs"].is_object()) {
    out.push_back("inputs must be an object");
  } else {
    const auto& in = rec["inputs"];
    if (!in.contains("args") || !in["args"].is_array()) {
      out.push_back("inputs.args must be an array");
    } else {
      for (const auto& a : in["args"]) {
        if (!a.is_string()) out.push_back("inputs.args entries are strings");
      }
    }
    for (const char* key : {"options", "operands"}) {
      if (!in.contains(key) || !in[key].is_object()) {
        out.push_back(std::string("inputs.") + key + " must be an object");
        continue;
      }
      for (const auto& [k, v] : in[key].items()) {
        if (!v.is_string()) {
          out.push_back(std::string("inputs.") + key + "." + k +
                        " must be a string");
        }
      }
    }
  }
  if (!rec.contains("result") || !rec["result"].is_object()) {
    out.push_back("result must be an object");
  }
  if (!rec.contains("invariant_record")) {
    out.push_back("invariant_record is missing");
  } else if (const auto& inv = rec["invariant_record"]; !inv.is_null()) {
    if (!inv.is_object()) {
      out.push_back("invariant_record must be null or an object");
    } else {
      for (const char* key : {"h1_free_rank", "b2", "euler"}) {
        if (!inv.contains(key) || !inv[key].is_number_unsigned()) {
          out.push_back(std::string("invariant_record.") + key +
                        " must be a nonnegative integer");
        }
      }
      if (!inv.contains("sigma") || !inv["sigma"].is_number_integer()) {
        out.push_back("invariant_record.sigma must be an integer");
      }
      if (!inv.contains("h1_torsion") || !inv["h1_torsion"].is_array()) {
        out.push_back("invariant_record.h1_torsion must be an array");
      } else {
        for (const auto& d : inv["h1_torsion"]) {
          if (!d.is_string() || !parse_integer(d.get<std::string>())) {
            out.push_back("invariant_record.h1_torsion entries are integer "
                          "strings");
          }
        }
      }
      if (inv.size() != 5) out.push_back("invariant_record has extra fields");
    }
  }
  return out;
}

}  // namespace kirbycat
