// Abstract syntax for freeze LTL and for a first-order dialect with
// data-equality and bounded-distance atoms, plus the S-expression grammar
// and the standard-translation map from LTL into FO.

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ocmc {

struct FormulaError : std::runtime_error {
  explicit FormulaError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// LTL with registers. Core connectives only; or/imp/F/G/F+/G+ are sugar.

enum class LtlKind : uint8_t { True, State, Up, Not, And, Until, Next, Down };

struct LtlNode;
using Ltl = std::shared_ptr<const LtlNode>;

struct LtlNode {
  LtlKind kind;
  std::string atom;  // State
  int reg = 0;       // Up, Down
  Ltl a, b;
};

inline Ltl ltl_true() {
  static Ltl t = std::make_shared<LtlNode>(LtlNode{LtlKind::True, "", 0, nullptr, nullptr});
  return t;
}
inline Ltl ltl_state(std::string name) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::State, std::move(name), 0, nullptr, nullptr});
}
inline Ltl ltl_up(int r) {
  if (r <= 0) throw FormulaError("registers range over positive integers");
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Up, "", r, nullptr, nullptr});
}
inline Ltl ltl_not(Ltl f) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Not, "", 0, std::move(f), nullptr});
}
inline Ltl ltl_and(Ltl f, Ltl g) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::And, "", 0, std::move(f), std::move(g)});
}
inline Ltl ltl_until(Ltl f, Ltl g) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Until, "", 0, std::move(f), std::move(g)});
}
inline Ltl ltl_next(Ltl f) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Next, "", 0, std::move(f), nullptr});
}
inline Ltl ltl_down(int r, Ltl f) {
  if (r <= 0) throw FormulaError("registers range over positive integers");
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Down, "", r, std::move(f), nullptr});
}

inline Ltl ltl_false() { return ltl_not(ltl_true()); }
inline Ltl ltl_or(Ltl f, Ltl g) { return ltl_not(ltl_and(ltl_not(std::move(f)), ltl_not(std::move(g)))); }
inline Ltl ltl_imp(Ltl f, Ltl g) { return ltl_not(ltl_and(std::move(f), ltl_not(std::move(g)))); }
inline Ltl ltl_eventually(Ltl f) { return ltl_until(ltl_true(), std::move(f)); }
inline Ltl ltl_always(Ltl f) { return ltl_not(ltl_eventually(ltl_not(std::move(f)))); }
inline Ltl ltl_eventually_strict(Ltl f) { return ltl_next(ltl_eventually(std::move(f))); }
inline Ltl ltl_always_strict(Ltl f) { return ltl_next(ltl_always(std::move(f))); }
inline Ltl ltl_next_k(size_t k, Ltl f) {
  while (k--) f = ltl_next(std::move(f));
  return f;
}
// Balanced folds keep recursion depth logarithmic in the number of operands;
// generated constructions produce disjunctions with thousands of members.
namespace detail {
template <class T, class Join>
T fold_balanced(const std::vector<T>& fs, size_t lo, size_t hi, Join join) {
  if (hi - lo == 1) return fs[lo];
  size_t mid = lo + (hi - lo) / 2;
  return join(fold_balanced(fs, lo, mid, join), fold_balanced(fs, mid, hi, join));
}
}  // namespace detail

inline Ltl ltl_and_all(const std::vector<Ltl>& fs) {
  if (fs.empty()) return ltl_true();
  return detail::fold_balanced(fs, 0, fs.size(), [](Ltl a, Ltl b) { return ltl_and(a, b); });
}
inline Ltl ltl_or_all(const std::vector<Ltl>& fs) {
  if (fs.empty()) return ltl_false();
  return detail::fold_balanced(fs, 0, fs.size(), [](Ltl a, Ltl b) { return ltl_or(a, b); });
}

inline bool ltl_equal(const Ltl& f, const Ltl& g) {
  if (f == g) return true;
  if (!f || !g) return false;
  if (f->kind != g->kind || f->atom != g->atom || f->reg != g->reg) return false;
  return ltl_equal(f->a, g->a) && ltl_equal(f->b, g->b);
}

// ---------------------------------------------------------------------------
// First-order dialect. Besides the usual a(x), x ~ y, x < y atoms it carries
// constants natively: Succ(x,y,c) is x = y + c, DistLt(x,y,c) is u(y) < u(x)+c
// and PosLt(x,c) is u(x) < c. Keeping constants in atoms keeps quantifier
// depth small, which the evaluator bound depends on exponentially.

enum class FoKind : uint8_t { True, Letter, Sim, Lt, Succ, DistLt, PosLt, Not, And, Exists };

struct FoNode;
using Fo = std::shared_ptr<const FoNode>;

struct FoNode {
  FoKind kind;
  std::string atom;  // Letter
  std::string x, y;  // variables; Exists binds x
  uint64_t c = 0;    // Succ (>=1), DistLt, PosLt
  Fo a, b;
};

inline Fo fo_true() {
  static Fo t = std::make_shared<FoNode>(FoNode{FoKind::True, "", "", "", 0, nullptr, nullptr});
  return t;
}
inline Fo fo_letter(std::string letter, std::string x) {
  return std::make_shared<FoNode>(FoNode{FoKind::Letter, std::move(letter), std::move(x), "", 0, nullptr, nullptr});
}
inline Fo fo_sim(std::string x, std::string y) {
  return std::make_shared<FoNode>(FoNode{FoKind::Sim, "", std::move(x), std::move(y), 0, nullptr, nullptr});
}
inline Fo fo_lt(std::string x, std::string y) {
  return std::make_shared<FoNode>(FoNode{FoKind::Lt, "", std::move(x), std::move(y), 0, nullptr, nullptr});
}
inline Fo fo_succ(std::string x, std::string y, uint64_t c) {
  if (c < 1) throw FormulaError("succ constant must be >= 1");
  return std::make_shared<FoNode>(FoNode{FoKind::Succ, "", std::move(x), std::move(y), c, nullptr, nullptr});
}
inline Fo fo_distlt(std::string x, std::string y, uint64_t c) {
  return std::make_shared<FoNode>(FoNode{FoKind::DistLt, "", std::move(x), std::move(y), c, nullptr, nullptr});
}
inline Fo fo_poslt(std::string x, uint64_t c) {
  return std::make_shared<FoNode>(FoNode{FoKind::PosLt, "", std::move(x), "", c, nullptr, nullptr});
}
inline Fo fo_not(Fo f) {
  return std::make_shared<FoNode>(FoNode{FoKind::Not, "", "", "", 0, std::move(f), nullptr});
}
inline Fo fo_and(Fo f, Fo g) {
  return std::make_shared<FoNode>(FoNode{FoKind::And, "", "", "", 0, std::move(f), std::move(g)});
}
inline Fo fo_exists(std::string x, Fo f) {
  return std::make_shared<FoNode>(FoNode{FoKind::Exists, "", std::move(x), "", 0, std::move(f), nullptr});
}

inline Fo fo_false() { return fo_not(fo_true()); }
inline Fo fo_or(Fo f, Fo g) { return fo_not(fo_and(fo_not(std::move(f)), fo_not(std::move(g)))); }
inline Fo fo_imp(Fo f, Fo g) { return fo_not(fo_and(std::move(f), fo_not(std::move(g)))); }
inline Fo fo_forall(std::string x, Fo f) { return fo_not(fo_exists(std::move(x), fo_not(std::move(f)))); }
// x <= y, defined at the atom level so that undefined variables make it false.
inline Fo fo_le(std::string x, std::string y) { return fo_distlt(std::move(y), std::move(x), 1); }
inline Fo fo_eq(const std::string& x, const std::string& y) {
  return fo_and(fo_le(x, y), fo_le(y, x));
}
inline Fo fo_and_all(const std::vector<Fo>& fs) {
  if (fs.empty()) return fo_true();
  return detail::fold_balanced(fs, 0, fs.size(), [](Fo a, Fo b) { return fo_and(a, b); });
}
inline Fo fo_or_all(const std::vector<Fo>& fs) {
  if (fs.empty()) return fo_false();
  return detail::fold_balanced(fs, 0, fs.size(), [](Fo a, Fo b) { return fo_or(a, b); });
}

inline bool fo_equal(const Fo& f, const Fo& g) {
  if (f == g) return true;
  if (!f || !g) return false;
  if (f->kind != g->kind || f->atom != g->atom || f->x != g->x ||
      f->y != g->y || f->c != g->c)
    return false;
  return fo_equal(f->a, g->a) && fo_equal(f->b, g->b);
}

// ---------------------------------------------------------------------------
// Static analysis.

inline void collect_registers(const Ltl& f, std::set<int>& regs) {
  if (!f) return;
  if (f->kind == LtlKind::Up || f->kind == LtlKind::Down) regs.insert(f->reg);
  collect_registers(f->a, regs);
  collect_registers(f->b, regs);
}

inline size_t register_count(const Ltl& f) {
  std::set<int> regs;
  collect_registers(f, regs);
  return regs.size();
}

namespace detail {
inline bool sentence_rec(const Ltl& f, std::set<int>& bound) {
  if (!f) return true;
  switch (f->kind) {
    case LtlKind::Up:
      return bound.count(f->reg) > 0;
    case LtlKind::Down: {
      bool added = bound.insert(f->reg).second;
      bool ok = sentence_rec(f->a, bound);
      if (added) bound.erase(f->reg);
      return ok;
    }
    default:
      return sentence_rec(f->a, bound) && sentence_rec(f->b, bound);
  }
}
}  // namespace detail

inline bool is_sentence(const Ltl& f) {
  std::set<int> bound;
  return detail::sentence_rec(f, bound);
}

inline bool is_pure(const Ltl& f) {
  if (!f) return true;
  if (f->kind == LtlKind::State) return false;
  return is_pure(f->a) && is_pure(f->b);
}

inline bool is_pure(const Fo& f) {
  if (!f) return true;
  if (f->kind == FoKind::Letter) return false;
  return is_pure(f->a) && is_pure(f->b);
}

inline size_t quantifier_depth(const Fo& f) {
  if (!f) return 0;
  size_t d = std::max(quantifier_depth(f->a), quantifier_depth(f->b));
  return f->kind == FoKind::Exists ? d + 1 : d;
}

inline uint64_t max_constant(const Fo& f) {
  if (!f) return 0;
  uint64_t c = std::max(max_constant(f->a), max_constant(f->b));
  if (f->kind == FoKind::Succ || f->kind == FoKind::DistLt || f->kind == FoKind::PosLt)
    c = std::max(c, f->c);
  return c;
}

inline void collect_variables(const Fo& f, std::set<std::string>& vars) {
  if (!f) return;
  switch (f->kind) {
    case FoKind::Letter:
    case FoKind::PosLt:
      vars.insert(f->x);
      break;
    case FoKind::Sim:
    case FoKind::Lt:
    case FoKind::Succ:
    case FoKind::DistLt:
      vars.insert(f->x);
      vars.insert(f->y);
      break;
    case FoKind::Exists:
      vars.insert(f->x);
      break;
    default:
      break;
  }
  collect_variables(f->a, vars);
  collect_variables(f->b, vars);
}

inline void collect_free_variables(const Fo& f, std::set<std::string>& bound,
                                   std::set<std::string>& free) {
  if (!f) return;
  switch (f->kind) {
    case FoKind::Letter:
    case FoKind::PosLt:
      if (!bound.count(f->x)) free.insert(f->x);
      break;
    case FoKind::Sim:
    case FoKind::Lt:
    case FoKind::Succ:
    case FoKind::DistLt:
      if (!bound.count(f->x)) free.insert(f->x);
      if (!bound.count(f->y)) free.insert(f->y);
      break;
    case FoKind::Exists: {
      bool added = bound.insert(f->x).second;
      collect_free_variables(f->a, bound, free);
      if (added) bound.erase(f->x);
      return;
    }
    default:
      break;
  }
  collect_free_variables(f->a, bound, free);
  collect_free_variables(f->b, bound, free);
}

inline std::set<std::string> free_variables(const Fo& f) {
  std::set<std::string> bound, free;
  collect_free_variables(f, bound, free);
  return free;
}

inline bool is_fo_sentence(const Fo& f) { return free_variables(f).empty(); }

// ---------------------------------------------------------------------------
// S-expressions.

namespace sexpr {

struct Node {
  std::string token;           // leaf
  std::vector<Node> children;  // list
  bool is_leaf() const { return children.empty() && !token.empty(); }
};

inline void skip_ws(std::string_view s, size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline Node parse_node(std::string_view s, size_t& i) {
  skip_ws(s, i);
  if (i >= s.size()) throw FormulaError("unexpected end of input");
  if (s[i] == '(') {
    ++i;
    Node n;
    n.token.clear();
    skip_ws(s, i);
    while (i < s.size() && s[i] != ')') {
      n.children.push_back(parse_node(s, i));
      skip_ws(s, i);
    }
    if (i >= s.size()) throw FormulaError("missing ')'");
    ++i;
    if (n.children.empty()) throw FormulaError("empty list");
    return n;
  }
  if (s[i] == ')') throw FormulaError("unexpected ')'");
  size_t j = i;
  while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) &&
         s[j] != '(' && s[j] != ')')
    ++j;
  Node n;
  n.token = std::string(s.substr(i, j - i));
  i = j;
  return n;
}

inline Node parse(std::string_view s) {
  size_t i = 0;
  Node n = parse_node(s, i);
  skip_ws(s, i);
  if (i != s.size()) throw FormulaError("trailing input after formula");
  return n;
}

inline const Node& head(const Node& n) { return n.children.at(0); }

}  // namespace sexpr

namespace detail {

inline int parse_register(const std::string& tok) {
  if (tok.empty()) throw FormulaError("expected register");
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw FormulaError("malformed register '" + tok + "'");
  long r = std::stol(tok);
  if (r <= 0) throw FormulaError("registers range over positive integers, got " + tok);
  return static_cast<int>(r);
}

inline uint64_t parse_constant(const std::string& tok) {
  if (tok.empty()) throw FormulaError("malformed constant");
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw FormulaError("malformed constant '" + tok + "'");
  return std::stoull(tok);
}

inline Ltl ltl_from_sexpr(const sexpr::Node& n) {
  if (n.is_leaf()) {
    if (n.token == "true") return ltl_true();
    if (n.token == "false") return ltl_false();
    throw FormulaError("unknown formula '" + n.token + "'");
  }
  const std::string& h = sexpr::head(n).token;
  auto arity = [&](size_t k) {
    if (n.children.size() != k + 1)
      throw FormulaError("'" + h + "' expects " + std::to_string(k) + " arguments");
  };
  auto arg = [&](size_t i) { return ltl_from_sexpr(n.children.at(i + 1)); };
  if (h == "not") { arity(1); return ltl_not(arg(0)); }
  if (h == "X") { arity(1); return ltl_next(arg(0)); }
  if (h == "F") { arity(1); return ltl_eventually(arg(0)); }
  if (h == "G") { arity(1); return ltl_always(arg(0)); }
  if (h == "Fp") { arity(1); return ltl_eventually_strict(arg(0)); }
  if (h == "Gp") { arity(1); return ltl_always_strict(arg(0)); }
  if (h == "U") { arity(2); return ltl_until(arg(0), arg(1)); }
  if (h == "imp") { arity(2); return ltl_imp(arg(0), arg(1)); }
  if (h == "and" || h == "or") {
    if (n.children.size() < 3) throw FormulaError("'" + h + "' expects >= 2 arguments");
    std::vector<Ltl> args;
    for (size_t i = 1; i < n.children.size(); ++i)
      args.push_back(ltl_from_sexpr(n.children[i]));
    return h == "and" ? ltl_and_all(args) : ltl_or_all(args);
  }
  if (h == "up") {
    arity(1);
    return ltl_up(parse_register(n.children.at(1).token));
  }
  if (h == "down") {
    arity(2);
    return ltl_down(parse_register(n.children.at(1).token), ltl_from_sexpr(n.children.at(2)));
  }
  if (h == "state") {
    arity(1);
    return ltl_state(n.children.at(1).token);
  }
  throw FormulaError("unknown LTL head '" + h + "'");
}

inline Fo fo_from_sexpr(const sexpr::Node& n) {
  if (n.is_leaf()) {
    if (n.token == "true") return fo_true();
    if (n.token == "false") return fo_false();
    throw FormulaError("unknown formula '" + n.token + "'");
  }
  const std::string& h = sexpr::head(n).token;
  auto arity = [&](size_t k) {
    if (n.children.size() != k + 1)
      throw FormulaError("'" + h + "' expects " + std::to_string(k) + " arguments");
  };
  auto var = [&](size_t i) -> const std::string& {
    const sexpr::Node& c = n.children.at(i + 1);
    if (!c.is_leaf()) throw FormulaError("expected a variable");
    return c.token;
  };
  if (h == "not") { arity(1); return fo_not(fo_from_sexpr(n.children.at(1))); }
  if (h == "and" || h == "or") {
    if (n.children.size() < 3) throw FormulaError("'" + h + "' expects >= 2 arguments");
    std::vector<Fo> args;
    for (size_t i = 1; i < n.children.size(); ++i)
      args.push_back(fo_from_sexpr(n.children[i]));
    return h == "and" ? fo_and_all(args) : fo_or_all(args);
  }
  if (h == "imp") {
    arity(2);
    return fo_imp(fo_from_sexpr(n.children.at(1)), fo_from_sexpr(n.children.at(2)));
  }
  if (h == "exists") { arity(2); return fo_exists(var(0), fo_from_sexpr(n.children.at(2))); }
  if (h == "forall") { arity(2); return fo_forall(var(0), fo_from_sexpr(n.children.at(2))); }
  if (h == "sim") { arity(2); return fo_sim(var(0), var(1)); }
  if (h == "lt") { arity(2); return fo_lt(var(0), var(1)); }
  if (h == "le") { arity(2); return fo_le(var(0), var(1)); }
  if (h == "letter") { arity(2); return fo_letter(n.children.at(1).token, var(1)); }
  if (h.rfind("succ+", 0) == 0) {
    arity(2);
    return fo_succ(var(0), var(1), parse_constant(h.substr(5)));
  }
  if (h.rfind("distlt", 0) == 0) {
    arity(2);
    return fo_distlt(var(0), var(1), parse_constant(h.substr(6)));
  }
  if (h.rfind("poslt", 0) == 0) {
    arity(1);
    return fo_poslt(var(0), parse_constant(h.substr(5)));
  }
  throw FormulaError("unknown FO head '" + h + "'");
}

}  // namespace detail

inline Ltl parse_ltl(std::string_view text) {
  return detail::ltl_from_sexpr(sexpr::parse(text));
}

inline Fo parse_fo(std::string_view text) {
  return detail::fo_from_sexpr(sexpr::parse(text));
}

inline std::string render_ltl(const Ltl& f) {
  switch (f->kind) {
    case LtlKind::True: return "true";
    case LtlKind::State: return "(state " + f->atom + ")";
    case LtlKind::Up: return "(up " + std::to_string(f->reg) + ")";
    case LtlKind::Not: return "(not " + render_ltl(f->a) + ")";
    case LtlKind::And: return "(and " + render_ltl(f->a) + " " + render_ltl(f->b) + ")";
    case LtlKind::Until: return "(U " + render_ltl(f->a) + " " + render_ltl(f->b) + ")";
    case LtlKind::Next: return "(X " + render_ltl(f->a) + ")";
    case LtlKind::Down:
      return "(down " + std::to_string(f->reg) + " " + render_ltl(f->a) + ")";
  }
  throw FormulaError("bad LTL node");
}

inline std::string render_fo(const Fo& f) {
  switch (f->kind) {
    case FoKind::True: return "true";
    case FoKind::Letter: return "(letter " + f->atom + " " + f->x + ")";
    case FoKind::Sim: return "(sim " + f->x + " " + f->y + ")";
    case FoKind::Lt: return "(lt " + f->x + " " + f->y + ")";
    case FoKind::Succ:
      return "(succ+" + std::to_string(f->c) + " " + f->x + " " + f->y + ")";
    case FoKind::DistLt:
      return "(distlt" + std::to_string(f->c) + " " + f->x + " " + f->y + ")";
    case FoKind::PosLt:
      return "(poslt" + std::to_string(f->c) + " " + f->x + ")";
    case FoKind::Not: return "(not " + render_fo(f->a) + ")";
    case FoKind::And: return "(and " + render_fo(f->a) + " " + render_fo(f->b) + ")";
    case FoKind::Exists: return "(exists " + f->x + " " + render_fo(f->a) + ")";
  }
  throw FormulaError("bad FO node");
}

// Unit propagation of true/false through not/and/exists. Structure-preserving
// otherwise; keeps translated formulas from dragging vacuous quantifiers into
// the evaluator bound.
inline Fo fo_simplify(const Fo& f) {
  if (!f) return f;
  switch (f->kind) {
    case FoKind::Not: {
      Fo a = fo_simplify(f->a);
      if (a->kind == FoKind::True) return fo_false();
      if (a->kind == FoKind::Not && a->a->kind == FoKind::True) return fo_true();
      return fo_not(a);
    }
    case FoKind::And: {
      Fo a = fo_simplify(f->a);
      Fo b = fo_simplify(f->b);
      auto is_true = [](const Fo& g) { return g->kind == FoKind::True; };
      auto is_false = [](const Fo& g) {
        return g->kind == FoKind::Not && g->a->kind == FoKind::True;
      };
      if (is_false(a) || is_false(b)) return fo_false();
      if (is_true(a)) return b;
      if (is_true(b)) return a;
      return fo_and(a, b);
    }
    case FoKind::Exists: {
      Fo a = fo_simplify(f->a);
      if (a->kind == FoKind::Not && a->a->kind == FoKind::True) return fo_false();
      return fo_exists(f->x, a);
    }
    default:
      return f;
  }
}

// ---------------------------------------------------------------------------
// Standard translation from LTL with registers into the FO dialect.
// Registers r map to variables x<r>; the current position is threaded through
// y0, y1, y2, recycled cyclically. Runs of X are coalesced into one Succ
// atom so quantifier depth stays proportional to the temporal nesting.
// The output has a unique free variable y0 and uses at most n + 3 variables.

namespace detail {

inline std::string yvar(int i) { return "y" + std::to_string(((i % 3) + 3) % 3); }
inline std::string xvar(int r) { return "x" + std::to_string(r); }

inline Fo ltl_to_fo_rec(const Ltl& f, int yi) {
  std::string y = yvar(yi);
  switch (f->kind) {
    case LtlKind::True:
      return fo_true();
    case LtlKind::State:
      return fo_letter(f->atom, y);
    case LtlKind::Up:
      return fo_sim(y, xvar(f->reg));
    case LtlKind::Not:
      return fo_not(ltl_to_fo_rec(f->a, yi));
    case LtlKind::And:
      return fo_and(ltl_to_fo_rec(f->a, yi), ltl_to_fo_rec(f->b, yi));
    case LtlKind::Next: {
      uint64_t k = 0;
      Ltl g = f;
      while (g->kind == LtlKind::Next) {
        ++k;
        g = g->a;
      }
      std::string y1 = yvar(yi + 1);
      return fo_exists(y1, fo_and(fo_succ(y1, y, k), ltl_to_fo_rec(g, yi + 1)));
    }
    case LtlKind::Until: {
      std::string y1 = yvar(yi + 1);
      std::string y2 = yvar(yi + 2);
      Fo witness = ltl_to_fo_rec(f->b, yi + 1);
      Fo side = ltl_to_fo_rec(f->a, yi + 2);
      Fo between = fo_forall(
          y2, fo_imp(fo_and(fo_le(y, y2), fo_lt(y2, y1)), side));
      return fo_exists(y1, fo_and(fo_le(y, y1), fo_and(witness, between)));
    }
    case LtlKind::Down: {
      std::string xr = xvar(f->reg);
      return fo_exists(xr, fo_and(fo_eq(xr, y), ltl_to_fo_rec(f->a, yi)));
    }
  }
  throw FormulaError("bad LTL node");
}

}  // namespace detail

inline Fo ltl_to_fo(const Ltl& f) {
  if (!is_sentence(f)) throw FormulaError("ltl_to_fo expects a sentence");
  return fo_simplify(detail::ltl_to_fo_rec(f, 0));
}

// Closes the translation's free y0 at the first position:
// exists y0 ((no position below y0) and T(phi, y0)).
inline Fo close_at_first_position(const Fo& translated) {
  Fo first = fo_not(fo_exists("y1", fo_lt("y1", "y0")));
  return fo_exists("y0", fo_and(first, translated));
}

// Relativizes every quantifier to positions <= the given end variable.
inline Fo fo_relativize_to(const Fo& f, const std::string& end_var) {
  if (!f) return f;
  if (f->kind == FoKind::Exists)
    return fo_exists(f->x, fo_and(fo_le(f->x, end_var),
                                  fo_relativize_to(f->a, end_var)));
  if (!f->a && !f->b) return f;
  auto n = std::make_shared<FoNode>(*f);
  n->a = fo_relativize_to(f->a, end_var);
  n->b = fo_relativize_to(f->b, end_var);
  return n;
}

// A variable name not occurring anywhere in f, preferring `base`.
inline std::string fresh_variable(const Fo& f, const std::string& base) {
  std::set<std::string> used;
  collect_variables(f, used);
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

}  // namespace ocmc
