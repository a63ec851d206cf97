// Generators for the hardness constructions: the QBF chain automaton, the
// two-counter-machine gadget automaton with its rule formula, and the
// omega-SAT two-state automaton, each paired with its formula translation.

#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ocmc/formula.hpp"
#include "ocmc/oca.hpp"
#include "ocmc/semantics.hpp"

namespace ocmc {

struct ReductionError : std::runtime_error {
  explicit ReductionError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// QBF instances: forall p1 exists p2 ... forall p_{2N-1} exists p_{2N} matrix.

struct PropNode;
using Prop = std::shared_ptr<const PropNode>;

struct PropNode {
  enum class Kind : uint8_t { Var, Not, And, Or, Const } kind;
  int var = 0;  // 1-based
  bool value = false;
  Prop a, b;
};

inline Prop prop_var(int v) {
  return std::make_shared<PropNode>(PropNode{PropNode::Kind::Var, v, false, nullptr, nullptr});
}
inline Prop prop_const(bool v) {
  return std::make_shared<PropNode>(PropNode{PropNode::Kind::Const, 0, v, nullptr, nullptr});
}
inline Prop prop_not(Prop f) {
  return std::make_shared<PropNode>(PropNode{PropNode::Kind::Not, 0, false, std::move(f), nullptr});
}
inline Prop prop_and(Prop f, Prop g) {
  return std::make_shared<PropNode>(PropNode{PropNode::Kind::And, 0, false, std::move(f), std::move(g)});
}
inline Prop prop_or(Prop f, Prop g) {
  return std::make_shared<PropNode>(PropNode{PropNode::Kind::Or, 0, false, std::move(f), std::move(g)});
}
inline Prop prop_imp(Prop f, Prop g) { return prop_or(prop_not(std::move(f)), std::move(g)); }
inline Prop prop_iff(Prop f, Prop g) {
  return prop_and(prop_imp(f, g), prop_imp(g, f));
}

inline bool prop_eval(const Prop& f, const std::vector<bool>& v) {
  switch (f->kind) {
    case PropNode::Kind::Var: return v.at(f->var - 1);
    case PropNode::Kind::Const: return f->value;
    case PropNode::Kind::Not: return !prop_eval(f->a, v);
    case PropNode::Kind::And: return prop_eval(f->a, v) && prop_eval(f->b, v);
    case PropNode::Kind::Or: return prop_eval(f->a, v) || prop_eval(f->b, v);
  }
  throw ReductionError("bad prop node");
}

inline int max_prop_var(const Prop& f) {
  if (!f) return 0;
  int m = std::max(max_prop_var(f->a), max_prop_var(f->b));
  return f->kind == PropNode::Kind::Var ? std::max(m, f->var) : m;
}

struct QbfInstance {
  int n2 = 0;   // number of quantified variables, even, prefix starts with forall
  Prop matrix;
};

inline void validate_qbf(const QbfInstance& q) {
  if (q.n2 < 2 || q.n2 % 2 != 0)
    throw ReductionError("QBF prefix must be a positive even number of quantifiers");
  if (max_prop_var(q.matrix) > q.n2)
    throw ReductionError("matrix mentions an undeclared variable");
}

namespace detail {

inline Prop prop_from_sexpr(const sexpr::Node& n) {
  if (n.is_leaf()) {
    if (n.token == "true") return prop_const(true);
    if (n.token == "false") return prop_const(false);
    if (n.token.size() > 1 && n.token[0] == 'p') {
      int v = std::stoi(n.token.substr(1));
      if (v <= 0) throw ReductionError("bad variable " + n.token);
      return prop_var(v);
    }
    throw ReductionError("unknown proposition '" + n.token + "'");
  }
  const std::string& h = sexpr::head(n).token;
  auto arg = [&](size_t i) { return prop_from_sexpr(n.children.at(i + 1)); };
  if (h == "not" && n.children.size() == 2) return prop_not(arg(0));
  if (h == "imp" && n.children.size() == 3) return prop_imp(arg(0), arg(1));
  if (h == "iff" && n.children.size() == 3) return prop_iff(arg(0), arg(1));
  if ((h == "and" || h == "or") && n.children.size() >= 3) {
    Prop out = arg(0);
    for (size_t i = 2; i < n.children.size(); ++i)
      out = h == "and" ? prop_and(out, prop_from_sexpr(n.children[i]))
                       : prop_or(out, prop_from_sexpr(n.children[i]));
    return out;
  }
  throw ReductionError("unknown matrix head '" + h + "'");
}

}  // namespace detail

// Format: a prefix line "forall p1 exists p2 ..." followed by one
// S-expression matrix over the pi.
inline QbfInstance parse_qbf(std::string_view text) {
  size_t nl = text.find('\n');
  if (nl == std::string_view::npos) throw ReductionError("missing matrix line");
  std::vector<std::string> toks = ocmc::detail::split_ws(text.substr(0, nl));
  if (toks.size() < 2 || toks.size() % 2 != 0)
    throw ReductionError("malformed quantifier prefix");
  QbfInstance q;
  for (size_t i = 0; i + 1 < toks.size(); i += 2) {
    const std::string& want = (i / 2) % 2 == 0 ? "forall" : "exists";
    if (toks[i] != want)
      throw ReductionError("prefix must alternate starting with forall");
    if (toks[i + 1] != "p" + std::to_string(i / 2 + 1))
      throw ReductionError("prefix variables must be p1 p2 ... in order");
  }
  q.n2 = static_cast<int>(toks.size() / 2);
  if (q.n2 % 2 != 0) throw ReductionError("prefix length must be even");
  q.matrix = detail::prop_from_sexpr(sexpr::parse(text.substr(nl + 1)));
  validate_qbf(q);
  return q;
}

inline bool solve_qbf_bruteforce(const QbfInstance& q) {
  validate_qbf(q);
  if (q.n2 > 20) throw ReductionError("QBF brute force capped at 20 variables");
  std::vector<bool> v(q.n2, false);
  auto game = [&](auto&& self, int i) -> bool {
    if (i == q.n2) return prop_eval(q.matrix, v);
    bool exists_turn = i % 2 == 1;  // p1 forall, p2 exists, ...
    v[i] = false;
    bool f0 = self(self, i + 1);
    if (exists_turn && f0) return true;
    if (!exists_turn && !f0) return false;
    v[i] = true;
    return self(self, i + 1);
  };
  return game(game, 0);
}

// The deterministic chain automaton whose run has counter trace 0(01)^{2N}0...
// together with the register formula simulating the quantifier prefix.
struct QbfReduction {
  Oca oca;
  Ltl formula;
};

inline QbfReduction qbf_to_instance(const QbfInstance& q) {
  validate_qbf(q);
  const int n2 = q.n2;
  Oca a;
  StateId q0 = a.add_state("q0");
  std::vector<StateId> plain(n2 + 1), primed(n2 + 1);
  for (int i = 1; i <= n2; ++i) {
    plain[i] = a.add_state("q" + std::to_string(i));
    primed[i] = a.add_state("q" + std::to_string(i) + "'");
  }
  StateId qf = a.add_state("qF");
  a.set_initial(q0);
  a.mark_accepting(qf);
  // never-firing partners keep the deterministic shape
  a.add_transition(q0, Instr::Ifzero, plain[1]);
  a.add_transition(q0, Instr::Dec, q0);
  for (int i = 1; i <= n2; ++i) {
    a.add_transition(plain[i], Instr::Inc, primed[i]);
    a.add_transition(primed[i], Instr::Dec, i == n2 ? qf : plain[i + 1]);
    a.add_transition(primed[i], Instr::Ifzero, primed[i]);
  }
  a.add_transition(qf, Instr::Ifzero, qf);
  a.add_transition(qf, Instr::Dec, qf);

  // psi_{2N+1} = F(qF and matrix[p_i <- not up_i]); down at q_{2i}/q'_{2i}
  // chooses p_{2i}, storing counter 0 (false) or 1 (true).
  auto subst = [&](auto&& self, const Prop& p) -> Ltl {
    switch (p->kind) {
      case PropNode::Kind::Var: return ltl_not(ltl_up(p->var));
      case PropNode::Kind::Const: return p->value ? ltl_true() : ltl_false();
      case PropNode::Kind::Not: return ltl_not(self(self, p->a));
      case PropNode::Kind::And: return ltl_and(self(self, p->a), self(self, p->b));
      case PropNode::Kind::Or: return ltl_or(self(self, p->a), self(self, p->b));
    }
    throw ReductionError("bad prop node");
  };
  Ltl psi = ltl_eventually(ltl_and(ltl_state("qF"), subst(subst, q.matrix)));
  for (int i = n2; i >= 1; --i) {
    Ltl here = ltl_or(ltl_state("q" + std::to_string(i)),
                      ltl_state("q" + std::to_string(i) + "'"));
    Ltl step = ltl_down(i, ltl_next(psi));
    psi = i % 2 == 0 ? ltl_eventually(ltl_and(here, step))
                     : ltl_always(ltl_imp(here, step));
  }
  return {std::move(a), std::move(psi)};
}

// ---------------------------------------------------------------------------
// Two-counter machines and the halting-problem gadget automaton.

struct TwoCounterMachine {
  struct Tr {
    size_t src;
    Instr op;
    int counter;  // 1 or 2
    size_t dst;
  };
  std::vector<std::string> states;
  size_t initial = 0;
  std::set<size_t> accepting;
  std::vector<Tr> transitions;
};

inline void validate_tcm(const TwoCounterMachine& m) {
  if (m.states.empty()) throw ReductionError("machine has no states");
  if (m.initial >= m.states.size()) throw ReductionError("bad initial state");
  for (const auto& t : m.transitions) {
    if (t.src >= m.states.size() || t.dst >= m.states.size())
      throw ReductionError("transition uses an undeclared state");
    if (t.counter != 1 && t.counter != 2)
      throw ReductionError("counter index must be 1 or 2");
    if (t.src == m.initial && t.op != Instr::Inc)
      throw ReductionError("all instructions from the initial state must increment");
  }
}

// Format mirrors the OCA one: states/init/accept lines, then
// `<src> <inc|dec|ifzero> <1|2> <dst>` per transition.
inline TwoCounterMachine parse_tcm(std::string_view text) {
  TwoCounterMachine m;
  std::unordered_map<std::string, size_t> index;
  auto find = [&](const std::string& s, int ln) {
    auto it = index.find(s);
    if (it == index.end()) throw ParseError(ln, "undeclared state '" + s + "'");
    return it->second;
  };
  int ln = 0;
  size_t pos = 0;
  bool have_init = false;
  std::vector<std::pair<int, std::vector<std::string>>> later;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++ln;
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    if (size_t h = line.find('#'); h != std::string_view::npos)
      line = line.substr(0, h);
    auto tok = ocmc::detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "states") {
      for (size_t i = 1; i < tok.size(); ++i) {
        if (index.count(tok[i])) throw ParseError(ln, "duplicate state");
        index.emplace(tok[i], m.states.size());
        m.states.push_back(tok[i]);
      }
    } else if (tok[0] == "init" && tok.size() == 2) {
      if (have_init) throw ParseError(ln, "duplicate initial");
      m.initial = find(tok[1], ln);
      have_init = true;
    } else if (tok[0] == "accept") {
      later.emplace_back(ln, tok);
    } else if (tok.size() == 4) {
      later.emplace_back(ln, tok);
    } else {
      throw ParseError(ln, "cannot parse machine line");
    }
  }
  if (!have_init) throw ReductionError("no initial state");
  for (auto& [l, tok] : later) {
    if (tok[0] == "accept") {
      for (size_t i = 1; i < tok.size(); ++i) m.accepting.insert(find(tok[i], l));
    } else {
      auto op = instr_from_name(tok[1]);
      if (!op) throw ParseError(l, "unknown instruction '" + tok[1] + "'");
      int c = tok[2] == "1" ? 1 : tok[2] == "2" ? 2 : 0;
      if (c == 0) throw ParseError(l, "counter index must be 1 or 2");
      m.transitions.push_back({find(tok[0], l), *op, c, find(tok[3], l)});
    }
  }
  validate_tcm(m);
  return m;
}

// Replays a sequence of transition indices on the two-counter semantics.
inline bool tcm_replay_accepts(const TwoCounterMachine& m,
                               const std::vector<size_t>& seq) {
  size_t state = m.initial;
  uint64_t c[2] = {0, 0};
  for (size_t idx : seq) {
    if (idx >= m.transitions.size()) return false;
    const auto& t = m.transitions[idx];
    if (t.src != state) return false;
    uint64_t& cc = c[t.counter - 1];
    switch (t.op) {
      case Instr::Inc: ++cc; break;
      case Instr::Dec:
        if (cc == 0) return false;
        --cc;
        break;
      case Instr::Ifzero:
        if (cc != 0) return false;
        break;
    }
    state = t.dst;
  }
  return m.accepting.count(state) > 0;
}

struct MinskyReduction {
  Oca oca;
  Ltl formula;
  std::vector<StateId> trans_state;  // gadget state of each machine transition
};

// Budget sufficient for a witness of a k-step halting run: values grow to at
// most k + 2, and one simulated step costs at most 2v + 1 positions.
inline uint64_t minsky_witness_budget(uint64_t steps) {
  return 3 + steps * (2 * (steps + 2) + 1);
}

inline MinskyReduction minsky_to_instance(const TwoCounterMachine& m) {
  validate_tcm(m);
  Oca b;
  StateId qi = b.add_state(m.states[m.initial]);
  StateId i0 = b.add_state("i0");
  std::vector<StateId> z(m.states.size());
  for (size_t s = 0; s < m.states.size(); ++s)
    z[s] = b.add_state("z_" + m.states[s]);
  b.set_initial(qi);
  for (size_t s : m.accepting) b.mark_accepting(z[s]);
  b.add_transition(qi, Instr::Inc, i0);
  b.add_transition(i0, Instr::Dec, z[m.initial]);

  std::vector<StateId> tstate(m.transitions.size());
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    const auto& t = m.transitions[i];
    std::string tag = "t" + std::to_string(i);
    StateId tq = b.add_state(tag);
    tstate[i] = tq;
    // exits are declared before self-loops so the witness search enumerates
    // small data values first
    if (t.op == Instr::Ifzero) {
      StateId climb = b.add_state(tag + "_climb");
      StateId pre = b.add_state(tag + "_pre");
      StateId down = b.add_state(tag + "_zdown");
      b.add_transition(z[t.src], Instr::Inc, pre);
      b.add_transition(z[t.src], Instr::Inc, climb);
      b.add_transition(climb, Instr::Inc, pre);
      b.add_transition(climb, Instr::Inc, climb);
      b.add_transition(pre, Instr::Inc, tq);
      b.add_transition(tq, Instr::Dec, down);
      b.add_transition(down, Instr::Ifzero, z[t.dst]);
      b.add_transition(down, Instr::Dec, down);
    } else {
      StateId last = b.add_state(tag + "_last");
      StateId nlast = b.add_state(tag + "_nlast");
      StateId down = b.add_state(tag + "_down");
      b.add_transition(z[t.src], Instr::Inc, last);
      b.add_transition(z[t.src], Instr::Inc, nlast);
      b.add_transition(nlast, Instr::Inc, last);
      b.add_transition(nlast, Instr::Inc, nlast);
      b.add_transition(last, Instr::Inc, tq);
      b.add_transition(tq, Instr::Dec, down);
      b.add_transition(down, Instr::Ifzero, z[t.dst]);
      b.add_transition(down, Instr::Dec, down);
    }
  }

  // Letter-class disjunctions per machine counter.
  auto states_or = [&](const std::vector<StateId>& ids) {
    std::vector<Ltl> atoms;
    for (StateId s : ids) atoms.push_back(ltl_state(b.state_name(s)));
    return ltl_or_all(atoms);
  };
  auto build_rules = [&](int counter) {
    std::vector<StateId> inc_t, dec_t, zero_t, inc_last, inc_nlast, dec_last,
        dec_nlast, zero_down;
    for (size_t i = 0; i < m.transitions.size(); ++i) {
      const auto& t = m.transitions[i];
      if (t.counter != counter) continue;
      std::string tag = "t" + std::to_string(i);
      if (t.op == Instr::Inc) {
        inc_t.push_back(tstate[i]);
        inc_last.push_back(*b.find_state(tag + "_last"));
        inc_nlast.push_back(*b.find_state(tag + "_nlast"));
      } else if (t.op == Instr::Dec) {
        dec_t.push_back(tstate[i]);
        dec_last.push_back(*b.find_state(tag + "_last"));
        dec_nlast.push_back(*b.find_state(tag + "_nlast"));
      } else {
        zero_t.push_back(tstate[i]);
        zero_down.push_back(*b.find_state(tag + "_zdown"));
      }
    }
    Ltl I = ltl_or(ltl_state("i0"), states_or(inc_t));
    Ltl D = ltl_or(ltl_state("i0"), states_or(dec_t));
    Ltl Il = states_or(inc_last);
    Ltl Inl = states_or(inc_nlast);
    Ltl Dl = states_or(dec_last);
    Ltl Dnl = states_or(dec_nlast);
    Ltl Z = states_or(zero_t);
    Ltl Zd = states_or(zero_down);
    auto down = [](Ltl f) { return ltl_down(1, std::move(f)); };
    auto up = [] { return ltl_up(1); };
    std::vector<Ltl> rules;
    // (i) inc values are never reused by later incs
    rules.push_back(ltl_always(ltl_imp(
        I, down(ltl_always_strict(ltl_imp(I, ltl_not(up())))))));
    // (ii) dec values are never reused by later decs
    rules.push_back(ltl_always(ltl_imp(
        D, down(ltl_always_strict(ltl_imp(D, ltl_not(up())))))));
    // (iii) a dec value is never used by a later inc
    rules.push_back(ltl_always(ltl_imp(
        D, down(ltl_always_strict(ltl_imp(I, ltl_not(up())))))));
    // (iv) a fresh inc value is one above the greatest inc value so far
    rules.push_back(ltl_and(
        ltl_always(ltl_imp(
            I, ltl_imp(down(ltl_eventually(ltl_and(Inl, up()))),
                       down(ltl_eventually(ltl_and(Il, up())))))),
        ltl_always(ltl_imp(
            ltl_or(Il, Inl),
            down(ltl_always_strict(ltl_imp(I, ltl_not(up()))))))));
    // (v) same discipline for dec values
    rules.push_back(ltl_and(
        ltl_always(ltl_imp(
            D, ltl_imp(down(ltl_eventually(ltl_and(Dnl, up()))),
                       down(ltl_eventually(ltl_and(Dl, up())))))),
        ltl_always(ltl_imp(
            ltl_or(Dl, Dnl),
            down(ltl_always_strict(ltl_imp(D, ltl_not(up()))))))));
    // (vi) dec values never exceed the greatest inc value so far
    rules.push_back(ltl_and_all(
        {ltl_always(ltl_imp(
             I, ltl_imp(down(ltl_eventually(ltl_and(Dnl, up()))),
                        down(ltl_eventually(ltl_and(Il, up())))))),
         ltl_always(ltl_imp(
             I, ltl_imp(down(ltl_eventually(ltl_and(Dl, up()))),
                        down(ltl_eventually(ltl_and(Il, up())))))),
         ltl_always(ltl_imp(
             Dnl, down(ltl_always_strict(ltl_imp(Il, ltl_not(up()))))))}));
    // (vii) zero-test peaks sit strictly above every inc value so far
    rules.push_back(ltl_always(ltl_imp(
        I, down(ltl_always(ltl_imp(Z, ltl_not(up())))))));
    // (viii) on the zero-test downslope every inc value was already decremented
    rules.push_back(ltl_and(
        ltl_not(ltl_eventually(ltl_and_all(
            {I, down(ltl_eventually(ltl_and(Zd, up()))),
             ltl_not(down(ltl_eventually(ltl_and(up(), D))))}))),
        ltl_not(ltl_eventually(
            ltl_and(Zd, down(ltl_eventually(ltl_and(D, up()))))))));
    return ltl_and_all(rules);
  };

  std::vector<Ltl> accept_atoms;
  for (size_t s : m.accepting)
    accept_atoms.push_back(ltl_state(b.state_name(z[s])));
  Ltl formula = ltl_and_all(
      {build_rules(1), build_rules(2), ltl_eventually(ltl_or_all(accept_atoms))});
  return {std::move(b), std::move(formula), std::move(tstate)};
}

// Projects a gadget witness onto the machine's transitions.
inline std::vector<size_t> minsky_project(const MinskyReduction& r,
                                          const std::vector<Config>& run) {
  std::vector<size_t> seq;
  for (const Config& c : run)
    for (size_t i = 0; i < r.trans_state.size(); ++i)
      if (r.trans_state[i] == c.state) seq.push_back(i);
  return seq;
}

// ---------------------------------------------------------------------------
// The omega-SAT reduction: a fixed two-state automaton plus the Pos-guarded
// relativization of the input formula.

struct SatReduction {
  Oca oca;
  Ltl formula;
};

inline Ltl sat_pos_marker() { return ltl_down(1, ltl_next_k(2, ltl_up(1))); }

inline SatReduction satltl_to_instance(const Ltl& f) {
  if (register_count(f) > 1)
    throw ReductionError("the omega-SAT reduction takes at most one register");
  if (!is_sentence(f)) throw ReductionError("expected a sentence");
  Oca a;
  StateId qi = a.add_state("qI");
  StateId qf = a.add_state("qf");
  a.set_initial(qi);
  a.mark_accepting(qf);
  a.add_transition(qi, Instr::Inc, qi);
  a.add_transition(qi, Instr::Inc, qf);
  a.add_transition(qf, Instr::Dec, qf);
  a.add_transition(qf, Instr::Ifzero, qi);

  Ltl pos = sat_pos_marker();
  auto rec = [&](auto&& self, const Ltl& g) -> Ltl {
    switch (g->kind) {
      case LtlKind::True:
      case LtlKind::State:
      case LtlKind::Up:
        return g;
      case LtlKind::Not:
        return ltl_not(self(self, g->a));
      case LtlKind::And:
        return ltl_and(self(self, g->a), self(self, g->b));
      case LtlKind::Next:
        return ltl_next(ltl_until(ltl_not(pos), ltl_and(pos, self(self, g->a))));
      case LtlKind::Until:
        return ltl_until(ltl_imp(pos, self(self, g->a)),
                         ltl_and(pos, self(self, g->b)));
      case LtlKind::Down:
        return ltl_down(g->reg, self(self, g->a));
    }
    throw ReductionError("bad LTL node");
  };
  return {std::move(a), rec(rec, f)};
}

}  // namespace ocmc
