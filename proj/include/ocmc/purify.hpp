// Purification for freeze LTL and for the FO dialect (state atoms replaced
// by counter-shape patterns), and weak determinization of one-counter
// automata. Fresh states use the reserved "__g" infix, which is rejected in
// inputs so the constructions cannot collide with user names.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocmc/formula.hpp"
#include "ocmc/oca.hpp"

namespace ocmc {

struct PurifyError : std::runtime_error {
  explicit PurifyError(const std::string& what) : std::runtime_error(what) {}
};

inline uint64_t pattern_length(size_t m) { return 9 + 2 * (m + 1); }

// phi_i = X^{6+2(i-1)} down_1 X^2 not up_1 (i is 1-based).
inline Ltl phi_state(size_t i) {
  return ltl_next_k(6 + 2 * (i - 1),
                    ltl_down(1, ltl_next_k(2, ltl_not(ltl_up(1)))));
}

// STA = phi_{not 3/7} and phi_{0~6}: the current position carries the same
// counter value as the 6th next one, and among the 7 next counter values
// no value occurs three times. On purified runs this characterizes the
// original-state positions (given at least 6 positions of lookahead).
inline Ltl sta_formula() {
  std::vector<Ltl> cases;
  for (int d = 0; d <= 4; ++d) {
    std::vector<Ltl> pairs;
    int span = 6 - d;
    for (int i = 1; i <= span; ++i)
      for (int j = i + 1; j <= span; ++j)
        pairs.push_back(ltl_and(ltl_next_k(i, ltl_up(1)), ltl_next_k(j, ltl_up(1))));
    cases.push_back(ltl_next_k(d, ltl_down(1, ltl_or_all(pairs))));
  }
  Ltl no_three_of_seven = ltl_not(ltl_or_all(cases));
  Ltl zero_sim_six = ltl_down(1, ltl_next_k(6, ltl_up(1)));
  return ltl_and(no_three_of_seven, zero_sim_six);
}

namespace detail {

inline void reject_reserved_names(const Oca& a) {
  for (StateId q = 0; q < a.state_count(); ++q)
    if (a.state_name(q).find("__g") != std::string::npos)
      throw PurifyError("state name '" + a.state_name(q) +
                        "' uses the reserved '__g' infix");
}

// The pattern replacing state q_i: one pick of height 3, then m+1 unit picks
// of which the i-th has height 2, ending in q_i,F which inherits the original
// transitions. Internal dec states get an ifzero self-loop partner so the
// deterministic transition shape is preserved.
inline Oca purified_automaton(const Oca& a) {
  reject_reserved_names(a);
  const size_t m = a.state_count();
  Oca p;
  for (StateId q = 0; q < m; ++q) p.add_state(a.state_name(q));
  p.set_initial(a.initial());

  std::vector<StateId> final_state(m);
  for (StateId q = 0; q < m; ++q) {
    const std::string base = a.state_name(q);
    const size_t ord = q + 1;  // 1-based pick index of the double pick

    auto dec_with_guard = [&p](StateId from, StateId to) {
      p.add_transition(from, Instr::Dec, to);
      p.add_transition(from, Instr::Ifzero, from);
    };

    StateId g1 = p.add_state(base + "__gp1");
    StateId g2 = p.add_state(base + "__gp2");
    StateId g3 = p.add_state(base + "__gp3");
    StateId g4 = p.add_state(base + "__gp4");
    StateId g5 = p.add_state(base + "__gp5");
    p.add_transition(q, Instr::Inc, g1);
    p.add_transition(g1, Instr::Inc, g2);
    p.add_transition(g2, Instr::Inc, g3);
    dec_with_guard(g3, g4);
    dec_with_guard(g4, g5);

    StateId prev = g5;  // exits with a dec into each pick entry
    for (size_t j = 1; j <= m + 1; ++j) {
      if (j == ord) {
        StateId d0 = p.add_state(base + "__gpd0");
        StateId d1 = p.add_state(base + "__gpd1");
        StateId d2 = p.add_state(base + "__gpd2");
        StateId d3 = p.add_state(base + "__gpd3");
        dec_with_guard(prev, d0);
        p.add_transition(d0, Instr::Inc, d1);
        p.add_transition(d1, Instr::Inc, d2);
        dec_with_guard(d2, d3);
        prev = d3;
      } else {
        StateId entry = p.add_state(base + "__gpe" + std::to_string(j));
        StateId peak = p.add_state(base + "__gpp" + std::to_string(j));
        dec_with_guard(prev, entry);
        p.add_transition(entry, Instr::Inc, peak);
        prev = peak;
      }
    }
    StateId fin = p.add_state(base + "__gpF");
    dec_with_guard(prev, fin);
    final_state[q] = fin;
    if (a.is_accepting(q)) p.mark_accepting(fin);
  }
  for (const Transition& t : a.transitions())
    p.add_transition(final_state[t.src], t.instr, t.dst);
  return p;
}

}  // namespace detail

struct PurifiedLtl {
  Oca automaton;
  Ltl formula;
  uint64_t gadget_len;
};

struct PurifiedFo {
  Oca automaton;
  Fo formula;
  uint64_t gadget_len;
};

// The pattern makes phi_i hold at the positions of states q_i and q_{i+1}
// (the double pick of pattern i+1 sits exactly under phi_i's probe), so the
// state atom q_i maps to phi_i and, for i >= 2, the conjunct not phi_{i-1}
// cancels the overlap.
inline Ltl purified_state_atom(size_t ord) {
  Ltl f = phi_state(ord);
  if (ord >= 2) f = ltl_and(f, ltl_not(phi_state(ord - 1)));
  return f;
}

inline Ltl purify_ltl_formula(const Oca& a, const Ltl& f) {
  const uint64_t period = pattern_length(a.state_count());
  const Ltl sta = sta_formula();
  auto rec = [&](auto&& self, const Ltl& g) -> Ltl {
    switch (g->kind) {
      case LtlKind::True:
        return g;
      case LtlKind::State: {
        auto q = a.find_state(g->atom);
        if (!q) throw PurifyError("unknown state atom '" + g->atom + "'");
        return purified_state_atom(*q + 1);
      }
      case LtlKind::Up:
        return g;
      case LtlKind::Not:
        return ltl_not(self(self, g->a));
      case LtlKind::And:
        return ltl_and(self(self, g->a), self(self, g->b));
      case LtlKind::Next:
        return ltl_next_k(period, self(self, g->a));
      case LtlKind::Until:
        return ltl_until(ltl_imp(sta, self(self, g->a)),
                         ltl_and(sta, self(self, g->b)));
      case LtlKind::Down:
        return ltl_down(g->reg, self(self, g->a));
    }
    throw PurifyError("bad LTL node");
  };
  return rec(rec, f);
}

inline PurifiedLtl purify_ltl(const Oca& a, const Ltl& f) {
  if (!is_sentence(f)) throw PurifyError("purify_ltl expects a sentence");
  PurifiedLtl out{detail::purified_automaton(a), purify_ltl_formula(a, f),
                  pattern_length(a.state_count())};
  return out;
}

// ---------------------------------------------------------------------------
// FO purification: the first-order renderings of STA and phi_i, anchored at a
// position variable, use two shared helper variables, so the output needs at
// most two variables more than the input.

namespace detail {

inline Fo phi_state_fo(size_t ord, const std::string& x, const std::string& h1,
                       const std::string& h2) {
  uint64_t off = 6 + 2 * (ord - 1);
  return fo_exists(
      h1, fo_and(fo_succ(h1, x, off),
                 fo_exists(h2, fo_and(fo_succ(h2, h1, 2),
                                      fo_not(fo_sim(h2, h1))))));
}

inline Fo sta_fo(const std::string& x, const std::string& h1, const std::string& h2) {
  // one disjunct per (shift d, pair i<j): three equal counter values
  auto pair_at = [&](const std::string& anchor, int i, int j) {
    Fo a = fo_exists(h2, fo_and(fo_succ(h2, anchor, static_cast<uint64_t>(i)),
                                fo_sim(h2, anchor)));
    Fo b = fo_exists(h2, fo_and(fo_succ(h2, anchor, static_cast<uint64_t>(j)),
                                fo_sim(h2, anchor)));
    return fo_and(a, b);
  };
  std::vector<Fo> cases;
  for (int d = 0; d <= 4; ++d) {
    std::vector<Fo> pairs;
    int span = 6 - d;
    for (int i = 1; i <= span; ++i)
      for (int j = i + 1; j <= span; ++j) pairs.push_back(pair_at(h1, i, j));
    Fo body = fo_or_all(pairs);
    if (d == 0) {
      std::vector<Fo> pairs0;
      for (int i = 1; i <= 6; ++i)
        for (int j = i + 1; j <= 6; ++j) pairs0.push_back(pair_at(x, i, j));
      cases.push_back(fo_or_all(pairs0));
    } else {
      cases.push_back(fo_exists(
          h1, fo_and(fo_succ(h1, x, static_cast<uint64_t>(d)), body)));
    }
  }
  Fo no_three = fo_not(fo_or_all(cases));
  Fo zero_sim_six =
      fo_exists(h1, fo_and(fo_succ(h1, x, 6), fo_sim(h1, x)));
  return fo_and(no_three, zero_sim_six);
}

inline Fo purified_letter_atom_fo(size_t ord, const std::string& x,
                                  const std::string& h1, const std::string& h2) {
  Fo f = phi_state_fo(ord, x, h1, h2);
  if (ord >= 2) f = fo_and(f, fo_not(phi_state_fo(ord - 1, x, h1, h2)));
  return f;
}

}  // namespace detail

inline Fo purify_fo_formula(const Oca& a, const Fo& f) {
  const uint64_t period = pattern_length(a.state_count());
  const std::string h1 = fresh_variable(f, "y1");
  const std::string h2 = fresh_variable(f, "y2");
  auto rec = [&](auto&& self, const Fo& g) -> Fo {
    switch (g->kind) {
      case FoKind::True:
        return g;
      case FoKind::Letter: {
        auto q = a.find_state(g->atom);
        if (!q) throw PurifyError("unknown letter atom '" + g->atom + "'");
        return detail::purified_letter_atom_fo(*q + 1, g->x, h1, h2);
      }
      case FoKind::Sim:
      case FoKind::Lt:
        return g;
      case FoKind::Succ:
        return fo_succ(g->x, g->y, g->c * period);
      case FoKind::DistLt:
        return fo_distlt(g->x, g->y, (g->c == 0) ? 0 : (g->c - 1) * period + 1);
      case FoKind::PosLt:
        return fo_poslt(g->x, (g->c == 0) ? 0 : (g->c - 1) * period + 1);
      case FoKind::Not:
        return fo_not(self(self, g->a));
      case FoKind::And:
        return fo_and(self(self, g->a), self(self, g->b));
      case FoKind::Exists:
        return fo_exists(g->x, fo_and(detail::sta_fo(g->x, h1, h2),
                                      self(self, g->a)));
    }
    throw PurifyError("bad FO node");
  };
  return rec(rec, f);
}

inline PurifiedFo purify_fo(const Oca& a, const Fo& f) {
  if (!is_fo_sentence(f)) throw PurifyError("purify_fo expects a sentence");
  PurifiedFo out{detail::purified_automaton(a), purify_fo_formula(a, f),
                 pattern_length(a.state_count())};
  return out;
}

// ---------------------------------------------------------------------------
// Weak determinization: same-instruction fans become inc/dec ladders with one
// branch peeling off per rung; the original states survive unchanged and the
// formula is relativized to them.

inline std::pair<Oca, Ltl> weak_determinize(const Oca& a, const Ltl& f) {
  detail::reject_reserved_names(a);
  Oca w;
  for (StateId q = 0; q < a.state_count(); ++q) {
    w.add_state(a.state_name(q));
    if (a.is_accepting(q)) w.mark_accepting(q);
  }
  w.set_initial(a.initial());

  for (StateId q = 0; q < a.state_count(); ++q) {
    const std::string base = a.state_name(q);
    for (Instr instr : {Instr::Inc, Instr::Dec, Instr::Ifzero}) {
      std::vector<StateId> targets;
      for (const Transition& t : a.transitions())
        if (t.src == q && t.instr == instr) targets.push_back(t.dst);
      if (targets.empty()) continue;
      if (targets.size() == 1) {
        w.add_transition(q, instr, targets[0]);
        continue;
      }
      const size_t k = targets.size();
      const std::string tag = base + "__gw" + instr_name(instr);
      auto fresh = [&](const std::string& suffix) {
        return w.add_state(tag + suffix);
      };
      if (instr == Instr::Inc) {
        StateId b = fresh("b1");
        w.add_transition(q, Instr::Inc, b);
        StateId e1 = fresh("e1");
        w.add_transition(b, Instr::Dec, e1);
        w.add_transition(e1, Instr::Inc, targets[0]);
        for (size_t j = 2; j <= k; ++j) {
          StateId bj = fresh("b" + std::to_string(j));
          w.add_transition(b, Instr::Inc, bj);
          StateId cur = bj;
          for (size_t s = 1; s + 1 <= j - 1; ++s) {
            StateId e = fresh("e" + std::to_string(j) + "_" + std::to_string(s));
            w.add_transition(cur, Instr::Dec, e);
            cur = e;
          }
          w.add_transition(cur, Instr::Dec, targets[j - 1]);
          b = bj;
        }
      } else if (instr == Instr::Dec) {
        StateId c = fresh("c");
        w.add_transition(q, Instr::Dec, c);
        StateId b = fresh("b1");
        w.add_transition(c, Instr::Inc, b);
        w.add_transition(b, Instr::Dec, targets[0]);
        for (size_t j = 2; j <= k; ++j) {
          StateId bj = fresh("b" + std::to_string(j));
          w.add_transition(b, Instr::Inc, bj);
          StateId cur = bj;
          for (size_t s = 1; s + 1 <= j; ++s) {
            StateId e = fresh("e" + std::to_string(j) + "_" + std::to_string(s));
            w.add_transition(cur, Instr::Dec, e);
            cur = e;
          }
          w.add_transition(cur, Instr::Dec, targets[j - 1]);
          b = bj;
        }
      } else {
        StateId entry = fresh("a");
        w.add_transition(q, Instr::Ifzero, entry);
        w.add_transition(entry, Instr::Ifzero, targets[0]);
        StateId b = entry;
        for (size_t j = 2; j <= k; ++j) {
          StateId bj = fresh("b" + std::to_string(j));
          w.add_transition(b, Instr::Inc, bj);
          StateId cur = bj;
          for (size_t s = 1; s <= j - 1; ++s) {
            StateId e = fresh("e" + std::to_string(j) + "_" + std::to_string(s));
            w.add_transition(cur, Instr::Dec, e);
            cur = e;
          }
          w.add_transition(cur, Instr::Ifzero, targets[j - 1]);
          b = bj;
        }
      }
    }
  }

  std::vector<Ltl> qs;
  for (StateId q = 0; q < a.state_count(); ++q)
    qs.push_back(ltl_state(a.state_name(q)));
  Ltl at_original = ltl_or_all(qs);
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
        return ltl_next(
            ltl_until(ltl_not(at_original),
                      ltl_and(at_original, self(self, g->a))));
      case LtlKind::Until:
        return ltl_until(ltl_imp(at_original, self(self, g->a)),
                         ltl_and(at_original, self(self, g->b)));
      case LtlKind::Down:
        return ltl_down(g->reg, self(self, g->a));
    }
    throw PurifyError("bad LTL node");
  };
  return {std::move(w), rec(rec, f)};
}

// Largest number of configurations one original step can expand into after
// weak determinization; used to match witness-search budgets.
inline size_t weakdet_max_excursion(const Oca& a) {
  size_t worst = 1;
  for (StateId q = 0; q < a.state_count(); ++q) {
    for (Instr instr : {Instr::Inc, Instr::Dec, Instr::Ifzero}) {
      size_t k = 0;
      for (const Transition& t : a.transitions())
        if (t.src == q && t.instr == instr) ++k;
      if (k >= 2) worst = std::max(worst, 2 * k + 1);
    }
  }
  return worst;
}

}  // namespace ocmc
