// The decision procedure for deterministic automata: position-equivalence
// tables over the lasso, the ultimately periodic word s.t^omega over the
// position alphabet, the data-free translation of sim atoms, finitary
// relativization, and the bounded evaluator gluing it together.

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ocmc/foeval.hpp"
#include "ocmc/formula.hpp"
#include "ocmc/lasso.hpp"
#include "ocmc/oca.hpp"
#include "ocmc/purify.hpp"

namespace ocmc {

struct CheckError : std::runtime_error {
  explicit CheckError(const std::string& what) : std::runtime_error(what) {}
};

enum class CheckMode : uint8_t { Finitary, Infinitary };

// s . t^omega over an integer position alphabet; -1 is the pad letter.
struct UpWord {
  std::vector<int64_t> s;
  std::vector<int64_t> t;

  int64_t letter(uint64_t pos) const {
    if (pos < s.size()) return s[pos];
    return t[(pos - s.size()) % t.size()];
  }
};

inline constexpr int64_t kPadLetter = -1;
inline const char* kPadLetterName = "bot";

struct UpWordModel {
  static constexpr bool has_sim = false;

  explicit UpWordModel(const UpWord& w) : word(&w) {}
  int64_t letter_id(uint64_t pos) const { return word->letter(pos); }
  std::optional<int64_t> resolve_letter(const std::string& name) const {
    if (name == kPadLetterName) return kPadLetter;
    if (name.empty()) return std::nullopt;
    for (char c : name)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    return static_cast<int64_t>(std::stoull(name));
  }
  bool sim(uint64_t, uint64_t) const { return false; }  // never instantiated

  const UpWord* word;
};

// ---------------------------------------------------------------------------
// Position-equivalence tables.

struct SimTables {
  enum class Mode : uint8_t { Pos, Zero, Finite } mode;
  uint64_t window = 0;  // K1 + L*K2, K1 + K2, or the maximal run length
  uint64_t k1 = 0;
  uint64_t lk2 = 0;      // Pos only: L * K2
  uint64_t lkinc = 0;    // Pos only: L * K_inc
  std::vector<std::pair<uint64_t, uint64_t>> p1;  // n_i = n_j, i <= j
  std::vector<std::pair<uint64_t, uint64_t>> p2;  // n_i = n_j + L*K_inc, j < i
  std::vector<std::pair<uint64_t, uint64_t>> p3;  // Zero: all pairs n_i = n_j
  std::vector<std::pair<uint64_t, uint64_t>> p4;  // Finite: all pairs n_i = n_j
  std::vector<uint64_t> pf;                       // accepting positions
};

inline SimTables build_tables(const Oca& a, const LassoSummary& s,
                              const std::optional<DerivedConstants>& d,
                              CheckMode /*purpose*/) {
  SimTables t;
  std::vector<uint64_t> counters;
  std::vector<StateId> states;
  if (s.infinite && s.k_inc > 0) {
    if (!d || !d->l) throw CheckError("K_inc > 0 needs the derived constants");
    t.mode = SimTables::Mode::Pos;
    t.k1 = s.k1;
    t.lk2 = *d->l * s.k2;
    t.lkinc = *d->l * s.k_inc;
    t.window = s.k1 + t.lk2;
  } else if (s.infinite) {
    t.mode = SimTables::Mode::Zero;
    t.k1 = s.k1;
    t.window = s.k1 + s.k2;
  } else {
    t.mode = SimTables::Mode::Finite;
    t.window = s.max_run.size();
  }
  counters.reserve(t.window);
  for (uint64_t i = 0; i < t.window; ++i) {
    if (s.infinite) {
      counters.push_back(counter_at(s, i));
      states.push_back(state_at(s, i));
    } else {
      counters.push_back(s.max_run[i].counter);
      states.push_back(s.max_run[i].state);
    }
  }

  std::unordered_map<uint64_t, std::vector<uint64_t>> by_counter;
  for (uint64_t i = 0; i < t.window; ++i) by_counter[counters[i]].push_back(i);

  if (t.mode == SimTables::Mode::Pos) {
    for (uint64_t j = 0; j < t.window; ++j) {
      auto it = by_counter.find(counters[j]);
      for (uint64_t i : it->second)
        if (i <= j) t.p1.push_back({i, j});
      if (counters[j] >= t.lkinc) {
        auto lo = by_counter.find(counters[j] - t.lkinc);
        if (lo != by_counter.end() && t.lkinc > 0)
          for (uint64_t jj : lo->second)
            if (jj < j) t.p2.push_back({j, jj});
      }
    }
  } else {
    auto& dst = t.mode == SimTables::Mode::Zero ? t.p3 : t.p4;
    for (auto& [c, ps] : by_counter)
      for (uint64_t i : ps)
        for (uint64_t j : ps) dst.push_back({i, j});
    std::sort(dst.begin(), dst.end());
  }
  std::sort(t.p1.begin(), t.p1.end());
  std::sort(t.p2.begin(), t.p2.end());

  for (uint64_t i = 0; i < t.window; ++i)
    if (a.is_accepting(states[i])) t.pf.push_back(i);
  return t;
}

// Word over the position alphabet: each window position is its own letter.
// With no infinite run the tail is the pad letter.
inline UpWord build_word(const LassoSummary& s,
                         const std::optional<DerivedConstants>& d,
                         CheckMode /*purpose*/) {
  UpWord w;
  if (s.infinite) {
    uint64_t tlen = s.k2;
    if (s.k_inc > 0) {
      if (!d || !d->l) throw CheckError("K_inc > 0 needs the derived constants");
      tlen = *d->l * s.k2;
    }
    for (uint64_t i = 0; i < s.k1; ++i) w.s.push_back(static_cast<int64_t>(i));
    for (uint64_t i = 0; i < tlen; ++i)
      w.t.push_back(static_cast<int64_t>(s.k1 + i));
  } else {
    for (uint64_t i = 0; i < s.max_run.size(); ++i)
      w.s.push_back(static_cast<int64_t>(i));
    w.t.push_back(kPadLetter);
  }
  return w;
}

namespace detail {

inline Fo letter_pair_disjunction(
    const std::vector<std::pair<uint64_t, uint64_t>>& pairs,
    const std::string& x, const std::string& y) {
  std::vector<Fo> items;
  items.reserve(pairs.size());
  for (auto& [i, j] : pairs)
    items.push_back(fo_and(fo_letter(std::to_string(i), x),
                           fo_letter(std::to_string(j), y)));
  return fo_or_all(items);
}

inline Fo sim_translation(const SimTables& t, const std::string& x,
                          const std::string& y) {
  if (t.mode != SimTables::Mode::Pos) {
    const auto& pairs = t.mode == SimTables::Mode::Zero ? t.p3 : t.p4;
    return letter_pair_disjunction(pairs, x, y);
  }
  auto t1 = [&](const std::string& u, const std::string& v) {
    std::vector<std::pair<uint64_t, uint64_t>> both = t.p1;
    both.insert(both.end(), t.p2.begin(), t.p2.end());
    Fo in_window = fo_distlt(u, v, t.lk2);  // (v - u) < L*K2
    Fo prefix_case =
        fo_imp(fo_poslt(u, t.k1), letter_pair_disjunction(t.p1, u, v));
    Fo loop_case = fo_imp(fo_not(fo_poslt(u, t.k1)),
                          letter_pair_disjunction(both, u, v));
    return fo_and(in_window, fo_and(prefix_case, loop_case));
  };
  return fo_or(fo_and(fo_le(x, y), t1(x, y)), fo_and(fo_le(y, x), t1(y, x)));
}

}  // namespace detail

// Replaces every sim atom by its table translation; homomorphic elsewhere.
inline Fo translate_sim(const Fo& f, const SimTables& t) {
  if (!is_pure(f)) throw CheckError("translate_sim expects a pure formula");
  auto rec = [&](auto&& self, const Fo& g) -> Fo {
    if (!g) return g;
    switch (g->kind) {
      case FoKind::Sim:
        return detail::sim_translation(t, g->x, g->y);
      case FoKind::Not:
        return fo_not(self(self, g->a));
      case FoKind::And:
        return fo_and(self(self, g->a), self(self, g->b));
      case FoKind::Exists:
        return fo_exists(g->x, self(self, g->a));
      default:
        return g;
    }
  };
  return fo_simplify(rec(rec, f));
}

// Finitary wrapper: an accepting end position is chosen and every quantifier
// of the translated formula is relativized to it. With no infinite run the
// end position must also avoid the pad letter.
inline Fo relativize_finitary(const Fo& f, const SimTables& t) {
  std::string xe = fresh_variable(f, "x_end");
  std::vector<Fo> acc;
  acc.reserve(t.pf.size());
  for (uint64_t i : t.pf) acc.push_back(fo_letter(std::to_string(i), xe));
  Fo guard = fo_or_all(acc);
  if (t.mode == SimTables::Mode::Finite)
    guard = fo_and(fo_not(fo_letter(kPadLetterName, xe)), guard);
  return fo_simplify(fo_exists(xe, fo_and(guard, fo_relativize_to(f, xe))));
}

// Default quantifier-relativization bound: positions beyond it are
// indistinguishable from earlier ones for the formula at hand (an
// Ehrenfeucht-Fraisse argument over the ultimately periodic word).
inline uint64_t default_bound(const UpWord& w, const Fo& f) {
  uint64_t c = max_constant(f) + 2;
  uint64_t d = quantifier_depth(f) + 1;
  unsigned __int128 b = w.t.size();
  b *= c;
  for (uint64_t i = 0; i < d; ++i) {
    b *= 2;
    if (b > (unsigned __int128)1 << 62) return uint64_t(1) << 62;
  }
  b += w.s.size();
  if (b > (unsigned __int128)1 << 62) return uint64_t(1) << 62;
  return static_cast<uint64_t>(b);
}

inline bool eval_up_word(const UpWord& w, const Fo& f,
                         std::optional<uint64_t> bound = std::nullopt) {
  UpWordModel m(w);
  uint64_t b = bound ? *bound : default_bound(w, f);
  FoEvaluator<UpWordModel> ev(f, m, b);
  return ev.eval();
}

// ---------------------------------------------------------------------------
// Top-level decision.

enum class Branch : uint8_t {
  InfKincPos,
  InfKincZero,
  NoAcceptingInfRun,
  FinWithInfRun,
  FinNoInfRun
};

inline const char* branch_name(Branch b) {
  switch (b) {
    case Branch::InfKincPos: return "inf-kinc-pos";
    case Branch::InfKincZero: return "inf-kinc-zero";
    case Branch::NoAcceptingInfRun: return "no-accepting-infinite-run";
    case Branch::FinWithInfRun: return "fin-with-infinite-run";
    case Branch::FinNoInfRun: return "fin-no-infinite-run";
  }
  return "?";
}

struct Verdict {
  bool answer = false;
  CheckMode mode = CheckMode::Infinitary;
  Branch branch = Branch::NoAcceptingInfRun;
  bool purified = false;
  uint64_t k1 = 0, k2 = 0, k_inc = 0;
  std::optional<DerivedConstants> consts;
  uint64_t s_len = 0, t_len = 0;
  uint64_t bound_used = 0;
  double millis = 0.0;
};

// Decides existential model checking of a pure FO sentence over the unique
// run of a deterministic automaton.
inline Verdict check_pure_fo(const Oca& a, const Fo& f, CheckMode mode,
                             std::optional<uint64_t> bound = std::nullopt) {
  auto t0 = std::chrono::steady_clock::now();
  if (!is_deterministic(a))
    throw CheckError("automaton is not deterministic");
  if (!is_fo_sentence(f)) throw CheckError("formula is not a sentence");
  if (!is_pure(f)) throw CheckError("internal: expected a pure formula");

  Verdict v;
  v.mode = mode;
  LassoSummary ls = analyze(a);
  AcceptingStatus acc = accepting_status(a, ls);
  if (ls.infinite) {
    v.k1 = ls.k1;
    v.k2 = ls.k2;
    v.k_inc = ls.k_inc;
    v.consts = constants(ls);
  } else {
    v.k1 = ls.max_run.size();
  }

  auto finish = [&](bool answer) {
    v.answer = answer;
    v.millis = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
    return v;
  };

  if (mode == CheckMode::Infinitary) {
    if (!ls.infinite || !acc.has_accepting_infinite) {
      v.branch = Branch::NoAcceptingInfRun;
      return finish(false);
    }
    v.branch = ls.k_inc > 0 ? Branch::InfKincPos : Branch::InfKincZero;
  } else {
    v.branch = ls.infinite ? Branch::FinWithInfRun : Branch::FinNoInfRun;
  }

  SimTables tables = build_tables(a, ls, v.consts, mode);
  UpWord word = build_word(ls, v.consts, mode);
  v.s_len = word.s.size();
  v.t_len = word.t.size();

  Fo translated = translate_sim(f, tables);
  if (mode == CheckMode::Finitary)
    translated = relativize_finitary(translated, tables);
  v.bound_used = bound ? *bound : default_bound(word, translated);
  return finish(eval_up_word(word, translated, v.bound_used));
}

inline Verdict check(const Oca& a, const Fo& f, CheckMode mode,
                     std::optional<uint64_t> bound = std::nullopt) {
  if (!is_deterministic(a))
    throw CheckError("automaton is not deterministic");
  if (!is_fo_sentence(f)) throw CheckError("formula is not a sentence");
  if (is_pure(f)) return check_pure_fo(a, f, mode, bound);
  PurifiedFo p = purify_fo(a, f);
  Verdict v = check_pure_fo(p.automaton, p.formula, mode, bound);
  v.purified = true;
  return v;
}

inline Verdict check(const Oca& a, const Ltl& f, CheckMode mode,
                     std::optional<uint64_t> bound = std::nullopt) {
  if (!is_deterministic(a))
    throw CheckError("automaton is not deterministic");
  if (!is_sentence(f)) throw CheckError("formula is not a sentence");
  const Oca* machine = &a;
  Ltl pure = f;
  std::optional<PurifiedLtl> p;
  if (!is_pure(f)) {
    p = purify_ltl(a, f);
    machine = &p->automaton;
    pure = p->formula;
  }
  Fo fo = close_at_first_position(ltl_to_fo(pure));
  Verdict v = check_pure_fo(*machine, fo, mode, bound);
  v.purified = p.has_value();
  return v;
}

}  // namespace ocmc
