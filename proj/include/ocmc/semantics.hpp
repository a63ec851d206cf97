// Reference evaluators: freeze LTL and FO over finite data words, exact FO
// evaluation over the infinite run of a deterministic automaton relativized
// to a bound, three-valued bounded LTL evaluation, and bounded witness
// search over arbitrary automata.

#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ocmc/foeval.hpp"
#include "ocmc/formula.hpp"
#include "ocmc/lasso.hpp"
#include "ocmc/oca.hpp"

namespace ocmc {

// ---------------------------------------------------------------------------
// Finite data words: letters plus an equivalence on positions given by class
// ids (i ~ j iff classes[i] == classes[j]).

struct DataWord {
  std::vector<std::string> letters;
  std::vector<uint64_t> classes;

  size_t size() const { return letters.size(); }
};

inline DataWord data_word_of_run(const Oca& a, const std::vector<Config>& run) {
  DataWord w;
  for (const Config& c : run) {
    w.letters.push_back(a.state_name(c.state));
    w.classes.push_back(c.counter);
  }
  return w;
}

struct DataWordModel {
  static constexpr bool has_sim = true;

  explicit DataWordModel(const DataWord& w) : word(&w) {
    for (const std::string& l : w.letters)
      ids.emplace(l, static_cast<int64_t>(ids.size()));
  }
  int64_t letter_id(uint64_t pos) const { return ids.at(word->letters[pos]); }
  std::optional<int64_t> resolve_letter(const std::string& name) const {
    auto it = ids.find(name);
    if (it == ids.end()) return std::nullopt;
    return it->second;
  }
  bool sim(uint64_t i, uint64_t j) const {
    return word->classes[i] == word->classes[j];
  }

  const DataWord* word;
  std::unordered_map<std::string, int64_t> ids;
};

// The infinite run of a deterministic automaton seen as a data word over the
// states, with i ~ j iff the counters at i and j agree.
struct RunWord {
  const Oca* oca;
  const LassoSummary* summary;  // must be an infinite run
};

struct RunWordModel {
  static constexpr bool has_sim = true;

  explicit RunWordModel(const RunWord& w) : run(w) {}
  int64_t letter_id(uint64_t pos) const {
    return static_cast<int64_t>(state_at(*run.summary, pos));
  }
  std::optional<int64_t> resolve_letter(const std::string& name) const {
    auto q = run.oca->find_state(name);
    if (!q) return std::nullopt;
    return static_cast<int64_t>(*q);
  }
  bool sim(uint64_t i, uint64_t j) const {
    return counter_at(*run.summary, i) == counter_at(*run.summary, j);
  }

  RunWord run;
};

// ---------------------------------------------------------------------------
// LTL over finite data words.

using RegisterValuation = std::map<int, uint64_t>;  // register -> position

inline bool eval_ltl_finite(const DataWord& w, uint64_t pos,
                            const RegisterValuation& v, const Ltl& f) {
  switch (f->kind) {
    case LtlKind::True:
      return true;
    case LtlKind::State:
      return w.letters[pos] == f->atom;
    case LtlKind::Up: {
      auto it = v.find(f->reg);
      return it != v.end() && w.classes[it->second] == w.classes[pos];
    }
    case LtlKind::Not:
      return !eval_ltl_finite(w, pos, v, f->a);
    case LtlKind::And:
      return eval_ltl_finite(w, pos, v, f->a) && eval_ltl_finite(w, pos, v, f->b);
    case LtlKind::Next:
      return pos + 1 < w.size() && eval_ltl_finite(w, pos + 1, v, f->a);
    case LtlKind::Until: {
      for (uint64_t j = pos; j < w.size(); ++j) {
        if (eval_ltl_finite(w, j, v, f->b)) return true;
        if (!eval_ltl_finite(w, j, v, f->a)) return false;
      }
      return false;
    }
    case LtlKind::Down: {
      RegisterValuation v2 = v;
      v2[f->reg] = pos;
      return eval_ltl_finite(w, pos, v2, f->a);
    }
  }
  throw FormulaError("bad LTL node");
}

// ---------------------------------------------------------------------------
// FO over finite data words and over the infinite run.

using VariableValuation = std::map<std::string, uint64_t>;

inline bool eval_fo_finite(const DataWord& w, const VariableValuation& u, const Fo& f) {
  DataWordModel m(w);
  FoEvaluator<DataWordModel> ev(f, m, w.size());
  return ev.eval(u);
}

// Exact evaluation over the real infinite run with every quantifier
// relativized to [0, bound); sim is decided through the lasso's closed form.
inline bool eval_fo_run_bounded(const RunWord& w, const Fo& f, uint64_t bound,
                                const VariableValuation& u = {}) {
  RunWordModel m(w);
  FoEvaluator<RunWordModel> ev(f, m, bound);
  return ev.eval(u);
}

// Finitary oracle, brute-force flavor: is there an accepting position
// e < bound such that the run restricted to [0, e] satisfies f? Each
// candidate prefix is materialized as a data word and evaluated on its own.
inline bool eval_fo_prefixes_bounded(const RunWord& w, const Fo& f, uint64_t bound) {
  std::vector<Config> run;
  for (uint64_t i = 0; i < bound; ++i)
    run.push_back({state_at(*w.summary, i), counter_at(*w.summary, i)});
  for (uint64_t e = 0; e < bound; ++e) {
    if (!w.oca->is_accepting(run[e].state)) continue;
    DataWord word = data_word_of_run(
        *w.oca, std::vector<Config>(run.begin(), run.begin() + e + 1));
    if (eval_fo_finite(word, {}, f)) return true;
  }
  return false;
}

// Finitary oracle, single-pass flavor: the same question evaluated over the
// infinite run in one go, existentially quantifying the accepting end
// position and relativizing every quantifier of f to it. Sim atoms are still
// decided through counter_at, independent of the translation tables.
inline bool eval_fo_run_finitary(const RunWord& w, const Fo& f, uint64_t bound) {
  std::string xe = fresh_variable(f, "x_end");
  std::vector<Fo> acc;
  for (StateId q : w.oca->accepting_states())
    acc.push_back(fo_letter(w.oca->state_name(q), xe));
  Fo closed = fo_exists(xe, fo_and(fo_or_all(acc), fo_relativize_to(f, xe)));
  return eval_fo_run_bounded(w, closed, bound);
}

// ---------------------------------------------------------------------------
// Three-valued bounded LTL over the infinite run: a strictly-as-test oracle.
// Temporal obligations are only witnessed or refuted up to the horizon.

enum class Tv : uint8_t { False, True, Unknown };

inline Tv tv_not(Tv t) {
  if (t == Tv::Unknown) return Tv::Unknown;
  return t == Tv::True ? Tv::False : Tv::True;
}
inline Tv tv_and(Tv a, Tv b) {
  if (a == Tv::False || b == Tv::False) return Tv::False;
  if (a == Tv::Unknown || b == Tv::Unknown) return Tv::Unknown;
  return Tv::True;
}
inline Tv tv_or(Tv a, Tv b) { return tv_not(tv_and(tv_not(a), tv_not(b))); }

namespace detail {

struct LtlBoundedEval {
  const RunWord& w;
  uint64_t horizon;
  // memo key: (node, position, valuation fingerprint)
  std::map<std::tuple<const LtlNode*, uint64_t, std::vector<std::pair<int, uint64_t>>>, Tv> memo;

  Tv eval(const Ltl& f, uint64_t i, const RegisterValuation& v) {
    std::vector<std::pair<int, uint64_t>> key_v(v.begin(), v.end());
    auto key = std::make_tuple(f.get(), i, key_v);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Tv r = eval_raw(f, i, v);
    memo.emplace(std::move(key), r);
    return r;
  }

  Tv eval_raw(const Ltl& f, uint64_t i, const RegisterValuation& v) {
    switch (f->kind) {
      case LtlKind::True:
        return Tv::True;
      case LtlKind::State: {
        auto q = w.oca->find_state(f->atom);
        return (q && state_at(*w.summary, i) == *q) ? Tv::True : Tv::False;
      }
      case LtlKind::Up: {
        auto it = v.find(f->reg);
        bool r = it != v.end() &&
                 counter_at(*w.summary, it->second) == counter_at(*w.summary, i);
        return r ? Tv::True : Tv::False;
      }
      case LtlKind::Not:
        return tv_not(eval(f->a, i, v));
      case LtlKind::And:
        return tv_and(eval(f->a, i, v), eval(f->b, i, v));
      case LtlKind::Next:
        return i + 1 < horizon ? eval(f->a, i + 1, v) : Tv::Unknown;
      case LtlKind::Until: {
        // U(i) = psi(i) or (phi(i) and U(i+1)), Unknown past the horizon
        Tv acc = Tv::Unknown;
        if (i >= horizon) return Tv::Unknown;
        // evaluate iteratively from the horizon back to i
        for (uint64_t j = horizon; j-- > i;) {
          Tv here = eval(f->b, j, v);
          Tv cont = tv_and(eval(f->a, j, v), acc);
          acc = tv_or(here, cont);
        }
        return acc;
      }
      case LtlKind::Down: {
        RegisterValuation v2 = v;
        v2[f->reg] = i;
        return eval(f->a, i, v2);
      }
    }
    throw FormulaError("bad LTL node");
  }
};

}  // namespace detail

inline Tv eval_ltl_run_bounded(const RunWord& w, const Ltl& f, uint64_t horizon) {
  if (horizon == 0) return Tv::Unknown;
  detail::LtlBoundedEval ev{w, horizon, {}};
  return ev.eval(f, 0, {});
}

// ---------------------------------------------------------------------------
// Bounded witness search over arbitrary (also nondeterministic) automata:
// depth-first in transition-declaration order, so the least witness in that
// order is returned. Works for the finitary problem only.

inline std::optional<std::vector<Config>> bounded_witness_search(
    const Oca& a, const Ltl& f, size_t max_len) {
  if (max_len == 0) return std::nullopt;
  std::vector<Config> path{Config{a.initial(), 0}};

  // explicit DFS stack of (depth, next successor index)
  struct Frame {
    std::vector<Config> succ;
    size_t next = 0;
  };
  std::vector<Frame> stack;

  auto accepts_here = [&]() {
    if (!a.is_accepting(path.back().state)) return false;
    DataWord w = data_word_of_run(a, path);
    return eval_ltl_finite(w, 0, {}, f);
  };

  if (accepts_here()) return path;
  stack.push_back({successors(a, path.back()), 0});
  while (!stack.empty()) {
    Frame& fr = stack.back();
    if (fr.next >= fr.succ.size() || path.size() >= max_len) {
      stack.pop_back();
      path.pop_back();
      continue;
    }
    path.push_back(fr.succ[fr.next++]);
    if (accepts_here()) return path;
    stack.push_back({successors(a, path.back()), 0});
  }
  return std::nullopt;
}

// Re-validates a claimed witness independently of the search: every step must
// be a successor, the final state accepting, and the formula must hold.
inline bool validate_witness(const Oca& a, const Ltl& f,
                             const std::vector<Config>& run) {
  if (run.empty() || !(run[0] == Config{a.initial(), 0})) return false;
  for (size_t i = 0; i + 1 < run.size(); ++i) {
    bool ok = false;
    for (const Config& c : successors(a, run[i]))
      if (c == run[i + 1]) ok = true;
    if (!ok) return false;
  }
  if (!a.is_accepting(run.back().state)) return false;
  return eval_ltl_finite(data_word_of_run(a, run), 0, {}, f);
}

}  // namespace ocmc
