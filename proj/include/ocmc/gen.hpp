// Seeded random generators for automata, formulas and data words. Used by
// the randomized oracle suites and by the CLI; everything is driven by an
// explicit engine so suite failures reproduce from the printed seed.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "ocmc/formula.hpp"
#include "ocmc/oca.hpp"
#include "ocmc/semantics.hpp"

namespace ocmc {

inline DataWord random_data_word(std::mt19937_64& rng, size_t max_len,
                                 size_t num_letters, size_t num_classes) {
  std::uniform_int_distribution<size_t> ld(1, max_len);
  size_t n = ld(rng);
  std::uniform_int_distribution<size_t> letter(0, num_letters - 1);
  std::uniform_int_distribution<uint64_t> cls(0, num_classes - 1);
  DataWord w;
  for (size_t i = 0; i < n; ++i) {
    w.letters.push_back(std::string(1, static_cast<char>('a' + letter(rng))));
    w.classes.push_back(cls(rng));
  }
  return w;
}

inline Oca random_deterministic_oca(std::mt19937_64& rng, size_t max_states,
                                    double accept_prob = 0.4,
                                    double stuck_prob = 0.05) {
  std::uniform_int_distribution<size_t> nd(1, max_states);
  size_t n = nd(rng);
  Oca a;
  for (size_t i = 0; i < n; ++i) a.add_state("q" + std::to_string(i));
  a.set_initial(0);
  std::uniform_int_distribution<StateId> td(0, static_cast<StateId>(n - 1));
  std::uniform_real_distribution<double> pd(0.0, 1.0);
  for (StateId q = 0; q < n; ++q) {
    double p = pd(rng);
    if (p < stuck_prob) continue;
    if (p < stuck_prob + 0.55) {
      a.add_transition(q, Instr::Inc, td(rng));
    } else {
      a.add_transition(q, Instr::Ifzero, td(rng));
      a.add_transition(q, Instr::Dec, td(rng));
    }
  }
  for (StateId q = 0; q < n; ++q)
    if (pd(rng) < accept_prob) a.mark_accepting(q);
  return a;
}

inline Oca random_oca(std::mt19937_64& rng, size_t max_states,
                      double accept_prob = 0.4) {
  std::uniform_int_distribution<size_t> nd(1, max_states);
  size_t n = nd(rng);
  Oca a;
  for (size_t i = 0; i < n; ++i) a.add_state("q" + std::to_string(i));
  a.set_initial(0);
  std::uniform_int_distribution<StateId> td(0, static_cast<StateId>(n - 1));
  std::uniform_int_distribution<int> id(0, 2);
  std::uniform_int_distribution<size_t> md(0, 2 * n);
  std::uniform_real_distribution<double> pd(0.0, 1.0);
  size_t m = md(rng);
  for (size_t i = 0; i < m; ++i) {
    Instr in = static_cast<Instr>(id(rng));
    StateId src = td(rng), dst = td(rng);
    bool dup = false;
    for (const Transition& t : a.transitions())
      if (t == Transition{src, in, dst}) dup = true;
    if (!dup) a.add_transition(src, in, dst);
  }
  for (StateId q = 0; q < n; ++q)
    if (pd(rng) < accept_prob) a.mark_accepting(q);
  return a;
}

// Random pure FO sentence: quantifier depth <= max_depth, at most max_vars
// variables, constants <= max_const.
inline Fo random_pure_fo_sentence(std::mt19937_64& rng, int max_depth,
                                  int max_vars, uint64_t max_const) {
  std::uniform_real_distribution<double> pd(0.0, 1.0);
  std::uniform_int_distribution<uint64_t> cd(1, max_const);
  auto var_name = [](int i) { return std::string("v") + std::to_string(i); };

  auto gen = [&](auto&& self, int qbudget, int scope) -> Fo {
    auto atom = [&]() -> Fo {
      if (scope == 0) return pd(rng) < 0.5 ? fo_true() : fo_false();
      std::uniform_int_distribution<int> vd(0, scope - 1);
      std::string x = var_name(vd(rng));
      std::string y = var_name(vd(rng));
      switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0: return fo_sim(x, y);
        case 1: return fo_lt(x, y);
        case 2: return fo_succ(x, y, cd(rng));
        case 3: return fo_distlt(x, y, cd(rng));
        case 4: return fo_poslt(x, cd(rng));
        default: return fo_true();
      }
    };
    double p = pd(rng);
    bool can_quantify = qbudget > 0 && scope < max_vars;
    if (scope == 0 && can_quantify && p < 0.9) {
      Fo body = self(self, qbudget - 1, scope + 1);
      return fo_exists(var_name(scope), body);
    }
    if (can_quantify && p < 0.35) {
      Fo body = self(self, qbudget - 1, scope + 1);
      Fo q = fo_exists(var_name(scope), body);
      return pd(rng) < 0.4 ? fo_not(q) : q;  // mix in universal flavor
    }
    if (p < 0.55 && qbudget > 0) {
      Fo l = self(self, qbudget, scope);
      Fo r = self(self, qbudget, scope);
      switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: return fo_and(l, r);
        case 1: return fo_or(l, r);
        default: return fo_imp(l, r);
      }
    }
    if (p < 0.65) return fo_not(atom());
    return atom();
  };
  return gen(gen, max_depth, 0);
}

// Random freeze LTL sentence; atoms draw from `alphabet` when non-empty
// (pure formulas otherwise). Registers are used only under their binder.
inline Ltl random_ltl_sentence(std::mt19937_64& rng, int depth, int max_regs,
                               const std::vector<std::string>& alphabet) {
  std::uniform_real_distribution<double> pd(0.0, 1.0);
  auto gen = [&](auto&& self, int budget, std::vector<int> bound) -> Ltl {
    auto atom = [&]() -> Ltl {
      double p = pd(rng);
      if (!bound.empty() && p < 0.5) {
        std::uniform_int_distribution<size_t> bd(0, bound.size() - 1);
        return ltl_up(bound[bd(rng)]);
      }
      if (!alphabet.empty() && p < 0.85) {
        std::uniform_int_distribution<size_t> ad(0, alphabet.size() - 1);
        return ltl_state(alphabet[ad(rng)]);
      }
      return ltl_true();
    };
    if (budget == 0) return atom();
    double p = pd(rng);
    if (p < 0.18 && static_cast<int>(bound.size()) < max_regs) {
      int r = 1 + static_cast<int>(bound.size());
      std::vector<int> b2 = bound;
      b2.push_back(r);
      return ltl_down(r, self(self, budget - 1, b2));
    }
    if (p < 0.33) return ltl_next(self(self, budget - 1, bound));
    if (p < 0.45) return ltl_eventually(self(self, budget - 1, bound));
    if (p < 0.57) return ltl_always(self(self, budget - 1, bound));
    if (p < 0.70)
      return ltl_until(self(self, budget - 1, bound), self(self, budget - 1, bound));
    if (p < 0.80) return ltl_not(self(self, budget - 1, bound));
    if (p < 0.90)
      return ltl_and(self(self, budget - 1, bound), self(self, budget - 1, bound));
    return ltl_or(self(self, budget - 1, bound), self(self, budget - 1, bound));
  };
  return gen(gen, depth, {});
}

}  // namespace ocmc
