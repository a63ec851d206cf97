#include <catch2/catch_amalgamated.hpp>

#include "ocmc/gen.hpp"
#include "ocmc/semantics.hpp"

using namespace ocmc;

namespace {
DataWord aba() { return DataWord{{"a", "b", "a"}, {0, 1, 0}}; }
}  // namespace

TEST_CASE("eval_ltl_finite basics") {
  DataWord w{{"a"}, {0}};
  CHECK(eval_ltl_finite(w, 0, {}, ltl_state("a")));
  // X fails at the last position
  CHECK_FALSE(eval_ltl_finite(w, 0, {}, ltl_next(ltl_true())));
  // freeze and test two steps later
  CHECK(eval_ltl_finite(aba(), 0, {},
                        ltl_down(1, ltl_next_k(2, ltl_up(1)))));
  // undefined register makes up_r false
  CHECK_FALSE(eval_ltl_finite(aba(), 0, {}, ltl_up(1)));
}

TEST_CASE("eval_fo_finite basics") {
  DataWord w3{{"a", "b", "c"}, {0, 1, 2}};
  CHECK(eval_fo_finite(w3, {}, parse_fo("(exists x (exists y (succ+1 x y)))")));
  // undefined variable makes atoms false
  CHECK_FALSE(eval_fo_finite(w3, {}, parse_fo("(sim x y)")));
  CHECK(eval_fo_finite(aba(), {},
                       parse_fo("(exists x (exists y (and (lt x y) (sim x y))))")));
  DataWord all_diff{{"a", "b", "a"}, {0, 1, 2}};
  CHECK_FALSE(eval_fo_finite(
      all_diff, {}, parse_fo("(exists x (exists y (and (lt x y) (sim x y))))")));
}

TEST_CASE("eval_fo_finite matches a naive enumeration on pair formulas") {
  std::mt19937_64 rng(313);
  for (int i = 0; i < 200; ++i) {
    DataWord w = random_data_word(rng, 8, 3, 4);
    // exists x exists y (x < y and x ~ y)
    bool naive = false;
    for (size_t p = 0; p < w.size(); ++p)
      for (size_t q = p + 1; q < w.size(); ++q)
        if (w.classes[p] == w.classes[q]) naive = true;
    CHECK(eval_fo_finite(w, {},
                         parse_fo("(exists x (exists y (and (lt x y) (sim x y))))")) ==
          naive);
  }
}

TEST_CASE("eval_fo_run_bounded") {
  Oca inc = parse_oca("states q0\ninit q0\naccept q0\nq0 inc q0\n");
  LassoSummary si = analyze(inc);
  RunWord wi{&inc, &si};
  Fo pair_eq = parse_fo("(exists x (exists y (and (lt x y) (sim x y))))");
  CHECK_FALSE(eval_fo_run_bounded(wi, pair_eq, 500));
  CHECK(eval_fo_run_bounded(wi, fo_true(), 10));

  Oca alt = parse_oca("states q0 q1\ninit q0\naccept q0\nq0 inc q1\nq1 dec q0\n");
  LassoSummary sa = analyze(alt);
  RunWord wa{&alt, &sa};
  CHECK(eval_fo_run_bounded(wa, pair_eq, 3));

  // letter atoms test states of the run
  CHECK(eval_fo_run_bounded(wa, parse_fo("(exists x (letter q1 x))"), 3));
  CHECK_FALSE(eval_fo_run_bounded(wa, parse_fo("(exists x (letter q7 x))"), 3));
}

TEST_CASE("eval_fo_run_bounded agrees with finite evaluation on the materialized prefix") {
  std::mt19937_64 rng(2718);
  int used = 0;
  for (int i = 0; i < 160 && used < 60; ++i) {
    Oca a = random_deterministic_oca(rng, 5);
    LassoSummary s = analyze(a);
    if (!s.infinite) continue;
    ++used;
    RunWord w{&a, &s};
    uint64_t bound = 24;
    DataWord prefix = data_word_of_run(a, run_prefix(a, bound));
    REQUIRE(prefix.size() == bound);
    for (int k = 0; k < 6; ++k) {
      Fo f = random_pure_fo_sentence(rng, 2, 3, 3);
      CHECK(eval_fo_run_bounded(w, f, bound) == eval_fo_finite(prefix, {}, f));
    }
  }
  CHECK(used >= 30);
}

TEST_CASE("eval_ltl_run_bounded three-valued semantics") {
  Oca inc = parse_oca("states q0\ninit q0\naccept q0\nq0 inc q0\n");
  LassoSummary s = analyze(inc);
  RunWord w{&inc, &s};

  CHECK(eval_ltl_run_bounded(w, ltl_eventually(ltl_state("q0")), 1) == Tv::True);
  // G of a satisfiable-but-unconfirmable body stays unknown at any horizon
  Ltl g = ltl_always(ltl_down(1, ltl_next(ltl_not(ltl_up(1)))));
  CHECK(eval_ltl_run_bounded(w, g, 50) == Tv::Unknown);

  Oca alt = parse_oca("states q0 q1\ninit q0\naccept q0\nq0 inc q1\nq1 dec q0\n");
  LassoSummary sa = analyze(alt);
  RunWord wa{&alt, &sa};
  CHECK(eval_ltl_run_bounded(wa, ltl_down(1, ltl_next_k(2, ltl_up(1))), 3) == Tv::True);
}

TEST_CASE("three-valued verdicts are monotone in the horizon") {
  std::mt19937_64 rng(515);
  for (int i = 0; i < 80; ++i) {
    Oca a = random_deterministic_oca(rng, 5);
    LassoSummary s = analyze(a);
    if (!s.infinite) continue;
    RunWord w{&a, &s};
    Ltl f = random_ltl_sentence(rng, 3, 2, {"q0", "q1"});
    Tv prev = Tv::Unknown;
    for (uint64_t h : {5, 10, 20, 40}) {
      Tv now = eval_ltl_run_bounded(w, f, h);
      if (prev != Tv::Unknown) REQUIRE(now == prev);
      prev = now;
    }
  }
}

TEST_CASE("bounded_witness_search") {
  SECTION("trivial witness of length one") {
    Oca a = parse_oca("states q0\ninit q0\naccept q0\nq0 inc q0\n");
    auto w = bounded_witness_search(a, ltl_true(), 1);
    REQUIRE(w.has_value());
    REQUIRE(w->size() == 1);
    CHECK((*w)[0] == Config{0, 0});
    CHECK(validate_witness(a, ltl_true(), *w));
  }
  SECTION("no accepting states, no witness") {
    Oca a = parse_oca("states q0\ninit q0\naccept\nq0 inc q0\n");
    CHECK_FALSE(bounded_witness_search(a, ltl_true(), 64).has_value());
  }
  SECTION("nondeterministic branching") {
    Oca a = parse_oca(
        "states q0 q1 q2\ninit q0\naccept q2\n"
        "q0 inc q1\nq0 inc q2\nq1 inc q1\n");
    Ltl f = ltl_next(ltl_state("q2"));
    auto w = bounded_witness_search(a, f, 8);
    REQUIRE(w.has_value());
    CHECK(w->size() == 2);
    CHECK(validate_witness(a, f, *w));
  }
  SECTION("found witnesses re-validate") {
    std::mt19937_64 rng(616);
    int found = 0;
    for (int i = 0; i < 120; ++i) {
      Oca a = random_oca(rng, 4);
      Ltl f = random_ltl_sentence(rng, 2, 1, {"q0", "q1"});
      auto w = bounded_witness_search(a, f, 7);
      if (w) {
        ++found;
        REQUIRE(validate_witness(a, f, *w));
      }
    }
    CHECK(found > 10);
  }
}
