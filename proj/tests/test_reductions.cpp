#include <catch2/catch_amalgamated.hpp>

#include "ocmc/checker.hpp"
#include "ocmc/gen.hpp"
#include "ocmc/reductions.hpp"

using namespace ocmc;

namespace {
QbfInstance qbf2(const Prop& matrix) { return QbfInstance{2, matrix}; }
}  // namespace

TEST_CASE("solve_qbf_bruteforce") {
  CHECK(solve_qbf_bruteforce(qbf2(prop_iff(prop_var(1), prop_var(2)))));
  CHECK_FALSE(solve_qbf_bruteforce(qbf2(prop_var(1))));
  CHECK_FALSE(solve_qbf_bruteforce(qbf2(prop_and(prop_var(1), prop_not(prop_var(1))))));
}

TEST_CASE("qbf brute force agrees with naive cnf-style expansion") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    int n2 = (i % 2 + 1) * 2;
    // random small matrix
    std::uniform_int_distribution<int> vd(1, n2);
    auto lit = [&]() {
      Prop p = prop_var(vd(rng));
      return rng() % 2 ? p : prop_not(p);
    };
    Prop m = prop_const(true);
    for (int c = 0; c < 2; ++c)
      m = prop_and(m, prop_or(lit(), prop_or(lit(), lit())));
    QbfInstance q{n2, m};
    // second independent evaluator: iterate all assignments, fold game values
    size_t count = size_t(1) << n2;
    std::vector<bool> table(count);
    for (size_t mask = 0; mask < count; ++mask) {
      std::vector<bool> v(n2);
      for (int b = 0; b < n2; ++b) v[b] = (mask >> b) & 1;
      table[mask] = prop_eval(m, v);
    }
    auto fold = [&](auto&& self, int var, size_t mask) -> bool {
      if (var == n2) return table[mask];
      bool t = self(self, var + 1, mask | (size_t(1) << var));
      bool f = self(self, var + 1, mask);
      return var % 2 == 0 ? (t && f) : (t || f);
    };
    CHECK(solve_qbf_bruteforce(q) == fold(fold, 0, 0));
  }
}

TEST_CASE("qbf_to_instance automaton shape") {
  QbfInstance q = qbf2(prop_iff(prop_var(1), prop_var(2)));
  QbfReduction r = qbf_to_instance(q);
  CHECK(r.oca.state_count() == 6);  // q0, q1, q1', q2, q2', qF
  CHECK(is_deterministic(r.oca));
  CHECK(is_sentence(r.formula));
  // counter trace 0 (01)^{2N} 0...
  auto run = run_prefix(r.oca, 8);
  std::vector<uint64_t> counters;
  for (const Config& c : run) counters.push_back(c.counter);
  CHECK(counters == std::vector<uint64_t>{0, 0, 1, 0, 1, 0, 0, 0});
}

TEST_CASE("qbf end-to-end on fixed instances") {
  SECTION("forall p1 exists p2 (p1 iff p2) is true") {
    QbfReduction r = qbf_to_instance(qbf2(prop_iff(prop_var(1), prop_var(2))));
    Verdict v = check(r.oca, r.formula, CheckMode::Infinitary);
    CHECK(v.answer);
  }
  SECTION("forall p1 exists p2 (p1 and not p1) is false") {
    QbfReduction r =
        qbf_to_instance(qbf2(prop_and(prop_var(1), prop_not(prop_var(1)))));
    Verdict v = check(r.oca, r.formula, CheckMode::Infinitary);
    CHECK_FALSE(v.answer);
  }
}

TEST_CASE("parse_qbf") {
  QbfInstance q = parse_qbf("forall p1 exists p2\n(iff p1 p2)\n");
  CHECK(q.n2 == 2);
  CHECK(solve_qbf_bruteforce(q));
  CHECK_THROWS_AS(parse_qbf("exists p1 forall p2\n(iff p1 p2)\n"), ReductionError);
  CHECK_THROWS_AS(parse_qbf("forall p1\ntrue\n"), ReductionError);
}

TEST_CASE("minsky gadget instance") {
  // inc(1) inc(1) dec(1) dec(1) ifzero(1) into an accepting state
  TwoCounterMachine m = parse_tcm(
      "states s0 s1 s2 s3 s4 s5\ninit s0\naccept s5\n"
      "s0 inc 1 s1\ns1 inc 1 s2\ns2 dec 1 s3\ns3 dec 1 s4\ns4 ifzero 1 s5\n");
  MinskyReduction r = minsky_to_instance(m);
  CHECK(register_count(r.formula) == 1);
  CHECK_FALSE(is_deterministic(r.oca));
  CHECK_FALSE(is_weakly_deterministic(r.oca));

  uint64_t budget = minsky_witness_budget(5);
  auto w = bounded_witness_search(r.oca, r.formula, budget);
  REQUIRE(w.has_value());
  CHECK(validate_witness(r.oca, r.formula, *w));
  // the projection replays as an accepting two-counter run
  std::vector<size_t> seq = minsky_project(r, *w);
  REQUIRE(seq.size() == 5);
  CHECK(tcm_replay_accepts(m, seq));
}

TEST_CASE("minsky instance without accepting reachability has no witness") {
  // machine only cycles on counter 1 and never reaches the accepting state
  TwoCounterMachine m = parse_tcm(
      "states s0 s1 s2\ninit s0\naccept s2\n"
      "s0 inc 1 s1\ns1 inc 1 s0\n");
  MinskyReduction r = minsky_to_instance(m);
  CHECK_FALSE(bounded_witness_search(r.oca, r.formula, 40).has_value());
}

TEST_CASE("initial-state precondition is enforced") {
  CHECK_THROWS_AS(
      parse_tcm("states s0 s1\ninit s0\naccept s1\ns0 dec 1 s1\n"),
      ReductionError);
}

TEST_CASE("weak determinization applies to minsky gadgets") {
  TwoCounterMachine m = parse_tcm(
      "states s0 s1\ninit s0\naccept s1\ns0 inc 1 s1\ns1 inc 2 s0\n");
  MinskyReduction r = minsky_to_instance(m);
  auto [w, f] = weak_determinize(r.oca, r.formula);
  CHECK(is_weakly_deterministic(w));
}

TEST_CASE("omega-SAT reduction") {
  SatReduction r = satltl_to_instance(parse_ltl("(down 1 (F (up 1)))"));
  SECTION("A_sat has 2 states and 4 transitions") {
    CHECK(r.oca.state_count() == 2);
    CHECK(r.oca.transitions().size() == 4);
  }
  SECTION("translation clauses") {
    // T(X psi) = X((not Pos) U (Pos and T(psi)))
    SatReduction rx = satltl_to_instance(parse_ltl("(X true)"));
    Ltl expect = ltl_next(ltl_until(ltl_not(sat_pos_marker()),
                                    ltl_and(sat_pos_marker(), ltl_true())));
    CHECK(ltl_equal(rx.formula, expect));
    // identity on register atoms
    SatReduction ru = satltl_to_instance(parse_ltl("(down 1 (up 1))"));
    CHECK(ltl_equal(ru.formula, parse_ltl("(down 1 (up 1))")));
  }
  SECTION("register cap") {
    CHECK_THROWS_AS(
        satltl_to_instance(parse_ltl("(down 2 (down 1 (and (up 1) (up 2))))")),
        ReductionError);
  }
}
