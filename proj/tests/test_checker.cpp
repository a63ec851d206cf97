#include <catch2/catch_amalgamated.hpp>

#include "ocmc/checker.hpp"
#include "ocmc/gen.hpp"
#include "ocmc/semantics.hpp"

using namespace ocmc;

namespace {
Oca inc_loop() {
  return parse_oca("states q0\ninit q0\naccept q0\nq0 inc q0\n");
}
Oca alt_loop() {
  return parse_oca("states q0 q1\ninit q0\naccept q0\nq0 inc q1\nq1 dec q0\n");
}
}  // namespace

TEST_CASE("build_tables on the inc self-loop") {
  Oca a = inc_loop();
  LassoSummary s = analyze(a);
  auto d = constants(s);
  SimTables t = build_tables(a, s, d, CheckMode::Infinitary);
  CHECK(t.mode == SimTables::Mode::Pos);
  CHECK(t.window == 1);  // K1 + L*K2 = 0 + 1*1
  REQUIRE(t.p1.size() == 1);
  CHECK(t.p1[0] == std::pair<uint64_t, uint64_t>{0, 0});
  CHECK(t.p2.empty());
  REQUIRE(t.pf.size() == 1);
}

TEST_CASE("build_tables on the alternating loop") {
  Oca a = alt_loop();
  LassoSummary s = analyze(a);
  auto d = constants(s);
  SimTables t = build_tables(a, s, d, CheckMode::Infinitary);
  CHECK(t.mode == SimTables::Mode::Zero);
  CHECK(t.window == 2);
  // counters 0,1 in the window: only the diagonal pairs
  REQUIRE(t.p3.size() == 2);
  CHECK(t.p3[0] == std::pair<uint64_t, uint64_t>{0, 0});
  CHECK(t.p3[1] == std::pair<uint64_t, uint64_t>{1, 1});
  // accept {q0}: the even position of the window
  REQUIRE(t.pf == std::vector<uint64_t>{0});
}

TEST_CASE("build_word shapes") {
  SECTION("inc self-loop: s empty, t = [0]") {
    LassoSummary s = analyze(inc_loop());
    UpWord w = build_word(s, constants(s), CheckMode::Infinitary);
    CHECK(w.s.empty());
    REQUIRE(w.t.size() == 1);
    CHECK(w.t[0] == 0);
  }
  SECTION("alternating loop: t = [0, 1]") {
    LassoSummary s = analyze(alt_loop());
    UpWord w = build_word(s, constants(s), CheckMode::Infinitary);
    CHECK(w.s.empty());
    CHECK(w.t == std::vector<int64_t>{0, 1});
  }
  SECTION("stuck run: s enumerates the run, t is the pad letter") {
    Oca a = parse_oca("states q0 q1\ninit q0\naccept q1\nq0 inc q1\n");
    LassoSummary s = analyze(a);
    UpWord w = build_word(s, std::nullopt, CheckMode::Finitary);
    CHECK(w.s == std::vector<int64_t>{0, 1});
    CHECK(w.t == std::vector<int64_t>{kPadLetter});
  }
}

TEST_CASE("translate_sim") {
  Oca a = inc_loop();
  LassoSummary s = analyze(a);
  SimTables t = build_tables(a, s, constants(s), CheckMode::Infinitary);

  SECTION("identity on order atoms") {
    Fo f = parse_fo("(exists x (exists y (lt x y)))");
    Fo g = translate_sim(f, t);
    CHECK(fo_equal(f, g));
  }
  SECTION("no sim atom remains") {
    Fo f = parse_fo("(exists x (exists y (sim x y)))");
    Fo g = translate_sim(f, t);
    bool has_sim = false;
    auto walk = [&](auto&& self, const Fo& n) -> void {
      if (!n) return;
      if (n->kind == FoKind::Sim) has_sim = true;
      self(self, n->a);
      self(self, n->b);
    };
    walk(walk, g);
    CHECK_FALSE(has_sim);
  }
  SECTION("non-pure input rejected") {
    CHECK_THROWS_AS(translate_sim(parse_fo("(exists x (letter q0 x))"), t),
                    CheckError);
  }
  SECTION("translated sim agrees with the run on the inc self-loop") {
    // all counters differ, so sim reduces to position equality
    RunWord rw{&a, &s};
    UpWord word = build_word(s, constants(s), CheckMode::Infinitary);
    Fo f = parse_fo("(exists x (exists y (and (lt x y) (sim x y))))");
    CHECK(eval_fo_run_bounded(rw, f, 64) == false);
    CHECK(eval_up_word(word, translate_sim(f, t), 64) == false);
  }
}

TEST_CASE("translated sim atom agrees with counter equality pointwise") {
  std::mt19937_64 rng(864200);
  int used = 0;
  for (int i = 0; i < 200 && used < 50; ++i) {
    Oca a = random_deterministic_oca(rng, 5);
    LassoSummary s = analyze(a);
    if (!s.infinite) continue;
    auto d = constants(s);
    SimTables t = build_tables(a, s, d, CheckMode::Infinitary);
    if (t.window > 120) continue;
    ++used;
    UpWord word = build_word(s, d, CheckMode::Infinitary);
    Fo sim = fo_sim("u", "v");
    Fo tsim = translate_sim(sim, t);
    UpWordModel m(word);
    uint64_t probe = std::min<uint64_t>(3 * t.window + 4, 260);
    FoEvaluator<UpWordModel> ev(tsim, m, probe);
    for (uint64_t x = 0; x < probe; ++x)
      for (uint64_t y = x; y < probe; ++y) {
        bool run_eq = counter_at(s, x) == counter_at(s, y);
        bool word_eq = ev.eval({{"u", x}, {"v", y}});
        REQUIRE(run_eq == word_eq);
      }
  }
  CHECK(used >= 25);
}

TEST_CASE("lemma setP characterization by exhaustive enumeration") {
  std::mt19937_64 rng(700700);
  int used = 0;
  for (int i = 0; i < 200 && used < 40; ++i) {
    Oca a = random_deterministic_oca(rng, 5);
    LassoSummary s = analyze(a);
    if (!s.infinite || s.k_inc == 0) continue;
    auto d = constants(s);
    SimTables t = build_tables(a, s, d, CheckMode::Infinitary);
    uint64_t lk2 = t.lk2;
    if (s.k1 + 4 * lk2 > 4000) continue;
    ++used;
    std::set<std::pair<uint64_t, uint64_t>> p1(t.p1.begin(), t.p1.end());
    std::set<std::pair<uint64_t, uint64_t>> pall(t.p1.begin(), t.p1.end());
    pall.insert(t.p2.begin(), t.p2.end());
    for (uint64_t x = 0; x <= s.k1 + 4 * lk2; ++x)
      for (uint64_t y = x; y <= s.k1 + 4 * lk2; ++y) {
        bool eq = counter_at(s, x) == counter_at(s, y);
        bool c1 = x < t.window && y < t.window && p1.count({x, y}) > 0;
        bool c2 = x >= s.k1 && y >= s.k1 && y - x < lk2 &&
                  pall.count({s.k1 + (x - s.k1) % lk2, s.k1 + (y - s.k1) % lk2}) > 0;
        REQUIRE(eq == (c1 || c2));
      }
  }
  CHECK(used >= 15);
}

TEST_CASE("relativize_finitary") {
  Oca a = alt_loop();
  LassoSummary s = analyze(a);
  SimTables t = build_tables(a, s, constants(s), CheckMode::Finitary);
  UpWord w = build_word(s, constants(s), CheckMode::Finitary);
  SECTION("satisfiable iff an accepting position exists") {
    Fo f = relativize_finitary(fo_true(), t);
    CHECK(eval_up_word(w, f, 16));
  }
  SECTION("empty accepting table is unsatisfiable") {
    SimTables none = t;
    none.pf.clear();
    Fo f = relativize_finitary(fo_true(), none);
    CHECK_FALSE(eval_up_word(w, f, 16));
  }
}

TEST_CASE("eval_up_word basics") {
  SECTION("letter exists") {
    UpWord w{{}, {0}};
    CHECK(eval_up_word(w, parse_fo("(exists x (letter 0 x))")));
  }
  SECTION("periodic successor structure") {
    UpWord w{{}, {0, 1}};
    Fo f = parse_fo(
        "(forall x (imp (letter 0 x) (exists y (and (succ+1 y x) (letter 1 y)))))");
    CHECK(eval_up_word(w, f));
  }
  SECTION("sim atoms rejected") {
    UpWord w{{}, {0}};
    CHECK_THROWS_AS(eval_up_word(w, parse_fo("(exists x (sim x x))")), EvalError);
  }
}

TEST_CASE("check on the spec examples") {
  SECTION("strictly increasing counters never repeat") {
    Fo f = parse_fo(
        "(forall x (forall y (imp (succ+1 y x) (not (sim x y)))))");
    Verdict v = check(inc_loop(), f, CheckMode::Infinitary);
    CHECK(v.answer);
    CHECK(v.branch == Branch::InfKincPos);
  }
  SECTION("alternating loop repeats a counter") {
    Fo f = parse_fo("(exists x (exists y (and (lt x y) (sim x y))))");
    Verdict v = check(alt_loop(), f, CheckMode::Infinitary);
    CHECK(v.answer);
    CHECK(v.branch == Branch::InfKincZero);
  }
  SECTION("no accepting run means false") {
    Oca a = parse_oca("states q0\ninit q0\naccept\nq0 inc q0\n");
    Verdict v = check(a, fo_true(), CheckMode::Infinitary);
    CHECK_FALSE(v.answer);
    CHECK(v.branch == Branch::NoAcceptingInfRun);
  }
  SECTION("nondeterministic input rejected") {
    Oca a = parse_oca("states q0 q1\ninit q0\naccept\nq0 inc q0\nq0 inc q1\n");
    CHECK_THROWS_AS(check(a, fo_true(), CheckMode::Infinitary), CheckError);
  }
}

TEST_CASE("checker agrees with the run oracle at the same bound") {
  std::mt19937_64 rng(5150);
  int used = 0;
  while (used < 60) {
    Oca a = random_deterministic_oca(rng, 5);
    LassoSummary s = analyze(a);
    if (!s.infinite) continue;
    RunWord rw{&a, &s};
    for (int k = 0; k < 3; ++k) {
      Fo f = random_pure_fo_sentence(rng, 2, 3, 3);
      Verdict v = check(a, f, CheckMode::Infinitary);
      if (v.branch == Branch::NoAcceptingInfRun) {
        REQUIRE_FALSE(v.answer);
        continue;
      }
      if (v.bound_used > 3000) continue;
      bool oracle = eval_fo_run_bounded(rw, f, v.bound_used);
      REQUIRE(v.answer == oracle);
      ++used;
    }
  }
}

TEST_CASE("finitary checker agrees with the prefix oracle") {
  std::mt19937_64 rng(6001);
  int used = 0;
  while (used < 50) {
    Oca a = random_deterministic_oca(rng, 4);
    LassoSummary s = analyze(a);
    Fo f = random_pure_fo_sentence(rng, 2, 3, 2);
    Verdict v = check(a, f, CheckMode::Finitary);
    if (v.bound_used > 1200) continue;
    if (s.infinite) {
      RunWord rw{&a, &s};
      bool oracle = eval_fo_run_finitary(rw, f, v.bound_used);
      REQUIRE(v.answer == oracle);
      if (v.bound_used <= 60) {
        bool brute = eval_fo_prefixes_bounded(rw, f, v.bound_used);
        REQUIRE(v.answer == brute);
      }
    } else {
      // brute force over prefixes of the maximal run
      bool oracle = false;
      for (size_t e = 0; e < s.max_run.size(); ++e) {
        if (!a.is_accepting(s.max_run[e].state)) continue;
        DataWord w = data_word_of_run(
            a, std::vector<Config>(s.max_run.begin(), s.max_run.begin() + e + 1));
        if (eval_fo_finite(w, {}, f)) oracle = true;
      }
      REQUIRE(v.answer == oracle);
    }
    ++used;
  }
}

TEST_CASE("verdicts stabilize when the bound doubles") {
  std::mt19937_64 rng(424242);
  int used = 0;
  while (used < 25) {
    Oca a = random_deterministic_oca(rng, 4);
    Fo f = random_pure_fo_sentence(rng, 2, 3, 2);
    Verdict v = check(a, f, CheckMode::Infinitary);
    if (v.branch == Branch::NoAcceptingInfRun || v.bound_used > 700) continue;
    Verdict v2 = check(a, f, CheckMode::Infinitary, v.bound_used * 2);
    Verdict v4 = check(a, f, CheckMode::Infinitary, v.bound_used * 4);
    REQUIRE(v.answer == v2.answer);
    REQUIRE(v.answer == v4.answer);
    ++used;
  }
}
