#include <catch2/catch_amalgamated.hpp>

#include "ocmc/oca.hpp"
#include "ocmc/gen.hpp"

using namespace ocmc;

TEST_CASE("parse_oca minimal file") {
  Oca a = parse_oca("states q0\ninit q0\naccept q0\nq0 inc q0\n");
  CHECK(a.state_count() == 1);
  CHECK(a.transitions().size() == 1);
  CHECK(a.is_accepting(0));
  CHECK(a.initial() == 0);
}

TEST_CASE("parse_oca errors") {
  SECTION("undeclared state in transition") {
    CHECK_THROWS_AS(parse_oca("states q0\ninit q0\naccept\nq0 inc q9\n"),
                    ParseError);
  }
  SECTION("duplicate initial") {
    CHECK_THROWS_AS(parse_oca("states q0 q1\ninit q0\ninit q1\naccept\n"),
                    ParseError);
  }
  SECTION("duplicate transition") {
    CHECK_THROWS_AS(
        parse_oca("states q0\ninit q0\naccept\nq0 inc q0\nq0 inc q0\n"),
        ParseError);
  }
  SECTION("bad instruction") {
    CHECK_THROWS_AS(parse_oca("states q0\ninit q0\nq0 bump q0\n"), ParseError);
  }
  SECTION("comments and blank lines are fine") {
    Oca a = parse_oca("# automaton\nstates q0 q1 # two states\n\ninit q0\naccept q1\nq0 inc q1\n");
    CHECK(a.state_count() == 2);
  }
}

TEST_CASE("parse/render round trip on random automata") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 200; ++i) {
    Oca a = i % 2 ? random_oca(rng, 6) : random_deterministic_oca(rng, 6);
    Oca b = parse_oca(render_oca(a));
    CHECK(oca_equal(a, b));
  }
}

TEST_CASE("successors semantics") {
  SECTION("inc adds one") {
    Oca a = parse_oca("states q0\ninit q0\naccept\nq0 inc q0\n");
    auto s = successors(a, {0, 5});
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Config{0, 6});
  }
  SECTION("dec disabled at zero") {
    Oca a = parse_oca("states q0 q1\ninit q0\naccept\nq0 dec q1\n");
    CHECK(successors(a, {0, 0}).empty());
    auto s = successors(a, {0, 3});
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Config{1, 2});
  }
  SECTION("ifzero only at zero, keeps zero") {
    Oca a = parse_oca("states q0 q1 q2\ninit q0\naccept\nq0 ifzero q1\nq0 dec q2\n");
    auto s = successors(a, {0, 0});
    REQUIRE(s.size() == 1);
    CHECK(s[0] == Config{1, 0});
  }
}

TEST_CASE("determinism shapes") {
  CHECK(is_deterministic(parse_oca("states q0\ninit q0\naccept\nq0 inc q0\n")));
  CHECK(is_deterministic(parse_oca(
      "states q0 q1\ninit q0\naccept\nq0 ifzero q1\nq0 dec q1\nq1 inc q0\n")));
  CHECK_FALSE(is_deterministic(parse_oca(
      "states q0 q1 q2\ninit q0\naccept\nq0 inc q1\nq0 inc q2\n")));
  // lone dec is not a deterministic shape
  CHECK_FALSE(is_deterministic(parse_oca("states q0\ninit q0\naccept\nq0 dec q0\n")));
}

TEST_CASE("weak determinism") {
  CHECK(is_weakly_deterministic(
      parse_oca("states q0 q1 q2\ninit q0\naccept\nq0 inc q1\nq0 dec q2\n")));
  CHECK_FALSE(is_weakly_deterministic(
      parse_oca("states q0 q1 q2\ninit q0\naccept\nq0 inc q1\nq0 inc q2\n")));
}

TEST_CASE("deterministic implies weakly deterministic") {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 200; ++i) {
    Oca a = random_deterministic_oca(rng, 7);
    REQUIRE(is_deterministic(a));
    CHECK(is_weakly_deterministic(a));
  }
}

TEST_CASE("step_deterministic") {
  Oca a = parse_oca("states q0\ninit q0\naccept\nq0 inc q0\n");
  CHECK(step_deterministic(a, {0, 0}) == Config{0, 1});

  Oca b = parse_oca("states q0 q1\ninit q0\naccept\nq0 inc q1\n");
  CHECK_FALSE(step_deterministic(b, {1, 0}).has_value());

  Oca c = parse_oca(
      "states q0 q1 q2\ninit q0\naccept\nq0 ifzero q1\nq0 dec q2\nq1 inc q0\nq2 inc q0\n");
  CHECK(step_deterministic(c, {0, 3}) == Config{2, 2});
}

TEST_CASE("run_prefix") {
  SECTION("inc self-loop") {
    Oca a = parse_oca("states q0\ninit q0\naccept\nq0 inc q0\n");
    auto r = run_prefix(a, 4);
    REQUIRE(r.size() == 4);
    CHECK(r[3] == Config{0, 3});
  }
  SECTION("alternating") {
    Oca a = parse_oca("states q0 q1\ninit q0\naccept\nq0 inc q1\nq1 dec q0\n");
    auto r = run_prefix(a, 4);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == Config{0, 0});
    CHECK(r[1] == Config{1, 1});
    CHECK(r[2] == Config{0, 0});
    CHECK(r[3] == Config{1, 1});
  }
  SECTION("stuck run is shorter") {
    Oca a = parse_oca("states q0\ninit q0\naccept\nq0 dec q0\n");
    auto r = run_prefix(a, 4);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == Config{0, 0});
  }
}

TEST_CASE("run counters change by one and stay nonnegative") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 100; ++i) {
    Oca a = random_deterministic_oca(rng, 6);
    auto r = run_prefix(a, 200);
    for (size_t j = 0; j + 1 < r.size(); ++j) {
      auto d = static_cast<int64_t>(r[j + 1].counter) -
               static_cast<int64_t>(r[j].counter);
      CHECK((d == 1 || d == -1 || (d == 0 && r[j].counter == 0)));
      // step agrees with the one-step relation
      auto s = successors(a, r[j]);
      REQUIRE(s.size() == 1);
      CHECK(s[0] == r[j + 1]);
      CHECK(step_deterministic(a, r[j]) == r[j + 1]);
    }
  }
}
