#include <doctest.h>

#include <random>

#include "common/fuzzers.hpp"
#include "common/oracles.hpp"
#include "speclint/errors.hpp"
#include "speclint/monitor.hpp"
#include "speclint/parser.hpp"
#include "speclint/satcheck.hpp"

using namespace speclint;

TEST_CASE("choose_delta is the endpoint gcd") {
  CHECK(choose_delta(parse_formula(
            "F[0,30]((v > 100) -> G[0,20](v > 100))")) == Rational(10));
  CHECK(choose_delta(parse_formula("(v > 100)")) == Rational(1));
  CHECK(choose_delta(parse_formula("G[0,1/2] p /\\ F[0,3/4] p")) ==
        Rational(1, 4));
  CHECK(choose_delta(parse_formula("G[0,0] p")) == Rational(1));
  // A minimum coarser than the gcd cannot divide the endpoints.
  CHECK_THROWS_AS(
      choose_delta(parse_formula("G[0,1/2] p"), Rational(1)), Error);
}

TEST_CASE("unroll shapes small encodings as expected") {
  SUBCASE("single atom at horizon 0") {
    Formula f = parse_formula("(v > 100)");
    UnrolledEncoding enc = unroll(f, {Rational(1), Rational(0)});
    CHECK(enc.steps == 1);
    CHECK(enc.num_vars == 1); // just the atom rung variable
    CHECK(enc.root_literal == 1);
  }
  SUBCASE("always expands to a conjunction over its window") {
    Formula f = parse_formula("G[0,2] p");
    UnrolledEncoding enc = unroll(f, default_config(f));
    CHECK(enc.steps == 3);
    // 3 rung vars + 1 aux var for the always node.
    CHECK(enc.num_vars == 4);
    // Defining group: 3 implication clauses + 1 closing + root unit.
    CHECK(enc.clauses.size() == 5);
  }
  SUBCASE("threshold ladder clauses") {
    Formula f = parse_formula("(v > 100) \\/ (v > 50)");
    UnrolledEncoding enc = unroll(f, default_config(f));
    REQUIRE(enc.channels.count("v") == 1);
    const ChannelLadder &lad = enc.channels.at("v");
    REQUIRE(lad.rungs.size() == 2);
    CHECK(lad.rungs[0].bound == Rational(50)); // weaker rung first
    CHECK(lad.rungs[1].bound == Rational(100));
    // Chain clause (!v>100 \/ v>50) at step 0.
    const auto &vars = lad.step_vars.at(0);
    bool found = false;
    for (const auto &cl : enc.clauses) {
      if (cl.size() == 2 && cl[0] == -(vars[1] + 1) && cl[1] == vars[0] + 1) {
        found = true;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("unroll rejects fragment and divisibility violations") {
  CHECK_THROWS_AS(
      unroll(parse_formula("p U[0,3] q"),
             DiscretizationConfig{Rational(1), Rational(3)}),
      FragmentError);
  CHECK_THROWS_AS(
      unroll(parse_formula("G[0,3] p"),
             DiscretizationConfig{Rational(2), Rational(4)}),
      Error); // 3 not a multiple of 2
  CHECK_THROWS_AS(
      unroll(parse_formula("G[0,3] p"),
             DiscretizationConfig{Rational(1), Rational(2)}),
      Error); // horizon below the formula's
}

TEST_CASE("solve decides the worked examples") {
  SUBCASE("false is unsatisfiable") {
    Formula f = Formula::boolean(false);
    CHECK_FALSE(is_satisfiable(f, {Rational(1), Rational(0)}));
  }
  SUBCASE("the speed specification is a tautology") {
    Formula f = parse_formula("F[0,30]((v > 100) -> G[0,20](v > 100))");
    DiscretizationConfig cfg{Rational(1), Rational(50)};
    CHECK(is_satisfiable(f, cfg));
    CHECK(is_tautology(f, cfg));
    // Also at the coarser default resolution.
    CHECK(is_tautology(f, default_config(f)));
  }
  SUBCASE("the request/acknowledge specification is satisfiable, not valid") {
    Formula f = parse_formula("G[0,5](req -> F[0,10]ack)");
    DiscretizationConfig cfg{Rational(1), Rational(15)};
    CHECK(is_satisfiable(f, cfg));
    CHECK_FALSE(is_tautology(f, cfg));
  }
}

TEST_CASE("dualization involution and determinism") {
  std::mt19937_64 rng(515);
  for (int i = 0; i < 60; ++i) {
    Formula f = testing::random_fragment_formula(rng);
    DiscretizationConfig cfg = default_config(f);
    Formula nn = Formula::negation(Formula::negation(f));
    CHECK(is_tautology(nn, cfg) == is_tautology(f, cfg));

    UnrolledEncoding enc = unroll(f, cfg);
    SolveOutcome a = solve(enc);
    SolveOutcome b = solve(enc);
    CHECK(a.satisfiable == b.satisfiable);
    CHECK(a.stats.decisions == b.stats.decisions);
    CHECK(a.stats.propagations == b.stats.propagations);
    CHECK(a.stats.conflicts == b.stats.conflicts);
    if (a.satisfiable) {
      CHECK(a.assignment.values == b.assignment.values);
    }
  }
}

TEST_CASE("witness reconstruction uses the midpoint rule") {
  // (v > 50) /\ (v > 100): both rungs true, unbounded above -> 101.
  Formula f = parse_formula("(v > 50) /\\ (v > 100)");
  SatResult r = check_satisfiable(f, default_config(f));
  REQUIRE(r.satisfiable);
  CHECK(r.witness->channel("v")[0] == doctest::Approx(101.0));

  // (v > 50) /\ !(v > 100): midpoint of (50, 100] -> 75.
  Formula g = parse_formula("(v > 50) /\\ !(v > 100)");
  SatResult rg = check_satisfiable(g, default_config(g));
  REQUIRE(rg.satisfiable);
  CHECK(rg.witness->channel("v")[0] == doctest::Approx(75.0));

  // !(v > 50) /\ !(v > 100): unbounded below -> 49.
  Formula h = parse_formula("!(v > 50) /\\ !(v > 100)");
  SatResult rh = check_satisfiable(h, default_config(h));
  REQUIRE(rh.satisfiable);
  CHECK(rh.witness->channel("v")[0] == doctest::Approx(49.0));

  // Proposition channels emit exactly 0/1.
  Formula p = parse_formula("req /\\ !ack");
  SatResult rp = check_satisfiable(p, default_config(p));
  REQUIRE(rp.satisfiable);
  CHECK(rp.witness->channel("req")[0] == 1.0);
  CHECK(rp.witness->channel("ack")[0] == 0.0);
}

TEST_CASE("witness soundness: solver witnesses satisfy the formula") {
  std::mt19937_64 rng(616);
  int satisfiable_seen = 0;
  for (int i = 0; i < 300; ++i) {
    Formula f = testing::random_fragment_formula(rng);
    DiscretizationConfig cfg = default_config(f);
    SatResult r = check_satisfiable(f, cfg);
    if (!r.satisfiable) {
      continue;
    }
    ++satisfiable_seen;
    CAPTURE(to_text(f));
    CHECK(eval_bool(f, *r.witness, Rational(0)));
  }
  CHECK(satisfiable_seen > 100); // the fuzz mix should not be degenerate
}

TEST_CASE("solver status matches exhaustive enumeration") {
  std::mt19937_64 rng(717);
  for (int i = 0; i < 200; ++i) {
    Formula f = testing::random_fragment_formula(rng);
    DiscretizationConfig cfg{Rational(1), horizon(f)};
    std::int64_t steps = (cfg.horizon / cfg.delta).num() + 1;
    testing::DiscreteEnumerationOracle oracle(f, steps, cfg.delta);
    CAPTURE(to_text(f));
    CHECK(is_satisfiable(f, cfg) == oracle.satisfiable());
  }
}
