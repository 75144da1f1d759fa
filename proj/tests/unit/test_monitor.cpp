#include <doctest.h>

#include <cmath>
#include <random>

#include "common/fuzzers.hpp"
#include "common/oracles.hpp"
#include "speclint/errors.hpp"
#include "speclint/monitor.hpp"
#include "speclint/parser.hpp"
#include "speclint/trace.hpp"

using namespace speclint;

namespace {

Trace constant_trace(const std::string &channel, double value,
                     std::int64_t last, std::int64_t step = 1) {
  Trace tr;
  std::vector<double> vals;
  for (std::int64_t t = 0; t <= last; t += step) {
    tr.times.push_back(Rational(t));
    vals.push_back(value);
  }
  tr.channels[channel] = std::move(vals);
  return tr;
}

} // namespace

TEST_CASE("trace CSV round trip and validation") {
  Trace tr = read_trace_csv("time,v,req\n0,120,1\n1/2,118.5,0\n2,99,1\n");
  CHECK(tr.size() == 3);
  CHECK(tr.times[1] == Rational(1, 2));
  CHECK(tr.channel("v")[1] == doctest::Approx(118.5));
  CHECK(tr.channel("req")[2] == 1.0);
  Trace again = read_trace_csv(write_trace_csv(tr));
  CHECK(again.times == tr.times);
  CHECK(again.channels == tr.channels);

  CHECK_THROWS_AS(read_trace_csv("v,time\n0,1\n"), TraceError);
  CHECK_THROWS_AS(read_trace_csv("time,v\n1,120\n"), TraceError); // not at 0
  CHECK_THROWS_AS(read_trace_csv("time,v\n0,120\n0,130\n"), TraceError);
  CHECK_THROWS_AS(read_trace_csv("time,v\n0,abc\n"), TraceError);
}

TEST_CASE("adequacy checking") {
  Formula f15 = parse_formula("G[0,5](req -> F[0,10]ack)");
  Trace tr = constant_trace("req", 0, 20);
  tr.channels["ack"] = tr.channels["req"];
  CHECK(check_adequacy(f15, tr, Rational(0)).ok);

  Formula f50 = parse_formula("F[0,30]((v > 100) -> G[0,20](v > 100))");
  Trace short_tr = constant_trace("v", 0, 30);
  Adequacy adq = check_adequacy(f50, short_tr, Rational(0));
  CHECK_FALSE(adq.ok);
  CHECK(adq.missing == Rational(20));

  Formula atom = parse_formula("(v > 100)");
  CHECK(check_adequacy(atom, constant_trace("v", 0, 0), Rational(0)).ok);
}

TEST_CASE("robustness on constant signals") {
  Trace tr = constant_trace("v", 120.0, 30);
  CHECK(robustness(parse_formula("G[0,30](v > 100)"), tr, Rational(0)) ==
        doctest::Approx(20.0));
  CHECK(robustness(parse_formula("!(v > 100)"), tr, Rational(0)) ==
        doctest::Approx(-20.0));
  CHECK(robustness(parse_formula("(v < 100)"), tr, Rational(0)) ==
        doctest::Approx(-20.0));
  // Negation antisymmetry is exact.
  Formula g = parse_formula("F[0,10]((v > 100) /\\ (v < 150))");
  CHECK(robustness(Formula::negation(g), tr, Rational(0)) ==
        -robustness(g, tr, Rational(0)));
}

TEST_CASE("boolean semantics keeps comparators strict") {
  Trace tr = constant_trace("v", 100.0, 0);
  CHECK_FALSE(eval_bool(parse_formula("(v > 100)"), tr, Rational(0)));
  CHECK(eval_bool(parse_formula("(v >= 100)"), tr, Rational(0)));
  CHECK_FALSE(eval_bool(parse_formula("(v < 100)"), tr, Rational(0)));
  CHECK(eval_bool(parse_formula("(v <= 100)"), tr, Rational(0)));
  // Proposition threshold at 0.5.
  Trace tp = constant_trace("req", 0.5, 0);
  CHECK(eval_bool(parse_formula("req"), tp, Rational(0)));
  tp.channels["req"][0] = 0.49;
  CHECK_FALSE(eval_bool(parse_formula("req"), tp, Rational(0)));
}

TEST_CASE("monitor error paths") {
  Formula f = parse_formula("G[0,5](v > 0)");
  Trace tr = constant_trace("v", 1.0, 10);
  CHECK_THROWS_AS(robustness(f, tr, Rational(1, 3)), TraceError); // not a sample
  CHECK_THROWS_AS(
      robustness(parse_formula("G[0,5](w > 0)"), tr, Rational(0)),
      TraceError); // missing channel
  // Empty window: samples every 2, window [t+1, t+1] of width 0.
  Trace sparse = constant_trace("v", 1.0, 10, 2);
  CHECK_THROWS_AS(
      robustness(parse_formula("G[1,1](v > 0)"), sparse, Rational(0)),
      TraceError);
}

TEST_CASE("until semantics, including the empty inner range") {
  // p U[0,2] q with q true immediately: inner min over [t, t) is empty,
  // so the left operand never constrains the verdict.
  Trace tr;
  tr.times = {Rational(0), Rational(1), Rational(2)};
  tr.channels["p"] = {0.0, 1.0, 1.0};
  tr.channels["q"] = {1.0, 0.0, 0.0};
  CHECK(eval_bool(parse_formula("p U[0,2] q"), tr, Rational(0)));

  // q only at the end; p must hold at all earlier samples.
  Trace tr2;
  tr2.times = {Rational(0), Rational(1), Rational(2)};
  tr2.channels["p"] = {1.0, 1.0, 0.0};
  tr2.channels["q"] = {0.0, 0.0, 1.0};
  CHECK(eval_bool(parse_formula("p U[0,2] q"), tr2, Rational(0)));
  tr2.channels["p"][1] = 0.0;
  CHECK_FALSE(eval_bool(parse_formula("p U[0,2] q"), tr2, Rational(0)));
}

TEST_CASE("signal vacuity on the request/acknowledge example") {
  Formula f = parse_formula("G[0,5](req -> F[0,10]ack)");

  Trace silent = constant_trace("req", 0.0, 15);
  silent.channels["ack"] = silent.channels["req"];
  CHECK(eval_bool(f, silent, Rational(0))); // vacuously satisfied
  auto flags = signal_vacuity(f, silent);
  REQUIRE(flags.size() == 1);
  CHECK(flags[0].vacuous);
  CHECK(flags[0].antecedent == Formula::proposition("req"));

  Trace active = silent;
  active.channels["req"][2] = 1.0; // request at t=2
  active.channels["ack"][2] = 1.0;
  auto flags2 = signal_vacuity(f, active);
  REQUIRE(flags2.size() == 1);
  CHECK_FALSE(flags2[0].vacuous);

  CHECK(signal_vacuity(parse_formula("G[0,5](v > 0)"),
                       constant_trace("v", 1.0, 5))
            .empty());
}

TEST_CASE("tautology holds on 1000 random adequate traces") {
  Formula f = parse_formula("F[0,30]((v > 100) -> G[0,20](v > 100))");
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    Trace tr;
    std::vector<double> vals;
    for (std::int64_t t = 0; t <= 50; ++t) {
      tr.times.push_back(Rational(t));
      vals.push_back(static_cast<double>(rng() % 2000) / 10.0 - 50.0);
    }
    tr.channels["v"] = std::move(vals);
    CHECK(eval_bool(f, tr, Rational(0)));
  }
}

TEST_CASE("production evaluator agrees with the naive oracle") {
  std::mt19937_64 rng(31415);
  for (int i = 0; i < 500; ++i) {
    Formula f = testing::random_full_formula(rng);
    Trace tr = testing::random_adequate_trace(rng, f);
    CAPTURE(to_text(f));
    double rho = robustness(f, tr, Rational(0));
    double expected = testing::naive_robustness(f, tr, 0);
    CHECK(std::abs(rho - expected) <= 1e-9);
    bool verdict = eval_bool(f, tr, Rational(0));
    CHECK(verdict == testing::naive_eval_bool(f, tr, 0));
    // Sign soundness.
    if (rho > 0) {
      CHECK(verdict);
    }
    if (rho < 0) {
      CHECK_FALSE(verdict);
    }
  }
}

TEST_CASE("min/max monotonicity of conjunction and disjunction") {
  std::mt19937_64 rng(27182);
  for (int i = 0; i < 200; ++i) {
    Formula f = testing::random_full_formula(rng, 2);
    Formula g = testing::random_full_formula(rng, 2);
    Formula both = Formula::conjunction({f, g});
    Formula either = Formula::disjunction({f, g});
    Trace tr = testing::random_adequate_trace(rng, both);
    double rf = robustness(f, tr, Rational(0));
    CHECK(robustness(both, tr, Rational(0)) <= rf + 1e-12);
    CHECK(robustness(either, tr, Rational(0)) >= rf - 1e-12);
  }
}
