#include <doctest.h>

#include <random>

#include "common/fuzzers.hpp"
#include "speclint/errors.hpp"
#include "speclint/formula.hpp"
#include "speclint/parser.hpp"

using namespace speclint;

TEST_CASE("rational arithmetic and parsing") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
  CHECK((Rational(1, 2) * Rational(2, 3)) == Rational(1, 3));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational::parse("30") == Rational(30));
  CHECK(Rational::parse("0.5") == Rational(1, 2));
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-0.25") == Rational(-1, 4));
  CHECK(Rational(1, 2).str() == "1/2");
  CHECK(Rational(7).str() == "7");
  CHECK(Rational::gcd(Rational(1, 2), Rational(3, 4)) == Rational(1, 4));
  CHECK(Rational::gcd(Rational(0), Rational(30)) == Rational(30));
  CHECK(Rational(30).divisible_by(Rational(10)));
  CHECK_FALSE(Rational(30).divisible_by(Rational(7)));
  CHECK_THROWS_AS(Rational(1, 0), Error);
  CHECK_THROWS_AS(Rational::parse("abc"), Error);
}

TEST_CASE("parse builds the expected trees") {
  Formula f = parse_formula("F[0,30]((v > 100) -> G[0,20](v > 100))");
  REQUIRE(f.kind() == NodeKind::Eventually);
  CHECK(f.window() == TimeInterval(Rational(0), Rational(30)));
  const Formula &imp = f.child(0);
  REQUIRE(imp.kind() == NodeKind::Implies);
  CHECK(imp.child(0).atom_data().channel == "v");
  CHECK(imp.child(0).atom_data().cmp == Comparator::Gt);
  CHECK(imp.child(0).atom_data().bound == Rational(100));
  REQUIRE(imp.child(1).kind() == NodeKind::Always);
  CHECK(imp.child(1).window() == TimeInterval(Rational(0), Rational(20)));

  CHECK(parse_formula("true").kind() == NodeKind::True);

  Formula g = parse_formula("G[0,5](req -> F[0,10]ack)");
  REQUIRE(g.kind() == NodeKind::Always);
  REQUIRE(g.child(0).kind() == NodeKind::Implies);
  CHECK(g.child(0).child(0).atom_data().is_proposition);
  CHECK(g.child(0).child(0).atom_data().channel == "req");
  REQUIRE(g.child(0).child(1).kind() == NodeKind::Eventually);
  CHECK(g.child(0).child(1).child(0).atom_data().channel == "ack");
}

TEST_CASE("parser accepts the full grammar surface") {
  CHECK(parse_formula("always[0,5] p") ==
        parse_formula("G[0,5] p")); // keyword aliases
  CHECK(parse_formula("eventually[0,5] p") == parse_formula("F[0,5] p"));
  CHECK(parse_formula("not p") == parse_formula("!p"));
  CHECK(parse_formula("p and q") == parse_formula("p /\\ q"));
  CHECK(parse_formula("p or q") == parse_formula("p \\/ q"));
  CHECK(parse_formula("G[1/2,3/4] p").window() ==
        TimeInterval(Rational(1, 2), Rational(3, 4)));
  CHECK(parse_formula("G[0.5,0.75] p").window() ==
        TimeInterval(Rational(1, 2), Rational(3, 4)));

  // -> is right-associative; /\ binds tighter than \/ and ->.
  Formula f = parse_formula("a -> b -> c");
  REQUIRE(f.kind() == NodeKind::Implies);
  CHECK(f.child(1).kind() == NodeKind::Implies);
  Formula g = parse_formula("a /\\ b \\/ c");
  CHECK(g.kind() == NodeKind::Or);
  CHECK(g.child(0).kind() == NodeKind::And);

  // <-> desugars to a conjunction of two implications.
  Formula h = parse_formula("a <-> b");
  REQUIRE(h.kind() == NodeKind::And);
  CHECK(h.child(0).kind() == NodeKind::Implies);
  CHECK(h.child(1).kind() == NodeKind::Implies);

  // Until at primary level.
  Formula u = parse_formula("p U[0,3] q");
  REQUIRE(u.kind() == NodeKind::Until);
  CHECK(u.window() == TimeInterval(Rational(0), Rational(3)));
  Formula uu = parse_formula("p U[0,1] q U[0,2] r");
  REQUIRE(uu.kind() == NodeKind::Until); // left-assoc
  CHECK(uu.child(0).kind() == NodeKind::Until);
}

TEST_CASE("parser rejects bad input with positions") {
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("(p"), ParseError);
  CHECK_THROWS_AS(parse_formula("G[5,2] p"), ParseError); // reversed
  CHECK_THROWS_AS(parse_formula("G[-1,2] p"), ParseError); // negative
  CHECK_THROWS_AS(parse_formula("v == 5"), ParseError);   // equality
  CHECK_THROWS_AS(parse_formula("p && q"), ParseError);
  try {
    parse_formula("G[0,5]\n  (v == 5)");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("equality") != std::string::npos);
  }
}

TEST_CASE("printing is canonical and round-trips") {
  CHECK(to_text(Formula::boolean(true)) == "true");
  CHECK(to_text(Formula::threshold("v", Comparator::Gt, Rational(100))) ==
        "(v > 100)");
  Formula f = parse_formula("F[0,30]((v > 100) -> G[0,20](v > 100))");
  CHECK(parse_formula(to_text(f)) == f);
  CHECK(to_text(f) == "(F[0,30]((v > 100) -> (G[0,20](v > 100))))");
}

TEST_CASE("round trip on 1000 fuzzed formulas") {
  std::mt19937_64 rng(20260809);
  for (int i = 0; i < 1000; ++i) {
    Formula f = testing::random_full_formula(rng);
    CAPTURE(to_text(f));
    CHECK(parse_formula(to_text(f)) == f);
  }
}

TEST_CASE("horizon recursion") {
  CHECK(horizon(parse_formula("F[0,30]((v > 100) -> G[0,20](v > 100))")) ==
        Rational(50));
  CHECK(horizon(parse_formula("(v > 100)")) == Rational(0));
  CHECK(horizon(parse_formula("G[0,5](req -> F[0,10]ack)")) == Rational(15));
  CHECK(horizon(parse_formula("p U[0,3] (F[0,2] q)")) == Rational(5));
  CHECK(horizon(parse_formula("!G[1/2,3/2] p")) == Rational(3, 2));
}

TEST_CASE("horizon is monotone over subformulas") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    Formula f = testing::random_full_formula(rng);
    Rational h = horizon(f);
    std::function<void(const Formula &)> walk = [&](const Formula &g) {
      CHECK(horizon(g) <= h);
      for (const Formula &c : g.children()) {
        walk(c);
      }
    };
    walk(f);
  }
}

TEST_CASE("fragment classification") {
  CHECK(fragment_class(parse_formula("G[0,5](req -> F[0,10]ack)")) ==
        FragmentClass::BoxDiamond);
  CHECK(fragment_class(parse_formula("(v > 100)")) ==
        FragmentClass::BoxDiamond);
  CHECK(fragment_class(parse_formula("p U[0,3] q")) == FragmentClass::Full);
  CHECK(fragment_class(parse_formula("G[0,2](p U[0,3] q)")) ==
        FragmentClass::Full);
}

TEST_CASE("implication occurrences in pre-order") {
  Formula f = parse_formula("G[0,5](req -> F[0,10]ack)");
  auto occs = implication_occurrences(f);
  REQUIRE(occs.size() == 1);
  CHECK(occs[0].path == Path{0});
  CHECK(occs[0].antecedent == Formula::proposition("req"));

  CHECK(implication_occurrences(parse_formula("(v > 100)")).empty());

  Formula g = parse_formula("(a -> b) /\\ (c -> d)");
  auto gocc = implication_occurrences(g);
  REQUIRE(gocc.size() == 2);
  CHECK(gocc[0].path == Path{0});
  CHECK(gocc[0].antecedent == Formula::proposition("a"));
  CHECK(gocc[1].path == Path{1});
  CHECK(gocc[1].antecedent == Formula::proposition("c"));
}

TEST_CASE("occurrence count equals the number of Implies nodes") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Formula f = testing::random_full_formula(rng);
    std::size_t count = 0;
    std::function<void(const Formula &)> walk = [&](const Formula &g) {
      if (g.kind() == NodeKind::Implies) {
        ++count;
      }
      for (const Formula &c : g.children()) {
        walk(c);
      }
    };
    walk(f);
    CHECK(implication_occurrences(f).size() == count);
  }
}

TEST_CASE("antecedent failure mutation") {
  Formula f = parse_formula("G[0,5](req -> F[0,10]ack)");
  Formula mut = antecedent_failure_mutation(f, Path{0});
  CHECK(mut == parse_formula("G[0,15](!req)"));

  Formula g = parse_formula("F[0,30]((v > 100) -> G[0,20](v > 100))");
  Formula gmut = antecedent_failure_mutation(g, Path{0});
  CHECK(gmut == parse_formula("G[0,50](!(v > 100))"));

  // Path addressing a non-implication is an error.
  Formula h = parse_formula("(a -> b) /\\ c");
  CHECK_THROWS_AS(antecedent_failure_mutation(h, Path{}), Error);
  CHECK_THROWS_AS(antecedent_failure_mutation(h, Path{1}), Error);
}

TEST_CASE("mutation always has shape G[0,H] !antecedent") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    Formula f = testing::random_full_formula(rng);
    for (const auto &occ : implication_occurrences(f)) {
      Formula mut = antecedent_failure_mutation(f, occ.path);
      REQUIRE(mut.kind() == NodeKind::Always);
      CHECK(mut.window().lower == Rational(0));
      CHECK(mut.window().upper == horizon(f));
      REQUIRE(mut.child(0).kind() == NodeKind::Not);
      CHECK(mut.child(0).child(0) == occ.antecedent);
    }
  }
}

TEST_CASE("path resolution and replacement") {
  Formula f = parse_formula("(a /\\ b) \\/ c");
  CHECK(f.subformula(Path{0, 1}) == Formula::proposition("b"));
  Formula g = f.replaced(Path{0, 1}, Formula::boolean(true));
  CHECK(g == parse_formula("(a /\\ true) \\/ c"));
  CHECK(f == parse_formula("(a /\\ b) \\/ c")); // original untouched
  CHECK_THROWS_AS(f.subformula(Path{5}), Error);
}
