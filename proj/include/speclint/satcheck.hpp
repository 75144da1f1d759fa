#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "speclint/formula.hpp"
#include "speclint/trace.hpp"

namespace speclint {

/* Time step and total duration of the bounded discrete-time unrolling.
 * Every interval endpoint of the formula, and the horizon itself, must be
 * an integer multiple of delta. */
struct DiscretizationConfig {
  Rational delta;
  Rational horizon;
};

/* delta = gcd of all interval endpoints; 1 when the formula has no
 * temporal operator (or only zero endpoints). A positive `minimum` is
 * honored only when it still divides every endpoint, which by the gcd
 * property means minimum <= gcd. */
Rational choose_delta(const Formula &f, const Rational &minimum = Rational(0));

/* delta from choose_delta, horizon exactly horizon(f). */
DiscretizationConfig default_config(const Formula &f);

/* Dualized negation that stays inside the eventually/always fragment:
 * not always = eventually not, not eventually = always not, threshold
 * comparators flip (!(v > c) becomes v <= c). Throws FragmentError on
 * Until. */
Formula negation_normalized(const Formula &f);

/* One rung of a channel's threshold ladder: the lower-bound assertion
 * "v > bound" (strict) or "v >= bound" (non-strict). Every comparator
 * normalizes to a rung literal: v < c is the negation of v >= c, v <= c
 * the negation of v > c, and a proposition is v >= 1/2. */
struct LadderRung {
  Rational bound;
  bool strict;
};

struct ChannelLadder {
  bool proposition_only = true;
  std::vector<LadderRung> rungs; // ascending strength
  // step -> one variable per rung (created together with the chain
  // clauses so ladder consistency always holds).
  std::map<std::size_t, std::vector<int>> step_vars;
};

/* CNF produced by structural unrolling: one auxiliary variable per
 * connective occurrence per relevant step, defined by biconditional
 * clause groups, plus per-step ladder consistency chains. Literals are
 * (var+1) with sign. */
struct UnrolledEncoding {
  DiscretizationConfig cfg;
  std::size_t steps = 0;
  std::size_t num_vars = 0;
  int root_literal = 0;
  std::vector<std::vector<int>> clauses;
  std::map<std::string, ChannelLadder> channels;
};

/* Unrolls a fragment formula over steps 0..horizon/delta. Requires
 * fragment_class(f) == BoxDiamond, cfg.horizon >= horizon(f), and the
 * divisibility invariant. */
UnrolledEncoding unroll(const Formula &f, const DiscretizationConfig &cfg);

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
};

struct Assignment {
  std::vector<bool> values; // one per variable, total when satisfiable
};

struct SolveOutcome {
  bool satisfiable = false;
  Assignment assignment;
  SolveStats stats;
};

/* DPLL with unit propagation and chronological backtracking. Decision
 * order is ascending variable index, polarity false first, so outcomes
 * are deterministic for a given encoding. */
SolveOutcome solve(const UnrolledEncoding &enc);

/* Reconstructs a sampled witness from a satisfying assignment: one sample
 * per step at times k*delta. Threshold channels emit the midpoint of the
 * real interval consistent with that step's rung literals (tightest
 * threshold +/- 1 when one side is unbounded); proposition-only channels
 * emit 1.0/0.0. Throws on ladder-inconsistent assignments, which indicate
 * an encoding bug. */
Trace witness_to_trace(const UnrolledEncoding &enc, const Assignment &a);

struct SatResult {
  bool satisfiable = false;
  std::optional<Trace> witness;
  SolveStats stats;
};

SatResult check_satisfiable(const Formula &f, const DiscretizationConfig &cfg);

bool is_satisfiable(const Formula &f, const DiscretizationConfig &cfg);

/* A formula is a tautology iff its dualized negation is unsatisfiable. */
bool is_tautology(const Formula &f, const DiscretizationConfig &cfg);

} // namespace speclint
