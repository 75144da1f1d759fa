#pragma once

#include <optional>
#include <string>
#include <vector>

#include "speclint/formula.hpp"
#include "speclint/satcheck.hpp"
#include "speclint/trace.hpp"

namespace speclint {

enum class LintKind {
  Unsatisfiable,
  Tautology,
  RedundantConjunct,
  VacuousAntecedent,
};

std::string lint_kind_name(LintKind k);

struct LintIssue {
  LintKind kind;
  std::optional<Path> path; // absent for the validity kinds
  std::string detail;
  std::optional<Trace> witness; // vacuous_antecedent carries one
};

enum class LintStage { Validity, Redundancy, Vacuity };

struct LintOptions {
  std::optional<Rational> delta;   // default: gcd of interval endpoints
  std::optional<Rational> horizon; // default: the formula's own horizon
};

struct LintReport {
  Formula formula;
  Rational delta;
  Rational horizon;
  std::vector<LintIssue> issues;
  std::vector<LintStage> stages_run;
  std::optional<std::string> error; // fragment/configuration failure

  bool has_issues() const { return !issues.empty(); }
};

/* Stage 1: unsatisfiable or tautology; the two are mutually exclusive, so
 * at most one issue comes back. */
std::vector<LintIssue> check_validity(const Formula &f,
                                      const DiscretizationConfig &cfg);

/* Stage 2: a conjunct is redundant when replacing it by true leaves the
 * formula equivalent. Conjuncts are dropped cumulatively so duplicated
 * conjuncts yield a single finding (the earliest occurrence survives);
 * findings are reported in pre-order. */
std::vector<LintIssue> check_redundancy(const Formula &f,
                                        const DiscretizationConfig &cfg);

/* Stage 3: an antecedent is vacuous when the formula stays satisfiable
 * under the assertion that the antecedent never happens; the witness
 * trace is attached. */
std::vector<LintIssue> check_vacuity(const Formula &f,
                                     const DiscretizationConfig &cfg);

/* Full pipeline: validity gates everything (an unsatisfiable or
 * tautological formula stops the run); otherwise redundancy then
 * vacuity. Fragment violations come back as a report-level error. */
LintReport lint(const Formula &f, const LintOptions &options = {});

std::string lint_report_json(const LintReport &report);
std::string lint_report_text(const LintReport &report);

} // namespace speclint
