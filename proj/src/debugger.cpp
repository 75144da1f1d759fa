#include "speclint/debugger.hpp"

#include <algorithm>

#include <json.hpp>

#include "speclint/errors.hpp"

namespace speclint {

std::string lint_kind_name(LintKind k) {
  switch (k) {
  case LintKind::Unsatisfiable:
    return "unsatisfiable";
  case LintKind::Tautology:
    return "tautology";
  case LintKind::RedundantConjunct:
    return "redundant_conjunct";
  case LintKind::VacuousAntecedent:
    return "vacuous_antecedent";
  }
  return "?";
}

namespace {

std::string stage_name(LintStage s) {
  switch (s) {
  case LintStage::Validity:
    return "validity";
  case LintStage::Redundancy:
    return "redundancy";
  case LintStage::Vacuity:
    return "vacuity";
  }
  return "?";
}

/* g and g2 are equivalent iff (g and !g2) or (g2 and !g) is
 * unsatisfiable; the negations dualize into the fragment. */
bool equivalent(const Formula &g, const Formula &g2,
                const DiscretizationConfig &cfg) {
  Formula diff = Formula::disjunction(
      {Formula::conjunction({g, negation_normalized(g2)}),
       Formula::conjunction({g2, negation_normalized(g)})});
  return !is_satisfiable(diff, cfg);
}

/* Child slots of And nodes in depth-first pre-order. */
void collect_conjuncts(const Formula &f, Path &path, std::vector<Path> &out) {
  if (f.kind() == NodeKind::And) {
    for (std::size_t i = 0; i < f.arity(); ++i) {
      Path p = path;
      p.push_back(i);
      out.push_back(std::move(p));
    }
  }
  for (std::size_t i = 0; i < f.arity(); ++i) {
    path.push_back(i);
    collect_conjuncts(f.child(i), path, out);
    path.pop_back();
  }
}

} // namespace

std::vector<LintIssue> check_validity(const Formula &f,
                                      const DiscretizationConfig &cfg) {
  std::vector<LintIssue> issues;
  if (!is_satisfiable(f, cfg)) {
    issues.push_back({LintKind::Unsatisfiable, std::nullopt,
                      "the specification admits no trace at all (delta " +
                          cfg.delta.str() + ", horizon " + cfg.horizon.str() +
                          ")",
                      std::nullopt});
  } else if (is_tautology(f, cfg)) {
    issues.push_back({LintKind::Tautology, std::nullopt,
                      "the specification evaluates to true no matter what "
                      "the system does (delta " +
                          cfg.delta.str() + ", horizon " + cfg.horizon.str() +
                          ")",
                      std::nullopt});
  }
  return issues;
}

std::vector<LintIssue> check_redundancy(const Formula &f,
                                        const DiscretizationConfig &cfg) {
  std::vector<Path> slots;
  Path scratch;
  collect_conjuncts(f, scratch, slots);

  // Drop conjuncts cumulatively, scanning from the last candidate back,
  // so that of two interchangeable conjuncts the earliest survives and
  // only the later one is flagged.
  Formula current = f;
  std::vector<bool> flagged(slots.size(), false);
  for (std::size_t i = slots.size(); i-- > 0;) {
    Formula candidate = current.replaced(slots[i], Formula::boolean(true));
    if (equivalent(current, candidate, cfg)) {
      flagged[i] = true;
      current = candidate;
    }
  }

  std::vector<LintIssue> issues;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!flagged[i]) {
      continue;
    }
    issues.push_back({LintKind::RedundantConjunct, slots[i],
                      "conjunct '" + to_text(f.subformula(slots[i])) +
                          "' can be dropped without changing the formula",
                      std::nullopt});
  }
  return issues;
}

std::vector<LintIssue> check_vacuity(const Formula &f,
                                     const DiscretizationConfig &cfg) {
  std::vector<LintIssue> issues;
  for (const ImplicationOccurrence &occ : implication_occurrences(f)) {
    Formula mutation = antecedent_failure_mutation(f, occ.path);
    Formula conj = Formula::conjunction({f, mutation});
    DiscretizationConfig check_cfg = cfg;
    check_cfg.horizon = std::max(cfg.horizon, horizon(conj));
    SatResult res = check_satisfiable(conj, check_cfg);
    if (res.satisfiable) {
      issues.push_back(
          {LintKind::VacuousAntecedent, occ.path,
           "antecedent '" + to_text(occ.antecedent) +
               "' never needs to happen; the formula is satisfiable with "
               "it permanently false",
           res.witness});
    }
  }
  return issues;
}

LintReport lint(const Formula &f, const LintOptions &options) {
  LintReport report;
  report.formula = f;
  try {
    DiscretizationConfig cfg;
    cfg.delta = options.delta ? *options.delta : choose_delta(f);
    cfg.horizon = options.horizon ? *options.horizon : horizon(f);
    report.delta = cfg.delta;
    report.horizon = cfg.horizon;
    if (cfg.horizon < horizon(f)) {
      throw Error("horizon " + cfg.horizon.str() +
                  " is below the formula horizon " + horizon(f).str());
    }

    report.stages_run.push_back(LintStage::Validity);
    report.issues = check_validity(f, cfg);
    if (!report.issues.empty()) {
      return report; // later stages are meaningless for invalid specs
    }

    report.stages_run.push_back(LintStage::Redundancy);
    std::vector<LintIssue> redundancy = check_redundancy(f, cfg);
    report.issues.insert(report.issues.end(), redundancy.begin(),
                         redundancy.end());

    report.stages_run.push_back(LintStage::Vacuity);
    std::vector<LintIssue> vacuity = check_vacuity(f, cfg);
    report.issues.insert(report.issues.end(), vacuity.begin(), vacuity.end());
  } catch (const Error &e) {
    report.issues.clear();
    report.stages_run.clear();
    report.error = e.what();
  }
  return report;
}

std::string lint_report_json(const LintReport &report) {
  nlohmann::json j;
  j["formula"] = to_text(report.formula);
  j["delta"] = report.delta.str();
  j["horizon"] = report.horizon.str();
  j["issues"] = nlohmann::json::array();
  for (const LintIssue &issue : report.issues) {
    nlohmann::json ji;
    ji["kind"] = lint_kind_name(issue.kind);
    if (issue.path) {
      ji["path"] = *issue.path;
    }
    ji["detail"] = issue.detail;
    if (issue.witness) {
      ji["witness_csv"] = write_trace_csv(*issue.witness);
    }
    j["issues"].push_back(std::move(ji));
  }
  j["stages_run"] = nlohmann::json::array();
  for (LintStage s : report.stages_run) {
    j["stages_run"].push_back(stage_name(s));
  }
  if (report.error) {
    j["error"] = *report.error;
  }
  return j.dump(2) + "\n";
}

std::string lint_report_text(const LintReport &report) {
  std::string out;
  out += "formula: " + to_text(report.formula) + "\n";
  out += "delta: " + report.delta.str() +
         ", horizon: " + report.horizon.str() + "\n";
  if (report.error) {
    out += "error: " + *report.error + "\n";
    return out;
  }
  out += "stages run:";
  for (LintStage s : report.stages_run) {
    out += " " + stage_name(s);
  }
  out += "\n";
  if (report.issues.empty()) {
    out += "no issues found\n";
    return out;
  }
  out += std::to_string(report.issues.size()) + " issue(s):\n";
  for (const LintIssue &issue : report.issues) {
    out += "  [" + lint_kind_name(issue.kind) + "]";
    if (issue.path) {
      out += " at " + path_str(*issue.path);
    }
    out += ": " + issue.detail + "\n";
    if (issue.witness) {
      out += "  witness trace:\n";
      std::string csv = write_trace_csv(*issue.witness);
      std::size_t start = 0;
      while (start < csv.size()) {
        std::size_t end = csv.find('\n', start);
        if (end == std::string::npos) {
          end = csv.size();
        }
        out += "    " + csv.substr(start, end - start) + "\n";
        start = end + 1;
      }
    }
  }
  return out;
}

} // namespace speclint
