#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "speclint/debugger.hpp"
#include "speclint/errors.hpp"
#include "speclint/falsifier.hpp"
#include "speclint/monitor.hpp"
#include "speclint/parser.hpp"
#include "speclint/plant.hpp"
#include "speclint/templates.hpp"

namespace {

using namespace speclint;

// Exit codes, stable across releases:
//   0 success (lint: clean; monitor: satisfied non-vacuously;
//     falsify: falsified; mine: value produced)
//   1 findings (lint: issues; monitor: falsified)
//   2 usage, parse, fragment, trace, or simulation error
//   3 falsification budget exhausted
//   4 monitor: satisfied but vacuous
enum ExitCode {
  kOk = 0,
  kFindings = 1,
  kError = 2,
  kBudgetExhausted = 3,
  kVacuous = 4,
};

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/* A spec argument is either a template literal or a path to a file that
 * holds one formula (or itself a template literal). */
Formula load_spec(const std::string &arg) {
  if (is_template_literal(arg)) {
    return instantiate(parse_template_literal(arg));
  }
  std::string text = read_file(arg);
  // Trim trailing whitespace/newlines.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.pop_back();
  }
  if (is_template_literal(text)) {
    return instantiate(parse_template_literal(text));
  }
  return parse_formula(text);
}

bool color_enabled() {
  const char *env = std::getenv("SPECLINT_COLOR");
  if (env != nullptr && std::string(env) == "0") {
    return false;
  }
  return isatty(fileno(stdout)) != 0;
}

std::string paint(const std::string &text, const char *code) {
  if (!color_enabled()) {
    return text;
  }
  return std::string("\033[") + code + "m" + text + "\033[0m";
}

Rational parse_rational_flag(const std::string &text, const char *flag) {
  try {
    return Rational::parse(text);
  } catch (const Error &e) {
    throw Error(std::string(flag) + ": " + e.what());
  }
}

struct ModelFlags {
  std::string name = "secondorder";
  std::string external_cmd;
  std::vector<std::string> params;
  double integrator_step = 0.01;
  std::string sample_period = "1/10";

  ModelSpec build() const {
    ModelSpec m;
    if (name == "external") {
      if (external_cmd.empty()) {
        throw Error("--model external needs --external-cmd");
      }
      m.kind = ModelKind::External;
      m.external_command = external_cmd;
    } else {
      m = ModelSpec::by_name(name);
    }
    for (const std::string &kv : params) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error("--model-param expects name=value, got '" + kv + "'");
      }
      m.parameters[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    m.integrator_step = integrator_step;
    m.output_sample_period =
        parse_rational_flag(sample_period, "--sample-period");
    return m;
  }
};

void add_model_flags(CLI::App *cmd, ModelFlags &mf) {
  cmd->add_option("--model", mf.name,
                  "system under test: secondorder, cruise, or external")
      ->default_val("secondorder");
  cmd->add_option("--external-cmd", mf.external_cmd,
                  "command line of the external simulator (model external)");
  cmd->add_option("--model-param", mf.params,
                  "model parameter override, name=value (repeatable)");
  cmd->add_option("--integrator-step", mf.integrator_step,
                  "fixed RK4 step (default 0.01)");
  cmd->add_option("--sample-period", mf.sample_period,
                  "output sample period, rational (default 1/10)");
}

struct SearchFlags {
  std::uint64_t budget = 200;
  std::uint64_t seed = 0;
  std::size_t sigma = 8;
  std::size_t stall = 10;
  std::size_t refinements = 3;
  std::size_t tabu = 1000;
  std::size_t jobs = 1;

  SearchConfig build() const {
    SearchConfig cfg;
    cfg.budget = budget;
    cfg.seed = seed;
    cfg.neighbor_sample_size = sigma;
    cfg.stall_threshold = stall;
    cfg.max_refinements = refinements;
    cfg.tabu_capacity = tabu;
    cfg.jobs = jobs;
    return cfg;
  }
};

void add_search_flags(CLI::App *cmd, SearchFlags &sf) {
  cmd->add_option("--budget", sf.budget, "max simulations")->default_val(200);
  cmd->add_option("--seed", sf.seed, "search seed")->default_val(0);
  cmd->add_option("--sigma", sf.sigma, "neighbors sampled per iteration")
      ->default_val(8);
  cmd->add_option("--stall", sf.stall, "stalls before refine/restart")
      ->default_val(10);
  cmd->add_option("--refinements", sf.refinements, "max grid refinements")
      ->default_val(3);
  cmd->add_option("--tabu", sf.tabu, "tabu list capacity")->default_val(1000);
  cmd->add_option("--jobs", sf.jobs, "parallel neighbor evaluations")
      ->default_val(1);
}

int run_lint(const std::string &spec, const std::string &delta,
             const std::string &hzn, const std::string &format) {
  Formula f = load_spec(spec);
  LintOptions opts;
  if (!delta.empty()) {
    opts.delta = parse_rational_flag(delta, "--delta");
  }
  if (!hzn.empty()) {
    opts.horizon = parse_rational_flag(hzn, "--horizon");
  }
  LintReport report = lint(f, opts);
  if (format == "json") {
    std::cout << lint_report_json(report);
  } else {
    std::cout << lint_report_text(report);
  }
  if (report.error) {
    std::cerr << paint("error: ", "31") << *report.error << "\n";
    return kError;
  }
  return report.has_issues() ? kFindings : kOk;
}

int run_monitor(const std::string &spec, const std::string &trace_path,
                const std::string &t0_text, const std::string &format) {
  Formula f = load_spec(spec);
  Trace tr = read_trace_file(trace_path);
  Rational t0 = t0_text.empty() ? Rational(0)
                                : parse_rational_flag(t0_text, "--t0");

  Adequacy adq = check_adequacy(f, tr, t0);
  if (!adq.ok) {
    throw TraceError("trace too short for the formula horizon by " +
                     adq.missing.str() + " time units");
  }
  bool verdict = eval_bool(f, tr, t0);
  double rho = robustness(f, tr, t0);
  std::vector<VacuityFlag> flags = signal_vacuity(f, tr);
  bool any_vacuous = false;
  for (const VacuityFlag &fl : flags) {
    any_vacuous = any_vacuous || fl.vacuous;
  }

  if (format == "json") {
    nlohmann::json j;
    j["formula"] = to_text(f);
    j["t0"] = t0.str();
    j["verdict"] = verdict ? "satisfied" : "falsified";
    j["robustness"] = rho;
    j["vacuous"] = verdict && any_vacuous;
    j["flags"] = nlohmann::json::array();
    for (const VacuityFlag &fl : flags) {
      j["flags"].push_back(
          {{"path", fl.path},
           {"antecedent", to_text(fl.antecedent)},
           {"verdict", fl.vacuous ? "vacuous" : "non_vacuous"}});
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "formula: " << to_text(f) << "\n";
    std::cout << "verdict: "
              << (verdict ? paint("satisfied", "32") : paint("falsified", "31"))
              << " at t0=" << t0.str() << "\n";
    std::cout << "robustness: " << format_double(rho) << "\n";
    for (const VacuityFlag &fl : flags) {
      std::cout << "  antecedent " << to_text(fl.antecedent) << " at "
                << path_str(fl.path) << ": "
                << (fl.vacuous ? paint("vacuous", "33") : "non_vacuous")
                << "\n";
    }
    if (verdict && any_vacuous) {
      std::cout << paint("the trace satisfies the specification vacuously",
                         "33")
                << "\n";
    }
  }
  if (!verdict) {
    return kFindings;
  }
  return any_vacuous ? kVacuous : kOk;
}

int run_falsify(const std::string &spec, const std::string &grid_path,
                const ModelFlags &mf, const SearchFlags &sf,
                const std::string &out_path, const std::string &dump_trace) {
  Formula f = load_spec(spec);
  Grid grid = grid_from_file(grid_path);
  ModelSpec model = mf.build();
  SearchConfig cfg = sf.build();

  FalsificationResult res = falsify(f, model, grid, cfg);
  std::string json = result_to_json(res, cfg);
  std::cout << json;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      throw Error("cannot write '" + out_path + "'");
    }
    out << json;
  }
  if (!dump_trace.empty()) {
    InputSignal best = realize(res.best_candidate, res.final_grid);
    Rational sim_horizon = horizon(f);
    for (const auto &[_, ch] : res.final_grid.channels) {
      sim_horizon = std::max(sim_horizon, ch.control_times.back());
    }
    if (sim_horizon.is_zero()) {
      sim_horizon = model.output_sample_period;
    }
    Trace tr = simulate(model, best, sim_horizon);
    std::ofstream out(dump_trace);
    if (!out) {
      throw Error("cannot write '" + dump_trace + "'");
    }
    out << write_trace_csv(tr);
  }
  return res.status == SearchStatus::Falsified ? kOk : kBudgetExhausted;
}

int run_mine(const std::string &template_literal, const std::string &param,
             double lo, double hi, unsigned iters, const std::string &grid_path,
             const ModelFlags &mf, const SearchFlags &sf) {
  TemplateInstance inst = parse_template_literal(template_literal);
  Grid grid = grid_from_file(grid_path);
  ModelSpec model = mf.build();
  SearchConfig cfg = sf.build();

  double value = mine_parameter(inst, param, lo, hi, model, grid, cfg, iters);
  nlohmann::json j;
  j["template"] = inst.template_id;
  j["channel"] = inst.channel;
  j["parameter"] = param;
  j["value"] = value;
  j["lo"] = lo;
  j["hi"] = hi;
  j["iterations"] = iters;
  std::cout << j.dump(2) << "\n";
  return kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"speclint: debug, monitor, and falsify MITL specifications"};
  app.require_subcommand(1);

  // lint
  std::string lint_spec, lint_delta, lint_horizon, lint_format = "text";
  CLI::App *lint_cmd =
      app.add_subcommand("lint", "check a specification for validity, "
                                 "redundancy, and vacuity issues");
  lint_cmd->add_option("spec", lint_spec, "formula file or template literal")
      ->required();
  lint_cmd->add_option("--delta", lint_delta, "discretization step (rational)");
  lint_cmd->add_option("--horizon", lint_horizon, "unrolling horizon (rational)");
  lint_cmd->add_option("--format", lint_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->default_val("text");

  // monitor
  std::string mon_spec, mon_trace, mon_t0, mon_format = "text";
  CLI::App *mon_cmd = app.add_subcommand(
      "monitor", "evaluate a trace: verdict, robustness, signal vacuity");
  mon_cmd->add_option("spec", mon_spec, "formula file or template literal")
      ->required();
  mon_cmd->add_option("trace", mon_trace, "trace CSV file")->required();
  mon_cmd->add_option("--t0", mon_t0, "evaluation start time (rational)");
  mon_cmd->add_option("--format", mon_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->default_val("text");

  // falsify
  std::string fal_spec, fal_grid, fal_out, fal_dump;
  ModelFlags fal_model;
  SearchFlags fal_search;
  CLI::App *fal_cmd = app.add_subcommand(
      "falsify", "search the gridded input space for a falsifying input");
  fal_cmd->add_option("spec", fal_spec, "formula file or template literal")
      ->required();
  fal_cmd->add_option("--grid", fal_grid, "input grid JSON file")->required();
  add_model_flags(fal_cmd, fal_model);
  add_search_flags(fal_cmd, fal_search);
  fal_cmd->add_option("--out", fal_out, "write the result JSON here too");
  fal_cmd->add_option("--dump-trace", fal_dump,
                      "write the best candidate's trace CSV here");

  // mine
  std::string mine_template, mine_param, mine_grid;
  double mine_lo = 0.0, mine_hi = 1.0;
  unsigned mine_iters = 6;
  ModelFlags mine_model;
  SearchFlags mine_search;
  CLI::App *mine_cmd = app.add_subcommand(
      "mine", "bisect a monotone template parameter against the model");
  mine_cmd->add_option("template", mine_template, "template literal")
      ->required();
  mine_cmd->add_option("--param", mine_param, "parameter to mine")->required();
  mine_cmd->add_option("--lo", mine_lo, "falsifiable end of the bracket")
      ->default_val(0.0);
  mine_cmd->add_option("--hi", mine_hi, "unfalsified end of the bracket")
      ->default_val(1.0);
  mine_cmd->add_option("--iters", mine_iters, "bisection rounds")
      ->default_val(6);
  mine_cmd->add_option("--grid", mine_grid, "input grid JSON file")->required();
  add_model_flags(mine_cmd, mine_model);
  add_search_flags(mine_cmd, mine_search);

  CLI11_PARSE(app, argc, argv);

  try {
    if (lint_cmd->parsed()) {
      return run_lint(lint_spec, lint_delta, lint_horizon, lint_format);
    }
    if (mon_cmd->parsed()) {
      return run_monitor(mon_spec, mon_trace, mon_t0, mon_format);
    }
    if (fal_cmd->parsed()) {
      return run_falsify(fal_spec, fal_grid, fal_model, fal_search, fal_out,
                         fal_dump);
    }
    if (mine_cmd->parsed()) {
      return run_mine(mine_template, mine_param, mine_lo, mine_hi, mine_iters,
                      mine_grid, mine_model, mine_search);
    }
  } catch (const Error &e) {
    std::cerr << paint("error: ", "31") << e.what() << "\n";
    return kError;
  } catch (const std::exception &e) {
    std::cerr << paint("internal error: ", "31") << e.what() << "\n";
    return kError;
  }
  return kError;
}
