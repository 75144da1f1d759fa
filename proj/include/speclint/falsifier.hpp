#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "speclint/formula.hpp"
#include "speclint/plant.hpp"
#include "speclint/templates.hpp"

namespace speclint {

/* Finite search space over input signals: per channel, a grid of control
 * times and a (possibly non-uniform) grid of value levels. */
struct GridChannel {
  std::vector<Rational> control_times; // strictly increasing, first 0
  std::vector<double> levels;          // strictly increasing, >= 2
  Interp interp = Interp::Hold;
};

struct Grid {
  std::map<std::string, GridChannel> channels;

  void validate() const;
};

Grid grid_from_json(const std::string &json_text);
Grid grid_from_file(const std::string &path);

/* One value-level index per control time per channel. */
struct Candidate {
  std::map<std::string, std::vector<std::size_t>> indices;
};

void validate_candidate(const Candidate &c, const Grid &g);

/* Realizes the candidate: levels at control times, channel interpolation. */
InputSignal realize(const Candidate &c, const Grid &g);

/* Hash of the realized signal (redundant control points pruned), so a
 * candidate keeps its hash when a refinement embeds it. */
std::uint64_t candidate_hash(const Candidate &c, const Grid &g);

/* Simulates the candidate and returns the robustness of f on the output
 * trace at time 0. The simulation horizon is the formula horizon,
 * stretched to the last control time when that is later. */
double cost(const Formula &f, const ModelSpec &m, const Candidate &c,
            const Grid &g);

/* All candidates one level-index step away, in deterministic order:
 * channel name, control-time index, -1 before +1. */
std::vector<Candidate> neighbors(const Candidate &c, const Grid &g);

/* Midpoint insertion between adjacent value levels and adjacent control
 * times; old level indices map to new even indices. */
Grid refine(const Grid &g);

/* Maps a candidate onto refine(g): old indices double; inserted control
 * times take the left neighbor's level under hold interpolation (exact)
 * and the index midpoint under linear (exact for uniformly spaced
 * levels). */
Candidate embed_after_refine(const Candidate &c, const Grid &g);

struct SearchConfig {
  std::uint64_t budget = 0; // max simulations, must be positive
  std::uint64_t seed = 0;
  std::size_t neighbor_sample_size = 8;
  std::size_t stall_threshold = 10;
  std::size_t max_refinements = 3;
  std::size_t tabu_capacity = 1000;
  std::size_t jobs = 1; // parallel neighbor evaluation
};

enum class SearchStatus { Falsified, BudgetExhausted };

struct HistoryEntry {
  std::uint64_t candidate_hash;
  double robustness;
};

struct FalsificationResult {
  SearchStatus status = SearchStatus::BudgetExhausted;
  Candidate best_candidate; // indices valid for final_grid
  Grid final_grid;
  double best_robustness = 0.0;
  std::uint64_t simulations_used = 0;
  std::vector<HistoryEntry> history; // one entry per simulation
};

/* Stochastic local search for an input with negative robustness: start
 * from a uniform random candidate, sample up to neighbor_sample_size
 * non-tabu neighbors per iteration, move on strict improvement; every
 * evaluated candidate enters a FIFO tabu set. After stall_threshold
 * consecutive stalls the grid refines (up to max_refinements), then
 * further stalling restarts from a fresh random candidate. Terminates on
 * the first negative cost or when the budget is spent. Deterministic for
 * a fixed seed. */
FalsificationResult falsify(const Formula &f, const ModelSpec &m,
                            const Grid &g, const SearchConfig &cfg);

/* Best-effort bisection mining of a monotone template parameter: lo is
 * treated as falsifiable, hi as unfalsified; each round falsifies the
 * midpoint instantiation with a full budget and narrows the bracket.
 * Returns the final hi — the tightest value the search failed to falsify
 * (not a proof). */
double mine_parameter(const TemplateInstance &t,
                      const std::string &free_parameter, double lo, double hi,
                      const ModelSpec &m, const Grid &g,
                      const SearchConfig &cfg, unsigned iterations);

std::string result_to_json(const FalsificationResult &r,
                           const SearchConfig &cfg);

} // namespace speclint
