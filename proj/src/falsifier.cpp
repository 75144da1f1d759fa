#include "speclint/falsifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "speclint/errors.hpp"
#include "speclint/monitor.hpp"

namespace speclint {

void Grid::validate() const {
  if (channels.empty()) {
    throw Error("grid needs at least one input channel");
  }
  for (const auto &[name, ch] : channels) {
    if (ch.control_times.empty()) {
      throw Error("grid channel '" + name + "' needs at least one control time");
    }
    if (!ch.control_times.front().is_zero()) {
      throw Error("grid channel '" + name + "' must start at time 0");
    }
    for (std::size_t i = 1; i < ch.control_times.size(); ++i) {
      if (!(ch.control_times[i - 1] < ch.control_times[i])) {
        throw Error("grid channel '" + name +
                    "' control times must be strictly increasing");
      }
    }
    if (ch.levels.size() < 2) {
      throw Error("grid channel '" + name + "' needs at least two value levels");
    }
    for (std::size_t i = 1; i < ch.levels.size(); ++i) {
      if (!(ch.levels[i - 1] < ch.levels[i])) {
        throw Error("grid channel '" + name +
                    "' value levels must be strictly increasing");
      }
    }
  }
}

namespace {

Rational rational_from_json(const nlohmann::json &j, const char *what) {
  if (j.is_string()) {
    return Rational::parse(j.get<std::string>());
  }
  if (j.is_number()) {
    return Rational::from_double(j.get<double>());
  }
  throw Error(std::string(what) + " must be a number or rational string");
}

} // namespace

Grid grid_from_json(const std::string &json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception &e) {
    throw Error("malformed grid JSON: " + std::string(e.what()));
  }
  if (!j.is_object() || !j.contains("channels") || !j["channels"].is_object()) {
    throw Error("grid JSON needs a 'channels' object");
  }
  Grid g;
  for (auto it = j["channels"].begin(); it != j["channels"].end(); ++it) {
    const nlohmann::json &jc = it.value();
    if (!jc.is_object() || !jc.contains("times") || !jc.contains("levels")) {
      throw Error("grid channel '" + it.key() + "' needs times and levels");
    }
    GridChannel ch;
    for (const auto &jt : jc["times"]) {
      ch.control_times.push_back(rational_from_json(jt, "control time"));
    }
    for (const auto &jl : jc["levels"]) {
      if (!jl.is_number()) {
        throw Error("grid levels must be numbers");
      }
      ch.levels.push_back(jl.get<double>());
    }
    std::string interp = jc.value("interp", "hold");
    if (interp == "hold") {
      ch.interp = Interp::Hold;
    } else if (interp == "linear") {
      ch.interp = Interp::Linear;
    } else {
      throw Error("grid channel '" + it.key() + "' has unknown interp '" +
                  interp + "'");
    }
    g.channels.emplace(it.key(), std::move(ch));
  }
  g.validate();
  return g;
}

Grid grid_from_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open grid file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return grid_from_json(buf.str());
}

void validate_candidate(const Candidate &c, const Grid &g) {
  if (c.indices.size() != g.channels.size()) {
    throw Error("candidate channel set does not match the grid");
  }
  for (const auto &[name, ch] : g.channels) {
    auto it = c.indices.find(name);
    if (it == c.indices.end()) {
      throw Error("candidate is missing channel '" + name + "'");
    }
    if (it->second.size() != ch.control_times.size()) {
      throw Error("candidate for '" + name + "' has " +
                  std::to_string(it->second.size()) + " indices for " +
                  std::to_string(ch.control_times.size()) + " control times");
    }
    for (std::size_t idx : it->second) {
      if (idx >= ch.levels.size()) {
        throw Error("candidate index out of range for channel '" + name + "'");
      }
    }
  }
}

InputSignal realize(const Candidate &c, const Grid &g) {
  validate_candidate(c, g);
  InputSignal sig;
  for (const auto &[name, ch] : g.channels) {
    InputChannel ic;
    ic.interp = ch.interp;
    const std::vector<std::size_t> &idx = c.indices.at(name);
    for (std::size_t i = 0; i < ch.control_times.size(); ++i) {
      ic.points.emplace_back(ch.control_times[i], ch.levels[idx[i]]);
    }
    sig.channels.emplace(name, std::move(ic));
  }
  return sig;
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void *data, std::size_t len) {
  const auto *bytes = static_cast<const unsigned char *>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t absorb_i64(std::uint64_t h, std::int64_t v) {
  return fnv1a(h, &v, sizeof(v));
}

std::uint64_t absorb_double(std::uint64_t h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  return fnv1a(h, &bits, sizeof(bits));
}

/* Control points that interpolation makes redundant are dropped so the
 * hash names the realized signal, not one particular grid encoding. */
std::vector<std::pair<Rational, double>>
canonical_points(const InputChannel &ch) {
  std::vector<std::pair<Rational, double>> kept;
  for (const auto &pt : ch.points) {
    if (ch.interp == Interp::Hold) {
      if (!kept.empty() && kept.back().second == pt.second) {
        continue;
      }
    } else if (kept.size() >= 2) {
      const auto &a = kept[kept.size() - 2];
      const auto &b = kept.back();
      double span = (pt.first - a.first).to_double();
      double at_b = a.second + (b.first - a.first).to_double() / span *
                                   (pt.second - a.second);
      if (at_b == b.second) {
        kept.pop_back();
      }
    }
    kept.push_back(pt);
  }
  return kept;
}

} // namespace

std::uint64_t candidate_hash(const Candidate &c, const Grid &g) {
  InputSignal sig = realize(c, g);
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto &[name, ch] : sig.channels) {
    h = fnv1a(h, name.data(), name.size());
    h = fnv1a(h, ":", 1);
    for (const auto &[t, v] : canonical_points(ch)) {
      h = absorb_i64(h, t.num());
      h = absorb_i64(h, t.den());
      h = absorb_double(h, v);
    }
    h = fnv1a(h, ";", 1);
  }
  return h;
}

double cost(const Formula &f, const ModelSpec &m, const Candidate &c,
            const Grid &g) {
  InputSignal sig = realize(c, g);
  Rational sim_horizon = horizon(f);
  for (const auto &[_, ch] : g.channels) {
    sim_horizon = std::max(sim_horizon, ch.control_times.back());
  }
  if (sim_horizon.is_zero()) {
    sim_horizon = m.output_sample_period;
  }
  Trace tr = simulate(m, sig, sim_horizon);
  Adequacy adq = check_adequacy(f, tr, Rational(0));
  if (!adq.ok) {
    throw TraceError("simulated trace misses the formula horizon by " +
                     adq.missing.str() + " time units");
  }
  return robustness(f, tr, Rational(0));
}

std::vector<Candidate> neighbors(const Candidate &c, const Grid &g) {
  validate_candidate(c, g);
  std::vector<Candidate> out;
  for (const auto &[name, ch] : g.channels) {
    const std::vector<std::size_t> &idx = c.indices.at(name);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] > 0) {
        Candidate n = c;
        n.indices[name][i] = idx[i] - 1;
        out.push_back(std::move(n));
      }
      if (idx[i] + 1 < ch.levels.size()) {
        Candidate n = c;
        n.indices[name][i] = idx[i] + 1;
        out.push_back(std::move(n));
      }
    }
  }
  return out;
}

Grid refine(const Grid &g) {
  Grid out;
  for (const auto &[name, ch] : g.channels) {
    GridChannel r;
    r.interp = ch.interp;
    for (std::size_t i = 0; i < ch.control_times.size(); ++i) {
      if (i > 0) {
        r.control_times.push_back(
            (ch.control_times[i - 1] + ch.control_times[i]) / Rational(2));
      }
      r.control_times.push_back(ch.control_times[i]);
    }
    for (std::size_t i = 0; i < ch.levels.size(); ++i) {
      if (i > 0) {
        r.levels.push_back((ch.levels[i - 1] + ch.levels[i]) / 2.0);
      }
      r.levels.push_back(ch.levels[i]);
    }
    out.channels.emplace(name, std::move(r));
  }
  return out;
}

Candidate embed_after_refine(const Candidate &c, const Grid &g) {
  validate_candidate(c, g);
  Candidate out;
  for (const auto &[name, ch] : g.channels) {
    const std::vector<std::size_t> &idx = c.indices.at(name);
    std::vector<std::size_t> embedded;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i > 0) {
        // Index at the inserted midpoint time: hold keeps the left value
        // exactly; linear takes the index midpoint, which is the value
        // midpoint for uniformly spaced levels.
        std::size_t left = 2 * idx[i - 1];
        std::size_t right = 2 * idx[i];
        embedded.push_back(ch.interp == Interp::Hold ? left
                                                     : (left + right) / 2);
      }
      embedded.push_back(2 * idx[i]);
    }
    out.indices.emplace(name, std::move(embedded));
  }
  return out;
}

namespace {

/* Bounded FIFO of candidate hashes. */
class TabuSet {
public:
  explicit TabuSet(std::size_t capacity) : capacity_(capacity) {}

  bool contains(std::uint64_t h) const { return set_.count(h) > 0; }

  void insert(std::uint64_t h) {
    if (set_.insert(h).second) {
      fifo_.push_back(h);
      if (fifo_.size() > capacity_) {
        set_.erase(fifo_.front());
        fifo_.pop_front();
      }
    }
  }

private:
  std::size_t capacity_;
  std::deque<std::uint64_t> fifo_;
  std::unordered_set<std::uint64_t> set_;
};

/* All randomness flows through one mt19937_64 seeded from the config, so
 * runs are reproducible. Modulo mapping is deliberate: bias is
 * irrelevant at these ranges and the mapping is easy to restate. */
std::size_t bounded(std::mt19937_64 &rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

Candidate random_candidate(std::mt19937_64 &rng, const Grid &g) {
  Candidate c;
  for (const auto &[name, ch] : g.channels) {
    std::vector<std::size_t> idx(ch.control_times.size());
    for (std::size_t &i : idx) {
      i = bounded(rng, ch.levels.size());
    }
    c.indices.emplace(name, std::move(idx));
  }
  return c;
}

class Search {
public:
  Search(const Formula &f, const ModelSpec &m, Grid grid,
         const SearchConfig &cfg)
      : f_(f), m_(m), grid_(std::move(grid)), cfg_(cfg), rng_(cfg.seed),
        tabu_(cfg.tabu_capacity) {}

  FalsificationResult run() {
    Candidate current = random_candidate(rng_, grid_);
    double cur_cost = evaluate_batch({current}).front();
    std::size_t stalls = 0;

    while (!done()) {
      std::vector<Candidate> sampled = sample_neighbors(current);
      bool improved = false;
      if (!sampled.empty()) {
        std::vector<double> costs = evaluate_batch(sampled);
        if (done()) {
          break;
        }
        std::size_t best_i = 0;
        for (std::size_t i = 1; i < costs.size(); ++i) {
          if (costs[i] < costs[best_i]) {
            best_i = i;
          }
        }
        if (costs[best_i] < cur_cost) { // strict improvement; ties stall
          current = sampled[best_i];
          cur_cost = costs[best_i];
          improved = true;
        }
      }
      if (improved) {
        stalls = 0;
        continue;
      }
      ++stalls;
      if (stalls < cfg_.stall_threshold) {
        continue;
      }
      stalls = 0;
      if (refinements_ < cfg_.max_refinements) {
        current = embed_after_refine(current, grid_);
        best_candidate_ = embed_after_refine(best_candidate_, grid_);
        grid_ = refine(grid_);
        ++refinements_;
        continue;
      }
      // Random restart; give up when the reachable space looks exhausted.
      bool restarted = false;
      for (int attempt = 0; attempt < 64 && !done(); ++attempt) {
        Candidate fresh = random_candidate(rng_, grid_);
        if (tabu_.contains(candidate_hash(fresh, grid_))) {
          continue;
        }
        cur_cost = evaluate_batch({fresh}).front();
        current = fresh;
        restarted = true;
        break;
      }
      if (!restarted) {
        break;
      }
    }

    FalsificationResult res;
    res.status = falsified_ ? SearchStatus::Falsified
                            : SearchStatus::BudgetExhausted;
    res.best_candidate = best_candidate_;
    res.final_grid = grid_;
    res.best_robustness = best_cost_;
    res.simulations_used = sims_;
    res.history = std::move(history_);
    return res;
  }

private:
  bool done() const { return falsified_ || sims_ >= cfg_.budget; }

  /* Evaluates candidates (possibly in parallel), then merges results in
   * the given deterministic order. The batch is truncated to the
   * remaining budget by the caller via sample_neighbors. */
  std::vector<double> evaluate_batch(std::vector<Candidate> batch) {
    std::uint64_t room = cfg_.budget - sims_;
    if (batch.size() > room) {
      batch.resize(static_cast<std::size_t>(room));
    }
    std::vector<double> costs(batch.size());
    if (cfg_.jobs > 1 && batch.size() > 1) {
      std::vector<std::future<double>> futures;
      futures.reserve(batch.size());
      for (const Candidate &c : batch) {
        futures.push_back(std::async(std::launch::async, [&] {
          return cost(f_, m_, c, grid_);
        }));
      }
      for (std::size_t i = 0; i < futures.size(); ++i) {
        costs[i] = futures[i].get();
      }
    } else {
      for (std::size_t i = 0; i < batch.size(); ++i) {
        costs[i] = cost(f_, m_, batch[i], grid_);
      }
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      std::uint64_t h = candidate_hash(batch[i], grid_);
      ++sims_;
      history_.push_back({h, costs[i]});
      tabu_.insert(h);
      if (costs[i] < best_cost_) {
        best_cost_ = costs[i];
        best_candidate_ = batch[i];
      }
      if (costs[i] < 0.0) {
        falsified_ = true;
      }
    }
    return costs;
  }

  /* Up to neighbor_sample_size non-tabu neighbors, chosen uniformly
   * without replacement, evaluated in canonical neighbor order. */
  std::vector<Candidate> sample_neighbors(const Candidate &current) {
    std::vector<Candidate> all = neighbors(current, grid_);
    std::vector<std::size_t> avail;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!tabu_.contains(candidate_hash(all[i], grid_))) {
        avail.push_back(i);
      }
    }
    std::size_t want = std::min(cfg_.neighbor_sample_size, avail.size());
    for (std::size_t i = 0; i < want; ++i) { // partial Fisher-Yates
      std::size_t j = i + bounded(rng_, avail.size() - i);
      std::swap(avail[i], avail[j]);
    }
    avail.resize(want);
    std::sort(avail.begin(), avail.end());
    std::vector<Candidate> out;
    out.reserve(want);
    for (std::size_t i : avail) {
      out.push_back(std::move(all[i]));
    }
    return out;
  }

  const Formula &f_;
  const ModelSpec &m_;
  Grid grid_;
  SearchConfig cfg_;
  std::mt19937_64 rng_;
  TabuSet tabu_;
  std::vector<HistoryEntry> history_;
  Candidate best_candidate_;
  double best_cost_ = std::numeric_limits<double>::infinity();
  std::uint64_t sims_ = 0;
  std::size_t refinements_ = 0;
  bool falsified_ = false;
};

} // namespace

FalsificationResult falsify(const Formula &f, const ModelSpec &m,
                            const Grid &g, const SearchConfig &cfg) {
  if (cfg.budget == 0) {
    throw Error("falsification budget must be positive");
  }
  if (cfg.neighbor_sample_size == 0 || cfg.stall_threshold == 0 ||
      cfg.tabu_capacity == 0) {
    throw Error("neighbor sample size, stall threshold, and tabu capacity "
                "must be positive");
  }
  g.validate();
  return Search(f, m, g, cfg).run();
}

double mine_parameter(const TemplateInstance &t,
                      const std::string &free_parameter, double lo, double hi,
                      const ModelSpec &m, const Grid &g,
                      const SearchConfig &cfg, unsigned iterations) {
  if (!parameter_minable(t.template_id, free_parameter)) {
    throw Error("parameter '" + free_parameter + "' of template '" +
                t.template_id + "' is not monotone-minable");
  }
  if (!(lo < hi)) {
    throw Error("mining needs lo < hi");
  }
  double low = lo, high = hi;
  for (unsigned round = 0; round < iterations; ++round) {
    double mid = 0.5 * (low + high);
    TemplateInstance inst = t;
    inst.parameters[free_parameter] = Rational::from_double(mid);
    Formula f = instantiate(inst);
    SearchConfig round_cfg = cfg;
    round_cfg.seed = cfg.seed + round; // decorrelate rounds, reproducibly
    FalsificationResult res = falsify(f, m, g, round_cfg);
    if (res.status == SearchStatus::Falsified) {
      low = mid;
    } else {
      high = mid;
    }
  }
  return high;
}

std::string result_to_json(const FalsificationResult &r,
                           const SearchConfig &cfg) {
  nlohmann::json j;
  j["status"] = r.status == SearchStatus::Falsified ? "falsified"
                                                    : "budget_exhausted";
  j["best_robustness"] = r.best_robustness;
  j["simulations_used"] = r.simulations_used;
  j["budget"] = cfg.budget;
  j["seed"] = cfg.seed;
  nlohmann::json jc = nlohmann::json::object();
  InputSignal sig = realize(r.best_candidate, r.final_grid);
  for (const auto &[name, ch] : sig.channels) {
    nlohmann::json jch;
    jch["times"] = nlohmann::json::array();
    jch["values"] = nlohmann::json::array();
    for (const auto &[t, v] : ch.points) {
      jch["times"].push_back(t.str());
      jch["values"].push_back(v);
    }
    jch["interp"] = ch.interp == Interp::Hold ? "hold" : "linear";
    jc[name] = std::move(jch);
  }
  j["best_candidate"] = std::move(jc);
  nlohmann::json jh = nlohmann::json::array();
  char hex[19];
  for (const HistoryEntry &e : r.history) {
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(e.candidate_hash));
    jh.push_back({{"candidate", std::string(hex)},
                  {"robustness", e.robustness}});
  }
  j["history"] = std::move(jh);
  return j.dump(2) + "\n";
}

} // namespace speclint
