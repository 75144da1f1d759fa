#include "speclint/satcheck.hpp"

#include <algorithm>
#include <cassert>

#include "speclint/errors.hpp"

namespace speclint {

namespace {

void collect_endpoints(const Formula &f, std::vector<Rational> &out) {
  switch (f.kind()) {
  case NodeKind::Always:
  case NodeKind::Eventually:
  case NodeKind::Until:
    out.push_back(f.window().lower);
    out.push_back(f.window().upper);
    break;
  default:
    break;
  }
  for (const Formula &c : f.children()) {
    collect_endpoints(c, out);
  }
}

} // namespace

Rational choose_delta(const Formula &f, const Rational &minimum) {
  std::vector<Rational> endpoints;
  collect_endpoints(f, endpoints);
  Rational g(0);
  for (const Rational &e : endpoints) {
    g = Rational::gcd(g, e);
  }
  if (g.is_zero()) {
    return Rational(1);
  }
  if (!minimum.is_zero() && g < minimum) {
    // The gcd is the largest step dividing every endpoint; a coarser
    // minimum cannot be honored without breaking divisibility.
    throw Error("interval endpoints need resolution " + g.str() +
                ", finer than the configured minimum " + minimum.str());
  }
  return g;
}

DiscretizationConfig default_config(const Formula &f) {
  return {choose_delta(f), horizon(f)};
}

Formula negation_normalized(const Formula &f) {
  switch (f.kind()) {
  case NodeKind::True:
    return Formula::boolean(false);
  case NodeKind::False:
    return Formula::boolean(true);
  case NodeKind::Atom: {
    const Atom &a = f.atom_data();
    if (a.is_proposition) {
      return Formula::negation(f);
    }
    Comparator flipped;
    switch (a.cmp) {
    case Comparator::Gt:
      flipped = Comparator::Le;
      break;
    case Comparator::Ge:
      flipped = Comparator::Lt;
      break;
    case Comparator::Lt:
      flipped = Comparator::Ge;
      break;
    case Comparator::Le:
      flipped = Comparator::Gt;
      break;
    default:
      throw Error("unreachable comparator");
    }
    return Formula::threshold(a.channel, flipped, a.bound);
  }
  case NodeKind::Not:
    return f.child(0);
  case NodeKind::And: {
    std::vector<Formula> kids;
    for (const Formula &c : f.children()) {
      kids.push_back(negation_normalized(c));
    }
    return Formula::disjunction(std::move(kids));
  }
  case NodeKind::Or: {
    std::vector<Formula> kids;
    for (const Formula &c : f.children()) {
      kids.push_back(negation_normalized(c));
    }
    return Formula::conjunction(std::move(kids));
  }
  case NodeKind::Implies:
    return Formula::conjunction(
        {f.child(0), negation_normalized(f.child(1))});
  case NodeKind::Always:
    return Formula::eventually(f.window(), negation_normalized(f.child(0)));
  case NodeKind::Eventually:
    return Formula::always(f.window(), negation_normalized(f.child(0)));
  case NodeKind::Until:
    throw FragmentError(
        "Until is outside the fragment the bounded engine can dualize");
  }
  throw Error("unreachable formula kind");
}

namespace {

/* Weaker rungs sort first: (c, >=) before (c, >), lower bounds before
 * higher ones. A true rung implies every weaker rung. */
bool rung_less(const LadderRung &a, const LadderRung &b) {
  if (a.bound != b.bound) {
    return a.bound < b.bound;
  }
  return !a.strict && b.strict;
}

struct RungLiteral {
  std::string channel;
  LadderRung rung;
  bool negated; // the atom is the negation of the rung assertion
};

RungLiteral normalize_atom(const Atom &a) {
  if (a.is_proposition) {
    return {a.channel, {Rational(1, 2), false}, false};
  }
  switch (a.cmp) {
  case Comparator::Gt:
    return {a.channel, {a.bound, true}, false};
  case Comparator::Ge:
    return {a.channel, {a.bound, false}, false};
  case Comparator::Lt:
    return {a.channel, {a.bound, false}, true}; // !(v >= c)
  case Comparator::Le:
    return {a.channel, {a.bound, true}, true}; // !(v > c)
  }
  throw Error("unreachable comparator");
}

void collect_ladders(const Formula &f,
                     std::map<std::string, ChannelLadder> &channels) {
  if (f.kind() == NodeKind::Atom) {
    const Atom &a = f.atom_data();
    RungLiteral rl = normalize_atom(a);
    ChannelLadder &lad = channels[rl.channel];
    if (!a.is_proposition) {
      lad.proposition_only = false;
    }
    auto same = [&](const LadderRung &r) {
      return r.bound == rl.rung.bound && r.strict == rl.rung.strict;
    };
    if (std::find_if(lad.rungs.begin(), lad.rungs.end(), same) ==
        lad.rungs.end()) {
      lad.rungs.push_back(rl.rung);
    }
  }
  for (const Formula &c : f.children()) {
    collect_ladders(c, channels);
  }
}

std::int64_t exact_steps(const Rational &value, const Rational &delta,
                         const char *what) {
  if (!value.divisible_by(delta)) {
    throw Error(std::string(what) + " " + value.str() +
                " is not an integer multiple of delta " + delta.str());
  }
  Rational q = value / delta;
  return q.num();
}

class Unroller {
public:
  Unroller(const Formula &f, const DiscretizationConfig &cfg) : root_(f) {
    if (fragment_class(f) != FragmentClass::BoxDiamond) {
      throw FragmentError("the bounded decision procedure covers only the "
                          "eventually/always fragment (no Until)");
    }
    if (cfg.delta.num() <= 0) {
      throw Error("delta must be positive");
    }
    if (cfg.horizon < horizon(f)) {
      throw Error("horizon " + cfg.horizon.str() +
                  " is below the formula horizon " + horizon(f).str());
    }
    enc_.cfg = cfg;
    enc_.steps = static_cast<std::size_t>(
                     exact_steps(cfg.horizon, cfg.delta, "horizon")) +
                 1;
    collect_ladders(f, enc_.channels);
    for (auto &[name, lad] : enc_.channels) {
      std::sort(lad.rungs.begin(), lad.rungs.end(), rung_less);
    }
  }

  UnrolledEncoding run() {
    enc_.root_literal = encode(root_, 0);
    enc_.clauses.push_back({enc_.root_literal});
    return std::move(enc_);
  }

private:
  int fresh_var() { return static_cast<int>(enc_.num_vars++); }

  static int pos(int var) { return var + 1; }

  /* Variables for every rung of a channel at one step, created together
   * with the chain clauses stronger -> weaker. */
  const std::vector<int> &ladder_vars(const std::string &channel,
                                      std::size_t step) {
    ChannelLadder &lad = enc_.channels.at(channel);
    auto it = lad.step_vars.find(step);
    if (it != lad.step_vars.end()) {
      return it->second;
    }
    std::vector<int> vars;
    vars.reserve(lad.rungs.size());
    for (std::size_t r = 0; r < lad.rungs.size(); ++r) {
      vars.push_back(fresh_var());
    }
    for (std::size_t r = 1; r < vars.size(); ++r) {
      enc_.clauses.push_back({-pos(vars[r]), pos(vars[r - 1])});
    }
    return lad.step_vars.emplace(step, std::move(vars)).first->second;
  }

  int atom_literal(const Atom &a, std::size_t step) {
    RungLiteral rl = normalize_atom(a);
    const ChannelLadder &lad = enc_.channels.at(rl.channel);
    const std::vector<int> &vars = ladder_vars(rl.channel, step);
    for (std::size_t r = 0; r < lad.rungs.size(); ++r) {
      if (lad.rungs[r].bound == rl.rung.bound &&
          lad.rungs[r].strict == rl.rung.strict) {
        int lit = pos(vars[r]);
        return rl.negated ? -lit : lit;
      }
    }
    throw Error("rung lookup failed for channel '" + rl.channel + "'");
  }

  std::pair<std::size_t, std::size_t> window_steps(const Formula &f,
                                                   std::size_t step) {
    const TimeInterval &w = f.window();
    std::int64_t lo = exact_steps(w.lower, enc_.cfg.delta, "interval bound");
    std::int64_t hi = exact_steps(w.upper, enc_.cfg.delta, "interval bound");
    std::size_t first = step + static_cast<std::size_t>(lo);
    std::size_t last = step + static_cast<std::size_t>(hi);
    assert(last < enc_.steps && "window exceeds the unrolling depth");
    return {first, last};
  }

  /* Literal for subformula f evaluated at `step`; each connective
   * occurrence gets one auxiliary variable per step, defined once. */
  int encode(const Formula &f, std::size_t step) {
    auto key = std::make_pair(f.id(), step);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      return it->second;
    }
    int lit = build(f, step);
    memo_.emplace(key, lit);
    return lit;
  }

  int define_and(const std::vector<int> &lits) {
    int x = pos(fresh_var());
    std::vector<int> closing{x};
    for (int l : lits) {
      enc_.clauses.push_back({-x, l});
      closing.push_back(-l);
    }
    enc_.clauses.push_back(std::move(closing));
    return x;
  }

  int define_or(const std::vector<int> &lits) {
    int x = pos(fresh_var());
    std::vector<int> opening{-x};
    for (int l : lits) {
      enc_.clauses.push_back({x, -l});
      opening.push_back(l);
    }
    enc_.clauses.push_back(std::move(opening));
    return x;
  }

  int build(const Formula &f, std::size_t step) {
    switch (f.kind()) {
    case NodeKind::True: {
      int x = pos(fresh_var());
      enc_.clauses.push_back({x});
      return x;
    }
    case NodeKind::False: {
      int x = pos(fresh_var());
      enc_.clauses.push_back({-x});
      return x;
    }
    case NodeKind::Atom:
      return atom_literal(f.atom_data(), step);
    case NodeKind::Not: {
      int c = encode(f.child(0), step);
      int x = pos(fresh_var());
      enc_.clauses.push_back({-x, -c});
      enc_.clauses.push_back({x, c});
      return x;
    }
    case NodeKind::And: {
      std::vector<int> lits;
      for (const Formula &c : f.children()) {
        lits.push_back(encode(c, step));
      }
      return define_and(lits);
    }
    case NodeKind::Or: {
      std::vector<int> lits;
      for (const Formula &c : f.children()) {
        lits.push_back(encode(c, step));
      }
      return define_or(lits);
    }
    case NodeKind::Implies: {
      std::vector<int> lits{-encode(f.child(0), step),
                            encode(f.child(1), step)};
      return define_or(lits);
    }
    case NodeKind::Always: {
      auto [first, last] = window_steps(f, step);
      std::vector<int> lits;
      for (std::size_t j = first; j <= last; ++j) {
        lits.push_back(encode(f.child(0), j));
      }
      return define_and(lits);
    }
    case NodeKind::Eventually: {
      auto [first, last] = window_steps(f, step);
      std::vector<int> lits;
      for (std::size_t j = first; j <= last; ++j) {
        lits.push_back(encode(f.child(0), j));
      }
      return define_or(lits);
    }
    case NodeKind::Until:
      throw FragmentError("Until cannot be unrolled by the bounded engine");
    }
    throw Error("unreachable formula kind");
  }

  Formula root_;
  UnrolledEncoding enc_;
  std::map<std::pair<const void *, std::size_t>, int> memo_;
};

} // namespace

UnrolledEncoding unroll(const Formula &f, const DiscretizationConfig &cfg) {
  return Unroller(f, cfg).run();
}

namespace {

enum : std::int8_t { kUnassigned = -1, kFalse = 0, kTrue = 1 };

struct TrailEntry {
  int var;
  bool is_decision;
  bool flipped;
};

class Dpll {
public:
  explicit Dpll(const UnrolledEncoding &enc) : enc_(enc) {
    values_.assign(enc.num_vars, kUnassigned);
  }

  SolveOutcome run() {
    SolveOutcome out;
    while (true) {
      if (!propagate()) {
        ++stats_.conflicts;
        if (!backtrack()) {
          out.satisfiable = false;
          out.stats = stats_;
          return out;
        }
        continue;
      }
      int v = first_unassigned();
      if (v < 0) {
        out.satisfiable = true;
        out.assignment.values.resize(enc_.num_vars);
        for (std::size_t i = 0; i < enc_.num_vars; ++i) {
          out.assignment.values[i] = values_[i] == kTrue;
        }
        out.stats = stats_;
        return out;
      }
      ++stats_.decisions;
      assign(v, false, /*is_decision=*/true);
    }
  }

private:
  std::int8_t literal_value(int lit) const {
    std::int8_t v = values_[std::abs(lit) - 1];
    if (v == kUnassigned) {
      return kUnassigned;
    }
    bool truth = (v == kTrue) == (lit > 0);
    return truth ? kTrue : kFalse;
  }

  void assign(int var, bool value, bool is_decision, bool flipped = false) {
    values_[var] = value ? kTrue : kFalse;
    trail_.push_back({var, is_decision, flipped});
  }

  /* Fixpoint scan over all clauses. Returns false on conflict. */
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const std::vector<int> &clause : enc_.clauses) {
        int unassigned_lit = 0;
        int unassigned_count = 0;
        bool satisfied = false;
        for (int lit : clause) {
          std::int8_t v = literal_value(lit);
          if (v == kTrue) {
            satisfied = true;
            break;
          }
          if (v == kUnassigned) {
            ++unassigned_count;
            unassigned_lit = lit;
            if (unassigned_count > 1) {
              break;
            }
          }
        }
        if (satisfied) {
          continue;
        }
        if (unassigned_count == 0) {
          return false; // conflict
        }
        if (unassigned_count == 1) {
          ++stats_.propagations;
          assign(std::abs(unassigned_lit) - 1, unassigned_lit > 0,
                 /*is_decision=*/false);
          changed = true;
        }
      }
    }
    return true;
  }

  /* Chronological: unwind to the most recent decision still on its first
   * polarity and flip it. */
  bool backtrack() {
    while (!trail_.empty()) {
      TrailEntry e = trail_.back();
      trail_.pop_back();
      values_[e.var] = kUnassigned;
      if (e.is_decision && !e.flipped) {
        assign(e.var, true, /*is_decision=*/true, /*flipped=*/true);
        return true;
      }
    }
    return false;
  }

  int first_unassigned() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] == kUnassigned) {
        return static_cast<int>(i);
      }
    }
    return -1;
  }

  const UnrolledEncoding &enc_;
  std::vector<std::int8_t> values_;
  std::vector<TrailEntry> trail_;
  SolveStats stats_;
};

} // namespace

SolveOutcome solve(const UnrolledEncoding &enc) { return Dpll(enc).run(); }

Trace witness_to_trace(const UnrolledEncoding &enc, const Assignment &a) {
  Trace tr;
  tr.times.reserve(enc.steps);
  for (std::size_t k = 0; k < enc.steps; ++k) {
    tr.times.push_back(Rational(static_cast<std::int64_t>(k)) *
                       enc.cfg.delta);
  }
  for (const auto &[name, lad] : enc.channels) {
    std::vector<double> values(enc.steps, 0.0);
    for (const auto &[step, vars] : lad.step_vars) {
      // Rungs must form a true-prefix: a rung can only hold if every
      // weaker rung holds too.
      std::size_t true_count = 0;
      for (std::size_t r = 0; r < vars.size(); ++r) {
        bool truth = a.values.at(static_cast<std::size_t>(vars[r]));
        if (truth) {
          if (true_count != r) {
            throw Error("assignment violates the threshold ladder on "
                        "channel '" +
                        name + "' (encoding bug)");
          }
          ++true_count;
        }
      }
      if (lad.proposition_only) {
        values[step] = true_count > 0 ? 1.0 : 0.0;
        continue;
      }
      bool has_lower = true_count > 0;
      bool has_upper = true_count < lad.rungs.size();
      if (has_lower && has_upper) {
        double lo = lad.rungs[true_count - 1].bound.to_double();
        double hi = lad.rungs[true_count].bound.to_double();
        values[step] = (lo + hi) / 2.0;
      } else if (has_lower) {
        values[step] = lad.rungs[true_count - 1].bound.to_double() + 1.0;
      } else if (has_upper) {
        values[step] = lad.rungs[0].bound.to_double() - 1.0;
      }
    }
    tr.channels.emplace(name, std::move(values));
  }
  tr.validate();
  return tr;
}

SatResult check_satisfiable(const Formula &f,
                            const DiscretizationConfig &cfg) {
  UnrolledEncoding enc = unroll(f, cfg);
  SolveOutcome out = solve(enc);
  SatResult res;
  res.satisfiable = out.satisfiable;
  res.stats = out.stats;
  if (out.satisfiable) {
    res.witness = witness_to_trace(enc, out.assignment);
  }
  return res;
}

bool is_satisfiable(const Formula &f, const DiscretizationConfig &cfg) {
  return solve(unroll(f, cfg)).satisfiable;
}

bool is_tautology(const Formula &f, const DiscretizationConfig &cfg) {
  return !is_satisfiable(negation_normalized(f), cfg);
}

} // namespace speclint
