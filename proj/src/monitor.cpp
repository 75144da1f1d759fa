#include "speclint/monitor.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "speclint/errors.hpp"

namespace speclint {

Adequacy check_adequacy(const Formula &f, const Trace &tr,
                        const Rational &t0) {
  tr.validate();
  Rational needed = t0 + horizon(f);
  const Rational &last = tr.times.back();
  if (last < needed) {
    return {false, needed - last};
  }
  return {true, Rational(0)};
}

namespace {

/* Pointwise evaluator shared by the Boolean and quantitative semantics.
 * Memoizes per (node, sample index); the table lives only for one call. */
template <typename Value, typename Ops> class Evaluator {
public:
  Evaluator(const Trace &tr, Ops ops) : tr_(tr), ops_(ops) {}

  Value eval(const Formula &f, std::size_t i) {
    auto key = std::make_pair(f.id(), i);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      return it->second;
    }
    Value v = compute(f, i);
    memo_.emplace(key, v);
    return v;
  }

private:
  /* Sample indices j with t_i + a <= t_j <= t_i + b; empty windows are a
   * sampling error, surfaced to the caller. */
  std::pair<std::size_t, std::size_t> window_indices(const Formula &f,
                                                     std::size_t i) const {
    const TimeInterval &w = f.window();
    Rational lo = tr_.times[i] + w.lower;
    Rational hi = tr_.times[i] + w.upper;
    std::size_t first = tr_.times.size();
    for (std::size_t j = i; j < tr_.times.size(); ++j) {
      if (tr_.times[j] >= lo) {
        first = j;
        break;
      }
    }
    std::size_t last = first;
    while (last < tr_.times.size() && tr_.times[last] <= hi) {
      ++last;
    }
    if (first >= last) {
      throw TraceError("no sample falls inside window " + w.str() +
                       " anchored at t=" + tr_.times[i].str() +
                       "; the trace is under-sampled");
    }
    return {first, last};
  }

  Value compute(const Formula &f, std::size_t i) {
    switch (f.kind()) {
    case NodeKind::True:
      return ops_.top();
    case NodeKind::False:
      return ops_.neg(ops_.top());
    case NodeKind::Atom:
      return ops_.atom(f.atom_data(), tr_.channel(f.atom_data().channel)[i]);
    case NodeKind::Not:
      return ops_.neg(eval(f.child(0), i));
    case NodeKind::And: {
      Value v = eval(f.child(0), i);
      for (std::size_t c = 1; c < f.arity(); ++c) {
        v = ops_.meet(v, eval(f.child(c), i));
      }
      return v;
    }
    case NodeKind::Or: {
      Value v = eval(f.child(0), i);
      for (std::size_t c = 1; c < f.arity(); ++c) {
        v = ops_.join(v, eval(f.child(c), i));
      }
      return v;
    }
    case NodeKind::Implies:
      return ops_.join(ops_.neg(eval(f.child(0), i)), eval(f.child(1), i));
    case NodeKind::Always: {
      auto [first, last] = window_indices(f, i);
      Value v = eval(f.child(0), first);
      for (std::size_t j = first + 1; j < last; ++j) {
        v = ops_.meet(v, eval(f.child(0), j));
      }
      return v;
    }
    case NodeKind::Eventually: {
      auto [first, last] = window_indices(f, i);
      Value v = eval(f.child(0), first);
      for (std::size_t j = first + 1; j < last; ++j) {
        v = ops_.join(v, eval(f.child(0), j));
      }
      return v;
    }
    case NodeKind::Until: {
      auto [first, last] = window_indices(f, i);
      Value best = ops_.neg(ops_.top());
      for (std::size_t j = first; j < last; ++j) {
        // Inner range [t_i, t_j) may be empty; emptiness is the identity
        // of the min.
        Value v = eval(f.child(1), j);
        for (std::size_t k = i; k < j; ++k) {
          v = ops_.meet(v, eval(f.child(0), k));
        }
        best = ops_.join(best, v);
      }
      return best;
    }
    }
    throw Error("unreachable formula kind");
  }

  const Trace &tr_;
  Ops ops_;
  std::map<std::pair<const void *, std::size_t>, Value> memo_;
};

struct RobustnessOps {
  double top() const { return kRobustnessTop; }
  double neg(double v) const { return -v; }
  double meet(double a, double b) const { return std::min(a, b); }
  double join(double a, double b) const { return std::max(a, b); }
  double atom(const Atom &a, double value) const {
    if (a.is_proposition) {
      return value - 0.5;
    }
    double c = a.bound.to_double();
    switch (a.cmp) {
    case Comparator::Gt:
    case Comparator::Ge:
      return value - c;
    case Comparator::Lt:
    case Comparator::Le:
      return c - value;
    }
    return 0;
  }
};

struct BooleanOps {
  bool top() const { return true; }
  bool neg(bool v) const { return !v; }
  bool meet(bool a, bool b) const { return a && b; }
  bool join(bool a, bool b) const { return a || b; }
  bool atom(const Atom &a, double value) const {
    if (a.is_proposition) {
      return value >= 0.5;
    }
    double c = a.bound.to_double();
    switch (a.cmp) {
    case Comparator::Gt:
      return value > c;
    case Comparator::Ge:
      return value >= c;
    case Comparator::Lt:
      return value < c;
    case Comparator::Le:
      return value <= c;
    }
    return false;
  }
};

std::size_t start_index(const Trace &tr, const Rational &t0) {
  tr.validate();
  std::size_t i = tr.index_of(t0);
  if (i == Trace::npos) {
    throw TraceError("t0=" + t0.str() + " is not a sample instant");
  }
  return i;
}

} // namespace

double robustness(const Formula &f, const Trace &tr, const Rational &t0) {
  std::size_t i = start_index(tr, t0);
  Evaluator<double, RobustnessOps> ev(tr, RobustnessOps{});
  return ev.eval(f, i);
}

bool eval_bool(const Formula &f, const Trace &tr, const Rational &t0) {
  std::size_t i = start_index(tr, t0);
  Evaluator<bool, BooleanOps> ev(tr, BooleanOps{});
  return ev.eval(f, i);
}

std::vector<VacuityFlag> signal_vacuity(const Formula &f, const Trace &tr) {
  Adequacy adq = check_adequacy(f, tr, Rational(0));
  if (!adq.ok) {
    throw TraceError("trace too short for the formula horizon by " +
                     adq.missing.str() + " time units");
  }
  std::vector<VacuityFlag> flags;
  for (const ImplicationOccurrence &occ : implication_occurrences(f)) {
    Formula mutation = antecedent_failure_mutation(f, occ.path);
    Adequacy madq = check_adequacy(mutation, tr, Rational(0));
    if (!madq.ok) {
      throw TraceError("trace too short to decide vacuity of antecedent at " +
                       path_str(occ.path) + "; missing " + madq.missing.str() +
                       " time units");
    }
    bool vac = eval_bool(mutation, tr, Rational(0));
    flags.push_back({occ.path, occ.antecedent, vac});
  }
  return flags;
}

} // namespace speclint
