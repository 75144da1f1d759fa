#pragma once

#include <vector>

#include "speclint/formula.hpp"
#include "speclint/trace.hpp"

namespace speclint {

/* Robustness of "true": a large finite sentinel instead of an infinity so
 * search bookkeeping keeps total comparisons. Negation stays exact:
 * rho(!true) == -kRobustnessTop. */
inline constexpr double kRobustnessTop = 1e30;

struct Adequacy {
  bool ok;
  Rational missing; // duration the trace falls short, when !ok
};

/* ok iff the trace covers [t0, t0 + horizon(f)]. */
Adequacy check_adequacy(const Formula &f, const Trace &tr, const Rational &t0);

/* Quantitative satisfaction at sample instant t0, pointwise over sample
 * instants (no interpolation). Thresholds map to signed margins, the
 * connectives to min/max, temporal operators to min/max over the samples
 * inside their closed window. Throws TraceError when t0 is not a sample,
 * a referenced channel is missing, or a temporal window contains no
 * sample. */
double robustness(const Formula &f, const Trace &tr, const Rational &t0);

/* Boolean satisfaction under the same recursion; strict comparators stay
 * strict, propositions are true at values >= 0.5. */
bool eval_bool(const Formula &f, const Trace &tr, const Rational &t0);

struct VacuityFlag {
  Path path;
  Formula antecedent;
  bool vacuous;
};

/* System-dependent vacuity: one flag per implication occurrence, vacuous
 * iff the trace satisfies the antecedent-failure mutation at time 0. */
std::vector<VacuityFlag> signal_vacuity(const Formula &f, const Trace &tr);

} // namespace speclint
