#pragma once

#include <map>
#include <string>
#include <vector>

#include "speclint/trace.hpp"

namespace speclint {

enum class Interp { Hold, Linear };

/* Piecewise input signal described by control points. Values beyond the
 * last control point hold. */
struct InputChannel {
  std::vector<std::pair<Rational, double>> points; // strictly increasing, from 0
  Interp interp = Interp::Hold;

  void validate(const std::string &name) const;
  double value_at(double t) const;
};

struct InputSignal {
  std::map<std::string, InputChannel> channels;
};

/* Per-channel interpolation at an exact time. */
std::map<std::string, double> interpolate(const InputSignal &sig,
                                          const Rational &t);

enum class ModelKind { BuiltinSecondOrder, BuiltinCruise, External };

/* System-under-test description.
 *
 *   builtin_secondorder: x' = y, y' = omega^2*(gain*u - x) - 2*zeta*omega*y,
 *       defaults zeta=0.2, omega=1, gain=1, x(0)=y(0)=0; output channel x.
 *   builtin_cruise:      v' = u - c1*v - c2*v^2, defaults c1=0.1, c2=0.01,
 *       v(0)=0, u clamped to [0,1]; output channel v.
 *   external:            one line-delimited JSON request/response exchange
 *       with a child process (see the wire protocol in simulate()).
 */
struct ModelSpec {
  ModelKind kind = ModelKind::BuiltinSecondOrder;
  std::map<std::string, double> parameters;
  double integrator_step = 0.01;
  Rational output_sample_period = Rational(1, 10);
  std::string external_command; // external only

  static ModelSpec by_name(const std::string &name); // "secondorder"|"cruise"
  double parameter(const std::string &name, double fallback) const;
};

/* Simulates the model under the given input over [0, horizon] with
 * classical fixed-step RK4 and returns the output trace, sampled every
 * output_sample_period plus the horizon endpoint. Deterministic:
 * identical inputs give bit-identical traces.
 *
 * External wire protocol (one line each way over stdin/stdout):
 *   request:  {"protocol":1,"horizon":H,"sample_period":P,
 *              "inputs":{"u":{"times":[...],"values":[...],
 *                             "interp":"hold"|"linear"}}}
 *   response: {"protocol":1,"times":[...],"signals":{"x":[...]}}
 * Response times must be strictly increasing from 0; anything else, extra
 * output lines, or a nonzero exit is a SimulationError. */
Trace simulate(const ModelSpec &m, const InputSignal &u,
               const Rational &horizon);

} // namespace speclint
