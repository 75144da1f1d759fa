#include "speclint/plant.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <functional>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "speclint/errors.hpp"

namespace speclint {

void InputChannel::validate(const std::string &name) const {
  if (points.empty()) {
    throw SimulationError("input channel '" + name + "' has no control points");
  }
  if (!points.front().first.is_zero()) {
    throw SimulationError("input channel '" + name +
                          "' must start at time 0, found " +
                          points.front().first.str());
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1].first < points[i].first)) {
      throw SimulationError("input channel '" + name +
                            "' control times must be strictly increasing");
    }
  }
}

double InputChannel::value_at(double t) const {
  if (t <= points.front().first.to_double()) {
    return points.front().second;
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    double ti = points[i].first.to_double();
    if (t < ti) {
      if (interp == Interp::Hold) {
        return points[i - 1].second;
      }
      double t0 = points[i - 1].first.to_double();
      double w = (t - t0) / (ti - t0);
      return points[i - 1].second + w * (points[i].second - points[i - 1].second);
    }
    if (t == ti) {
      return points[i].second;
    }
  }
  return points.back().second; // held beyond the final point
}

std::map<std::string, double> interpolate(const InputSignal &sig,
                                          const Rational &t) {
  if (t.is_negative()) {
    throw SimulationError("interpolation time must be nonnegative");
  }
  std::map<std::string, double> out;
  for (const auto &[name, ch] : sig.channels) {
    out[name] = ch.value_at(t.to_double());
  }
  return out;
}

ModelSpec ModelSpec::by_name(const std::string &name) {
  ModelSpec m;
  if (name == "secondorder") {
    m.kind = ModelKind::BuiltinSecondOrder;
    return m;
  }
  if (name == "cruise") {
    m.kind = ModelKind::BuiltinCruise;
    return m;
  }
  throw SimulationError("unknown model '" + name +
                        "' (expected secondorder or cruise)");
}

double ModelSpec::parameter(const std::string &name, double fallback) const {
  auto it = parameters.find(name);
  return it == parameters.end() ? fallback : it->second;
}

namespace {

using Deriv = std::function<void(double t, const std::vector<double> &state,
                                 std::vector<double> &dstate)>;

/* Classical RK4 over one interval split into n equal substeps. */
void rk4_advance(const Deriv &deriv, std::vector<double> &state, double t0,
                 double length, int substeps) {
  const std::size_t n = state.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  double h = length / substeps;
  for (int s = 0; s < substeps; ++s) {
    double t = t0 + s * h;
    deriv(t, state, k1);
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = state[i] + 0.5 * h * k1[i];
    }
    deriv(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = state[i] + 0.5 * h * k2[i];
    }
    deriv(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = state[i] + h * k3[i];
    }
    deriv(t + h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
}

const InputChannel &single_input(const InputSignal &u, const char *model) {
  if (u.channels.size() != 1) {
    throw SimulationError(std::string(model) +
                          " expects exactly one input channel, got " +
                          std::to_string(u.channels.size()));
  }
  const InputChannel &ch = u.channels.begin()->second;
  ch.validate(u.channels.begin()->first);
  return ch;
}

std::vector<Rational> sample_times(const Rational &period,
                                   const Rational &horizon) {
  std::vector<Rational> times;
  Rational t(0);
  std::int64_t k = 0;
  while (t <= horizon) {
    times.push_back(t);
    ++k;
    t = Rational(k) * period;
  }
  if (times.back() != horizon) {
    times.push_back(horizon);
  }
  return times;
}

Trace simulate_builtin(const ModelSpec &m, const InputSignal &u,
                       const Rational &horizon) {
  const bool second_order = m.kind == ModelKind::BuiltinSecondOrder;
  const InputChannel &input =
      single_input(u, second_order ? "builtin_secondorder" : "builtin_cruise");

  Deriv deriv;
  std::vector<double> state;
  std::string output_name;
  if (second_order) {
    double zeta = m.parameter("zeta", 0.2);
    double omega = m.parameter("omega", 1.0);
    double gain = m.parameter("gain", 1.0);
    state = {0.0, 0.0};
    output_name = "x";
    deriv = [&input, zeta, omega, gain](double t,
                                        const std::vector<double> &s,
                                        std::vector<double> &d) {
      double uu = input.value_at(t);
      d[0] = s[1];
      d[1] = omega * omega * (gain * uu - s[0]) - 2.0 * zeta * omega * s[1];
    };
  } else {
    double c1 = m.parameter("c1", 0.1);
    double c2 = m.parameter("c2", 0.01);
    state = {0.0};
    output_name = "v";
    deriv = [&input, c1, c2](double t, const std::vector<double> &s,
                             std::vector<double> &d) {
      double uu = std::clamp(input.value_at(t), 0.0, 1.0); // saturation
      d[0] = uu - c1 * s[0] - c2 * s[0] * s[0];
    };
  }

  if (m.integrator_step <= 0.0) {
    throw SimulationError("integrator step must be positive");
  }
  double period = m.output_sample_period.to_double();
  if (period <= 0.0) {
    throw SimulationError("output sample period must be positive");
  }
  double ratio = period / m.integrator_step;
  int per_sample = static_cast<int>(std::llround(ratio));
  if (per_sample < 1 ||
      std::abs(ratio - per_sample) > 1e-12 * std::max(1.0, ratio)) {
    throw SimulationError("output sample period must be an integer multiple "
                          "of the integrator step");
  }

  Trace tr;
  tr.times = sample_times(m.output_sample_period, horizon);
  std::vector<double> values;
  values.reserve(tr.times.size());
  values.push_back(state[0]);
  for (std::size_t i = 1; i < tr.times.size(); ++i) {
    double t0 = tr.times[i - 1].to_double();
    double length = (tr.times[i] - tr.times[i - 1]).to_double();
    int substeps = per_sample;
    if (tr.times[i] - tr.times[i - 1] != m.output_sample_period) {
      // Trailing partial interval when the horizon is not a multiple of
      // the sample period: keep substeps no longer than the step.
      substeps = std::max(
          1, static_cast<int>(std::ceil(length / m.integrator_step - 1e-9)));
    }
    rk4_advance(deriv, state, t0, length, substeps);
    values.push_back(state[0]);
  }
  tr.channels.emplace(output_name, std::move(values));
  tr.validate();
  return tr;
}

/* One request line in, all output captured, exit status checked. */
std::string run_child_process(const std::string &command,
                              const std::string &request_line) {
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    throw SimulationError("pipe() failed: " + std::string(strerror(errno)));
  }
  pid_t pid = fork();
  if (pid < 0) {
    throw SimulationError("fork() failed: " + std::string(strerror(errno)));
  }
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);

  std::size_t written = 0;
  while (written < request_line.size()) {
    ssize_t n = write(to_child[1], request_line.data() + written,
                      request_line.size() - written);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      break; // child may have exited early; surfaced via exit status
    }
    written += static_cast<std::size_t>(n);
  }
  close(to_child[1]);

  std::string output;
  char buf[4096];
  while (true) {
    ssize_t n = read(from_child[0], buf, sizeof(buf));
    if (n < 0 && errno == EINTR) {
      continue;
    }
    if (n <= 0) {
      break;
    }
    output.append(buf, static_cast<std::size_t>(n));
  }
  close(from_child[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw SimulationError("external model '" + command +
                          "' exited with status " +
                          std::to_string(WIFEXITED(status)
                                             ? WEXITSTATUS(status)
                                             : -1));
  }
  return output;
}

Trace simulate_external(const ModelSpec &m, const InputSignal &u,
                        const Rational &horizon) {
  if (m.external_command.empty()) {
    throw SimulationError("external model needs a command line");
  }
  nlohmann::json req;
  req["protocol"] = 1;
  req["horizon"] = horizon.to_double();
  req["sample_period"] = m.output_sample_period.to_double();
  req["inputs"] = nlohmann::json::object();
  for (const auto &[name, ch] : u.channels) {
    ch.validate(name);
    nlohmann::json jc;
    jc["times"] = nlohmann::json::array();
    jc["values"] = nlohmann::json::array();
    for (const auto &[t, v] : ch.points) {
      jc["times"].push_back(t.to_double());
      jc["values"].push_back(v);
    }
    jc["interp"] = ch.interp == Interp::Hold ? "hold" : "linear";
    req["inputs"][name] = std::move(jc);
  }

  std::string output = run_child_process(m.external_command, req.dump() + "\n");

  // Exactly one response line is allowed.
  std::size_t eol = output.find('\n');
  std::string line = eol == std::string::npos ? output : output.substr(0, eol);
  if (eol != std::string::npos &&
      output.find_first_not_of(" \t\r\n", eol) != std::string::npos) {
    throw SimulationError("external model produced extra output lines");
  }

  nlohmann::json resp;
  try {
    resp = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw SimulationError("malformed external response: " +
                          std::string(e.what()));
  }
  if (!resp.is_object() || resp.value("protocol", 0) != 1 ||
      !resp.contains("times") || !resp.contains("signals") ||
      !resp["times"].is_array() || !resp["signals"].is_object()) {
    throw SimulationError("external response missing protocol/times/signals");
  }

  Trace tr;
  for (const auto &jt : resp["times"]) {
    if (!jt.is_number()) {
      throw SimulationError("external response times must be numbers");
    }
    tr.times.push_back(Rational::from_double(jt.get<double>()));
  }
  for (auto it = resp["signals"].begin(); it != resp["signals"].end(); ++it) {
    if (!it.value().is_array() || it.value().size() != tr.times.size()) {
      throw SimulationError("external response signal '" + it.key() +
                            "' length does not match times");
    }
    std::vector<double> vals;
    for (const auto &jv : it.value()) {
      if (!jv.is_number()) {
        throw SimulationError("external response values must be numbers");
      }
      vals.push_back(jv.get<double>());
    }
    tr.channels.emplace(it.key(), std::move(vals));
  }
  try {
    tr.validate();
  } catch (const TraceError &e) {
    throw SimulationError("external response trace invalid: " +
                          std::string(e.what()));
  }
  return tr;
}

} // namespace

Trace simulate(const ModelSpec &m, const InputSignal &u,
               const Rational &horizon) {
  if (!(Rational(0) < horizon)) {
    throw SimulationError("simulation horizon must be positive");
  }
  switch (m.kind) {
  case ModelKind::BuiltinSecondOrder:
  case ModelKind::BuiltinCruise:
    return simulate_builtin(m, u, horizon);
  case ModelKind::External:
    return simulate_external(m, u, horizon);
  }
  throw SimulationError("unknown model kind");
}

} // namespace speclint
