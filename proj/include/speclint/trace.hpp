#pragma once

#include <map>
#include <string>
#include <vector>

#include "speclint/rational.hpp"

namespace speclint {

/* Multi-channel sampled signal. Timestamps are exact rationals, strictly
 * increasing and starting at 0; every channel holds one value per sample. */
struct Trace {
  std::vector<Rational> times;
  std::map<std::string, std::vector<double>> channels;

  std::size_t size() const { return times.size(); }

  /* Throws TraceError unless the invariants hold: nonempty, strictly
   * increasing times from 0, all channels the same length. */
  void validate() const;

  const std::vector<double> &channel(const std::string &name) const;

  /* Index of an exact sample instant, or npos. */
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(const Rational &t) const;
};

/* CSV with a "time" column first, then one column per channel. The time
 * column accepts decimal or fraction literals. */
Trace read_trace_csv(const std::string &csv_text);
Trace read_trace_file(const std::string &path);
std::string write_trace_csv(const Trace &trace);

/* Shortest decimal text that round-trips to the same double. */
std::string format_double(double v);

} // namespace speclint
