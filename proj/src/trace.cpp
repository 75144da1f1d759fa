#include "speclint/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "speclint/errors.hpp"

namespace speclint {

void Trace::validate() const {
  if (times.empty()) {
    throw TraceError("trace has no samples");
  }
  if (!times.front().is_zero()) {
    throw TraceError("trace must start at time 0, found " +
                     times.front().str());
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i - 1] < times[i])) {
      throw TraceError("trace times must be strictly increasing (row " +
                       std::to_string(i) + ")");
    }
  }
  for (const auto &[name, values] : channels) {
    if (values.size() != times.size()) {
      throw TraceError("channel '" + name + "' has " +
                       std::to_string(values.size()) + " values for " +
                       std::to_string(times.size()) + " samples");
    }
  }
}

const std::vector<double> &Trace::channel(const std::string &name) const {
  auto it = channels.find(name);
  if (it == channels.end()) {
    throw TraceError("trace has no channel '" + name + "'");
  }
  return it->second;
}

std::size_t Trace::index_of(const Rational &t) const {
  // Binary search; times are strictly increasing.
  std::size_t lo = 0, hi = times.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (times[mid] < t) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < times.size() && times[lo] == t) {
    return lo;
  }
  return npos;
}

namespace {

std::vector<std::string> split_csv_row(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // Trim surrounding whitespace.
    std::size_t b = cell.find_first_not_of(" \t\r");
    std::size_t e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return cells;
}

} // namespace

Trace read_trace_csv(const std::string &csv_text) {
  std::stringstream ss(csv_text);
  std::string line;
  if (!std::getline(ss, line)) {
    throw TraceError("empty trace file");
  }
  std::vector<std::string> header = split_csv_row(line);
  if (header.empty() || header[0] != "time") {
    throw TraceError("trace header must start with 'time'");
  }
  Trace tr;
  std::vector<std::vector<double> *> cols;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i].empty()) {
      throw TraceError("empty channel name in trace header");
    }
    auto [it, fresh] = tr.channels.emplace(header[i], std::vector<double>{});
    if (!fresh) {
      throw TraceError("duplicate channel '" + header[i] + "' in header");
    }
    cols.push_back(&it->second);
  }
  std::size_t row = 1;
  while (std::getline(ss, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() != header.size()) {
      throw TraceError("row " + std::to_string(row) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(header.size()));
    }
    try {
      tr.times.push_back(Rational::parse(cells[0]));
    } catch (const Error &e) {
      throw TraceError("row " + std::to_string(row) + ": " + e.what());
    }
    for (std::size_t i = 1; i < cells.size(); ++i) {
      double v = 0;
      auto [p, ec] =
          std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), v);
      if (ec != std::errc() || p != cells[i].data() + cells[i].size()) {
        throw TraceError("row " + std::to_string(row) + ": bad value '" +
                         cells[i] + "'");
      }
      cols[i - 1]->push_back(v);
    }
  }
  tr.validate();
  return tr;
}

Trace read_trace_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw TraceError("cannot open trace file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return read_trace_csv(buf.str());
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    return "0";
  }
  return std::string(buf, p);
}

std::string write_trace_csv(const Trace &trace) {
  std::string out = "time";
  for (const auto &[name, _] : trace.channels) {
    out += ",";
    out += name;
  }
  out += "\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out += trace.times[i].str();
    for (const auto &[_, values] : trace.channels) {
      out += ",";
      out += format_double(values[i]);
    }
    out += "\n";
  }
  return out;
}

} // namespace speclint
