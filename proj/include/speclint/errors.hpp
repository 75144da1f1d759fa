#pragma once

#include <stdexcept>
#include <string>

namespace speclint {

/* Base class for all user-facing failures. The CLI maps these to exit 2. */
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/* Syntax error with 1-based line/column into the offending source. */
class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line, int column)
      : Error(msg + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line(line), column(column) {}

  int line;
  int column;
};

/* Formula falls outside the eventually/always fragment the bounded
 * decision procedure covers (an Until node is present). */
class FragmentError : public Error {
public:
  using Error::Error;
};

/* Malformed or inadequate trace data. */
class TraceError : public Error {
public:
  using Error::Error;
};

/* Simulation failure: bad model parameters, external process errors. */
class SimulationError : public Error {
public:
  using Error::Error;
};

} // namespace speclint
