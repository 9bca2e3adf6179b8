#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graphrank {

enum class ErrorKind {
  config,        // invalid parameters or configuration
  domain,        // argument outside the operation's mathematical domain
  parse,         // malformed text input
  oracle_limit,  // exact oracle asked to work beyond its size cap
  budget,        // enumeration / rejection / support budget exhausted
  contract,      // caller broke a structural precondition
  mode,          // requested mode not available for this input
  parity,        // n*d odd for a regular graph
  infeasible,    // no object with the requested parameters exists
  input,         // malformed numeric input (e.g. probabilities not summing to 1)
  io,            // file could not be read or written
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse errors carry the 1-based line number of the offending input line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace graphrank
