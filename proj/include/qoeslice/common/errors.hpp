#pragma once

#include <stdexcept>
#include <string>

namespace qoeslice {

// Invalid or inconsistent configuration (bad EnvConfig, missing env vars).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lookup of a slice, entry or file that does not exist.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition, e.g. applying an infeasible action.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed persisted data; carries the 1-based line number when known.
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qoeslice
