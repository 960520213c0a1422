#pragma once

#include <stdexcept>
#include <string>

namespace dsfolio {

/// Malformed or inconsistent configuration (bad JSON, missing BPA cell,
/// invalid breakpoints). CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid input data: CSV schema violations, duplicate rows, unparsable
/// numbers. Messages carry file/line context. CLI exit code 1.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File could not be opened, read or written. CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violated operation precondition (empty focal subset, mismatched frames,
/// negative weight, out-of-range crisp input, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dempster combination attempted on totally contradictory evidence (k = 1).
class TotalConflictError : public DomainError {
 public:
  explicit TotalConflictError(const std::string& msg) : DomainError(msg) {}
};

/// Centroid requested for an aggregate with zero area: no rule fired.
class NoRuleFiredError : public DomainError {
 public:
  explicit NoRuleFiredError(const std::string& msg) : DomainError(msg) {}
};

/// The portfolio problem admits no feasible allocation. CLI exit code 2.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dsfolio
