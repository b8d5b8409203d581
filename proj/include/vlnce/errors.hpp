#ifndef VLNCE_ERRORS_HPP
#define VLNCE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vlnce {

/// Pose or point lies outside the grid or inside an obstacle cell.
class InvalidStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke an API contract (non-monotonic history, empty polyline, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bad configuration: invalid SimConfig values, empty ensemble, unknown planner name.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationError : public std::runtime_error {
 public:
  GenerationError(const std::string& what, unsigned long long seed)
      : std::runtime_error(what + " (seed " + std::to_string(seed) + ")"), seed_(seed) {}
  unsigned long long seed() const noexcept { return seed_; }

 private:
  unsigned long long seed_;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed JSON input. `offset` is the byte position reported by the parser.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class VersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a domain invariant. Carries the offending id when known.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::string id = {})
      : std::runtime_error(id.empty() ? what : id + ": " + what), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

}  // namespace vlnce

#endif  // VLNCE_ERRORS_HPP
