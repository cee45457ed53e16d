#ifndef FRLP_ERRORS_HPP
#define FRLP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace frlp {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance document. Carries the 1-based line/column when the
/// failure is syntactic, or a JSON-path-like field location otherwise.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& what)
      : Error(location.empty() ? what : location + ": " + what), location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// Invariant violations that pruning cannot repair.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "instance validation failed";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// Destination not reachable, so no deviation budget can be derived.
class NoRouteError : public Error {
 public:
  using Error::Error;
};

class EnumerationOverflow : public Error {
 public:
  using Error::Error;
};

class AggregationOverflow : public Error {
 public:
  using Error::Error;
};

/// Cut-set construction over a route with an edge longer than the range.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

class WitnessUndefined : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

/// Minimum-station problem with demands that no placement can serve.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::vector<std::size_t> demands)
      : Error(what), demands_(std::move(demands)) {}
  const std::vector<std::size_t>& demands() const noexcept { return demands_; }

 private:
  std::vector<std::size_t> demands_;
};

}  // namespace frlp

#endif  // FRLP_ERRORS_HPP
