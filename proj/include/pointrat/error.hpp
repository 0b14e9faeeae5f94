#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pointrat {

enum class ErrorKind {
  Domain,
  Argument,
  AssumptionViolation,
  Numeric,
  Resource,
  Parse,
  Consistency,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain-error";
    case ErrorKind::Argument: return "argument-error";
    case ErrorKind::AssumptionViolation: return "assumption-violation";
    case ErrorKind::Numeric: return "numeric-error";
    case ErrorKind::Resource: return "resource-limit";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Consistency: return "consistency-error";
  }
  return "error";
}

// Named coordinates of the point where a check failed.
using Witness = std::vector<std::pair<std::string, double>>;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, Witness witness = {})
      : std::runtime_error(what), kind_(kind), witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const Witness& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  Witness witness_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ErrorKind::Argument, what) {}
};

struct AssumptionViolation : Error {
  explicit AssumptionViolation(const std::string& what, Witness witness = {})
      : Error(ErrorKind::AssumptionViolation, what, std::move(witness)) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

struct ResourceError : Error {
  explicit ResourceError(const std::string& what) : Error(ErrorKind::Resource, what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};

struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& what, Witness witness = {})
      : Error(ErrorKind::Consistency, what, std::move(witness)) {}
};

}  // namespace pointrat
