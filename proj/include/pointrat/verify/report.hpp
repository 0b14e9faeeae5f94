#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pointrat/error.hpp"

namespace pointrat::verify {

enum class Status { Pass, Fail, Inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

// Outcome of one check. A Fail carries the coordinates (and, for sampled checks,
// the per-sample seed) needed to re-evaluate the offending point.
struct CheckResult {
  std::string name;
  Status status = Status::Pass;
  std::string detail;
  Witness witness;
  Witness tolerances;
  std::size_t evaluated = 0;
  double worst = 0.0;  // largest violation margin seen (0 when none)
};

struct AssumptionReport {
  std::vector<CheckResult> checks;

  bool any_fail() const {
    for (const auto& c : checks) {
      if (c.status == Status::Fail) return true;
    }
    return false;
  }

  void append(const AssumptionReport& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

// Independent generator for sample k of a run seeded with `master`.
inline std::mt19937_64 sample_rng(std::uint64_t master, std::uint64_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace pointrat::verify
