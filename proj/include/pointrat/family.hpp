#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pointrat/density.hpp"
#include "pointrat/error.hpp"

namespace pointrat {

// The admissible parameter beliefs a player holds about one opponent, with the
// members designated as stochastically largest and smallest.
class BeliefFamily {
 public:
  BeliefFamily(std::vector<Density> members, std::size_t max_index, std::size_t min_index)
      : members_(std::move(members)), max_index_(max_index), min_index_(min_index) {
    if (members_.empty()) throw ArgumentError("belief family must have at least one member");
    if (max_index_ >= members_.size() || min_index_ >= members_.size()) {
      throw ArgumentError("designated extreme index out of range");
    }
    for (const Density& f : members_) require_same_domain(members_.front(), f);
  }

  static BeliefFamily singleton(Density f) { return {{std::move(f)}, 0, 0}; }

  const std::vector<Density>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t max_index() const { return max_index_; }
  std::size_t min_index() const { return min_index_; }
  const Density& max_member() const { return members_[max_index_]; }
  const Density& min_member() const { return members_[min_index_]; }
  Interval domain() const { return members_.front().domain(); }

 private:
  std::vector<Density> members_;
  std::size_t max_index_;
  std::size_t min_index_;
};

// Checks the designated extremes against every member and returns (max, min).
inline std::pair<Density, Density> family_extremes(const BeliefFamily& family, double tol = kDefaultTol) {
  const auto& ms = family.members();
  for (std::size_t m = 0; m < ms.size(); ++m) {
    const Comparison top = fosd_compare(family.max_member(), ms[m], tol);
    if (!top.first_dominates()) {
      std::ostringstream os;
      os << "designated maximum (member " << family.max_index() << ") does not dominate member " << m
         << "; upper tail of member " << m << " is larger at " << *top.second_above_at;
      throw AssumptionViolation(os.str(), {{"member", static_cast<double>(m)}, {"threshold", *top.second_above_at}});
    }
    const Comparison bottom = fosd_compare(ms[m], family.min_member(), tol);
    if (!bottom.first_dominates()) {
      std::ostringstream os;
      os << "member " << m << " does not dominate designated minimum (member " << family.min_index()
         << "); upper tail of the minimum is larger at " << *bottom.second_above_at;
      throw AssumptionViolation(os.str(),
                                {{"member", static_cast<double>(m)}, {"threshold", *bottom.second_above_at}});
    }
  }
  return {family.max_member(), family.min_member()};
}

}  // namespace pointrat
