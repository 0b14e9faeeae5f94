#pragma once

#include <sstream>
#include <utility>
#include <vector>

#include "pointrat/error.hpp"
#include "pointrat/interval.hpp"
#include "pointrat/piecewise.hpp"

namespace pointrat {

// A point belief about one opponent: the choice that opponent makes at each of
// their parameter values. Values are confined to the opponent's choice interval.
class ChoiceBelief {
 public:
  ChoiceBelief(PiecewiseFunction map, Interval choices) : map_(std::move(map)), choices_(choices) {
    auto [lo, hi] = map_.range();
    const double slack = 1e-9 * std::max(1.0, choices_.width());
    if (lo < choices_.lo - slack || hi > choices_.hi + slack) {
      std::ostringstream os;
      os << "choice belief takes values in [" << lo << ", " << hi << "], outside choice interval " << choices_;
      throw DomainError(os.str());
    }
  }

  static ChoiceBelief constant(Interval parameters, Interval choices, double value) {
    return {PiecewiseFunction::constant(parameters.lo, parameters.hi, value), choices};
  }

  static ChoiceBelief step(std::vector<double> breakpoints, const std::vector<double>& values, Interval choices) {
    return {PiecewiseFunction::step(std::move(breakpoints), values), choices};
  }

  // Piecewise-linear interpolant of values sampled on a parameter grid.
  static ChoiceBelief interpolating(const std::vector<double>& grid, const std::vector<double>& values,
                                    Interval choices) {
    return {PiecewiseFunction::interpolate(grid, values), choices};
  }

  double operator()(double theta) const { return map_(theta); }
  const PiecewiseFunction& map() const { return map_; }
  Interval choices() const { return choices_; }
  Interval domain() const { return {map_.lo(), map_.hi()}; }

 private:
  PiecewiseFunction map_;
  Interval choices_;
};

inline ChoiceBelief mix_choice_belief(const ChoiceBelief& a, const ChoiceBelief& b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream os;
    os << "mixture weight " << lambda << " outside [0, 1]";
    throw ArgumentError(os.str());
  }
  if (!same_interval(a.choices(), b.choices())) throw DomainError("choice beliefs over different choice intervals");
  if (!same_interval(a.domain(), b.domain())) throw DomainError("choice beliefs over different parameter intervals");
  if (lambda == 0.0) return a;
  if (lambda == 1.0) return b;
  return {combine(1.0 - lambda, a.map(), lambda, b.map()), a.choices()};
}

}  // namespace pointrat
