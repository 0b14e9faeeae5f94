#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pointrat/error.hpp"
#include "pointrat/interval.hpp"
#include "pointrat/piecewise.hpp"

namespace pointrat {

enum class Relation { Dominates, DominatedBy, Equal, Incomparable };

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::Dominates: return "Dominates";
    case Relation::DominatedBy: return "DominatedBy";
    case Relation::Equal: return "Equal";
    case Relation::Incomparable: return "Incomparable";
  }
  return "?";
}

// Outcome of a first-order stochastic dominance test of `first` against `second`.
// first_above_at / second_above_at are thresholds where the respective upper-tail
// probability is larger by more than the tolerance (the largest such gap).
struct Comparison {
  Relation relation = Relation::Equal;
  std::optional<double> first_above_at;
  std::optional<double> second_above_at;
  double max_gap = 0.0;  // largest |difference| of upper-tail probabilities seen

  bool first_dominates() const { return relation == Relation::Dominates || relation == Relation::Equal; }
  bool second_dominates() const { return relation == Relation::DominatedBy || relation == Relation::Equal; }
};

namespace detail {

// Folds a sequence of tail differences (first - second) into a Comparison.
class ComparisonBuilder {
 public:
  explicit ComparisonBuilder(double tol) : tol_(tol) {}

  void add(double at, double diff) {
    result_.max_gap = std::max(result_.max_gap, std::abs(diff));
    if (diff > tol_ && diff > best_first_) {
      best_first_ = diff;
      result_.first_above_at = at;
    }
    if (-diff > tol_ && -diff > best_second_) {
      best_second_ = -diff;
      result_.second_above_at = at;
    }
  }

  Comparison finish() {
    const bool first_ge = !result_.second_above_at.has_value();
    const bool second_ge = !result_.first_above_at.has_value();
    if (first_ge && second_ge) result_.relation = Relation::Equal;
    else if (first_ge) result_.relation = Relation::Dominates;
    else if (second_ge) result_.relation = Relation::DominatedBy;
    else result_.relation = Relation::Incomparable;
    return result_;
  }

 private:
  double tol_;
  double best_first_ = 0.0;
  double best_second_ = 0.0;
  Comparison result_;
};

}  // namespace detail

// A parameter belief: a piecewise-constant probability density on [lo, hi].
class PiecewiseConstantDensity {
 public:
  PiecewiseConstantDensity(std::vector<double> breakpoints, std::vector<double> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.size() < 2 || values_.size() + 1 != breakpoints_.size()) {
      throw ArgumentError("density needs n+1 breakpoints for n piece values");
    }
    double mass = 0.0;
    for (std::size_t p = 0; p < values_.size(); ++p) {
      const double a = breakpoints_[p], b = breakpoints_[p + 1];
      if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw ArgumentError("density breakpoints must be finite and strictly increasing");
      }
      if (!std::isfinite(values_[p]) || values_[p] < 0.0) {
        std::ostringstream os;
        os << "density value " << values_[p] << " on piece " << p << " is negative or not finite";
        throw ArgumentError(os.str());
      }
      mass += values_[p] * (b - a);
    }
    if (std::abs(mass - 1.0) > 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "density integrates to " << mass << ", not 1";
      throw ArgumentError(os.str());
    }
  }

  static PiecewiseConstantDensity uniform(double lo, double hi) { return {{lo, hi}, {1.0 / (hi - lo)}}; }

  // Density with the given probability masses on consecutive pieces.
  static PiecewiseConstantDensity from_masses(std::vector<double> breakpoints, const std::vector<double>& masses) {
    if (masses.size() + 1 != breakpoints.size()) throw ArgumentError("one mass per piece required");
    double total = 0.0;
    for (double m : masses) total += m;
    if (!(total > 0.0)) throw ArgumentError("masses must have positive total");
    std::vector<double> values;
    for (std::size_t p = 0; p < masses.size(); ++p) {
      values.push_back(masses[p] / total / (breakpoints[p + 1] - breakpoints[p]));
    }
    return {std::move(breakpoints), std::move(values)};
  }

  double lo() const { return breakpoints_.front(); }
  double hi() const { return breakpoints_.back(); }
  Interval domain() const { return {lo(), hi()}; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double piece_mass(std::size_t p) const { return values_[p] * (breakpoints_[p + 1] - breakpoints_[p]); }

  std::size_t piece_index(double x) const {
    auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), x);
    return std::min(static_cast<std::size_t>(it - (breakpoints_.begin() + 1)), values_.size() - 1);
  }

  double checked(double x) const {
    const double eps = 1e-12 * std::max({1.0, std::abs(lo()), std::abs(hi())});
    if (!(x >= lo() - eps && x <= hi() + eps)) {
      std::ostringstream os;
      os << "parameter " << x << " outside density domain [" << lo() << ", " << hi() << "]";
      throw DomainError(os.str());
    }
    return std::clamp(x, lo(), hi());
  }

  double density_at(double x) const { return values_[piece_index(checked(x))]; }

  // Probability of [lo, x].
  double cdf(double x) const {
    x = checked(x);
    double acc = 0.0;
    for (std::size_t p = 0; p < values_.size(); ++p) {
      const double a = breakpoints_[p], b = breakpoints_[p + 1];
      if (x >= b) {
        acc += piece_mass(p);
      } else {
        if (x > a) acc += values_[p] * (x - a);
        break;
      }
    }
    return acc;
  }

  // Probability of [x, hi], summed from the top so upper tails carry no 1 - F rounding.
  double survival(double x) const {
    x = checked(x);
    double acc = 0.0;
    for (std::size_t p = values_.size(); p-- > 0;) {
      const double a = breakpoints_[p], b = breakpoints_[p + 1];
      if (x <= a) {
        acc += piece_mass(p);
      } else {
        if (x < b) acc += values_[p] * (b - x);
        break;
      }
    }
    return acc;
  }

  // Integral of g * f over the domain; g must be defined on the same interval.
  double expectation(const PiecewiseFunction& g) const {
    const std::vector<double> xs = merge_breakpoints(breakpoints_, g.breakpoints());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double m = 0.5 * (xs[k] + xs[k + 1]);
      if (m < lo() || m > hi()) continue;
      const double h = values_[piece_index(m)];
      if (h == 0.0) continue;
      acc += h * g.pieces()[g.piece_index(m)].integral(xs[k], xs[k + 1]);
    }
    return acc;
  }

  double mean() const { return expectation(PiecewiseFunction::single(lo(), hi(), Piece{0.0, 1.0, 0.0})); }

  // Same density on a finer breakpoint set.
  PiecewiseConstantDensity refined(const std::vector<double>& points) const {
    std::vector<double> xs;
    for (double x : merge_breakpoints(breakpoints_, points)) {
      if (x >= lo() && x <= hi()) xs.push_back(x);
    }
    std::vector<double> vs;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) vs.push_back(values_[piece_index(0.5 * (xs[k] + xs[k + 1]))]);
    return {std::move(xs), std::move(vs)};
  }

  friend bool operator==(const PiecewiseConstantDensity&, const PiecewiseConstantDensity&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

using Density = PiecewiseConstantDensity;

inline void require_same_domain(const Density& f, const Density& g) {
  if (!same_interval(f.domain(), g.domain())) {
    std::ostringstream os;
    os << "densities live on different domains " << f.domain() << " and " << g.domain();
    throw DomainError(os.str());
  }
}

inline double cdf_at(const Density& f, double theta) { return f.cdf(theta); }

// First-order stochastic dominance of f over g. Upper-tail probabilities of
// piecewise-constant densities are piecewise linear between merged breakpoints,
// so checking those points decides the order exactly.
inline Comparison fosd_compare(const Density& f, const Density& g, double tol = kDefaultTol) {
  require_same_domain(f, g);
  detail::ComparisonBuilder builder(tol);
  for (double x : merge_breakpoints(f.breakpoints(), g.breakpoints())) {
    builder.add(x, f.survival(x) - g.survival(x));
  }
  return builder.finish();
}

inline Density mix_density(const Density& f, const Density& g, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream os;
    os << "mixture weight " << lambda << " outside [0, 1]";
    throw ArgumentError(os.str());
  }
  require_same_domain(f, g);
  if (lambda == 0.0) return f;
  if (lambda == 1.0) return g;
  const std::vector<double> xs = merge_breakpoints(f.breakpoints(), g.breakpoints());
  std::vector<double> vs;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double m = 0.5 * (xs[k] + xs[k + 1]);
    vs.push_back((1.0 - lambda) * f.values()[f.piece_index(m)] + lambda * g.values()[g.piece_index(m)]);
  }
  return Density(xs, std::move(vs));
}

}  // namespace pointrat
