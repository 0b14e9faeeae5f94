#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "pointrat/choice_belief.hpp"
#include "pointrat/density.hpp"
#include "pointrat/interval.hpp"

namespace pointrat {

// The distribution of an opponent's choice induced by a choice belief and a
// parameter density. Constant stretches of the belief become atoms; the rest stays
// as (parameter range, density height, map) segments so tail probabilities are exact.
class CompositeBelief {
 public:
  struct Atom {
    double value;
    double mass;
  };
  struct Segment {
    double theta_lo;
    double theta_hi;
    double height;
    Piece map;
  };

  CompositeBelief(Interval choices, std::vector<Atom> atoms, std::vector<Segment> segments)
      : choices_(choices), atoms_(std::move(atoms)), segments_(std::move(segments)) {
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
    std::vector<Atom> merged;
    for (const Atom& a : atoms_) {
      if (!merged.empty() && a.value - merged.back().value <= eps()) {
        merged.back().mass += a.mass;
      } else {
        merged.push_back(a);
      }
    }
    atoms_ = std::move(merged);
  }

  Interval choices() const { return choices_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Segment>& segments() const { return segments_; }
  bool has_nonlinear_segments() const {
    return std::any_of(segments_.begin(), segments_.end(), [](const Segment& s) { return s.map.has_reciprocal(); });
  }

  // Pr[choice >= c]; values within rounding distance of c count as reaching it.
  double survival(double c) const { return tail(c, true); }

  // Pr[choice > c], the right limit of survival at c.
  double survival_above(double c) const { return tail(c, false); }

  double total_mass() const { return tail(-INFINITY, true); }

  double mean() const {
    double acc = 0.0;
    for (const Atom& a : atoms_) acc += a.value * a.mass;
    for (const Segment& s : segments_) acc += s.height * s.map.integral(s.theta_lo, s.theta_hi);
    return acc;
  }

  // Choice values where the survival function can change shape.
  std::vector<double> thresholds() const {
    std::vector<double> t;
    for (const Atom& a : atoms_) t.push_back(a.value);
    for (const Segment& s : segments_) {
      t.push_back(s.map(s.theta_lo));
      t.push_back(s.map(s.theta_hi));
      if (auto x = s.map.stationary_point(s.theta_lo, s.theta_hi)) t.push_back(s.map(*x));
    }
    std::sort(t.begin(), t.end());
    std::vector<double> out;
    for (double x : t) {
      if (out.empty() || x - out.back() > eps()) out.push_back(x);
    }
    return out;
  }

  // (threshold, Pr[choice >= threshold]) pairs. For a purely atomic composite,
  // survival equals the listed probability on (previous threshold, threshold],
  // is 1 below the first threshold and 0 above the last.
  std::vector<std::pair<double, double>> steps() const {
    std::vector<std::pair<double, double>> out;
    for (double t : thresholds()) out.emplace_back(t, survival(t));
    return out;
  }

  double eps() const { return 1e-12 * std::max({1.0, std::abs(choices_.lo), std::abs(choices_.hi)}); }

 private:
  // Only atoms need the rounding allowance; segments put no mass on a single level.
  double tail(double c, bool inclusive) const {
    double acc = 0.0;
    for (const Atom& a : atoms_) {
      if (inclusive ? a.value >= c - eps() : a.value > c + eps()) acc += a.mass;
    }
    for (const Segment& s : segments_) {
      std::vector<double> cuts{s.theta_lo};
      for (double x : level_crossings(s.map, c, s.theta_lo, s.theta_hi)) cuts.push_back(x);
      cuts.push_back(s.theta_hi);
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (s.map(0.5 * (cuts[k] + cuts[k + 1])) >= c) acc += s.height * (cuts[k + 1] - cuts[k]);
      }
    }
    return acc;
  }

  Interval choices_;
  std::vector<Atom> atoms_;
  std::vector<Segment> segments_;
};

inline CompositeBelief pushforward(const ChoiceBelief& beta, const Density& f) {
  if (!same_interval(beta.domain(), f.domain())) {
    std::ostringstream os;
    os << "choice belief domain " << beta.domain() << " differs from density domain " << f.domain();
    throw DomainError(os.str());
  }
  const PiecewiseFunction& map = beta.map();
  std::vector<CompositeBelief::Atom> atoms;
  std::vector<CompositeBelief::Segment> segments;
  const std::vector<double> xs = merge_breakpoints(map.breakpoints(), f.breakpoints());
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double a = xs[k], b = xs[k + 1];
    const double m = 0.5 * (a + b);
    const double h = f.values()[f.piece_index(m)];
    if (h == 0.0) continue;
    const Piece& piece = map.pieces()[map.piece_index(m)];
    if (piece.is_constant()) {
      atoms.push_back({piece.constant, h * (b - a)});
    } else {
      segments.push_back({a, b, h, piece});
    }
  }
  return {beta.choices(), std::move(atoms), std::move(segments)};
}

// Stochastic dominance of composite p over q. Survival functions are compared at
// every threshold of either composite, on both sides of each jump. Between
// thresholds they are linear for constant and affine beliefs; reciprocal segments
// are additionally sampled at interior points.
inline Comparison composite_compare(const CompositeBelief& p, const CompositeBelief& q, double tol = kDefaultTol) {
  if (!same_interval(p.choices(), q.choices())) throw DomainError("composite beliefs over different choice intervals");
  std::vector<double> ts = p.thresholds();
  const std::vector<double> tq = q.thresholds();
  ts.insert(ts.end(), tq.begin(), tq.end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  const bool curved = p.has_nonlinear_segments() || q.has_nonlinear_segments();
  constexpr int kInterior = 16;

  detail::ComparisonBuilder builder(tol);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    builder.add(t, p.survival(t) - q.survival(t));
    builder.add(t, p.survival_above(t) - q.survival_above(t));
    if (curved && k + 1 < ts.size()) {
      for (int j = 1; j < kInterior; ++j) {
        const double x = t + (ts[k + 1] - t) * j / kInterior;
        builder.add(x, p.survival(x) - q.survival(x));
      }
    }
  }
  return builder.finish();
}

}  // namespace pointrat
