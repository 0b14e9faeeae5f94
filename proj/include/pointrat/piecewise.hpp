#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "pointrat/error.hpp"

namespace pointrat {

// One piece of a bound function or choice belief: constant + slope * x + reciprocal / x.
// The reciprocal term carries the 1/theta shape of the Cournot best responses; it is
// only evaluated when nonzero, so pieces touching x = 0 must keep it at zero.
struct Piece {
  double constant = 0.0;
  double slope = 0.0;
  double reciprocal = 0.0;

  double operator()(double x) const {
    double v = constant + slope * x;
    if (reciprocal != 0.0) v += reciprocal / x;
    return v;
  }

  bool is_constant() const { return slope == 0.0 && reciprocal == 0.0; }
  bool has_reciprocal() const { return reciprocal != 0.0; }

  double integral(double a, double b) const {
    double v = constant * (b - a) + 0.5 * slope * (b - a) * (b + a);
    if (reciprocal != 0.0) {
      if (a <= 0.0 && b >= 0.0) throw DomainError("reciprocal piece integrated across zero");
      v += reciprocal * std::log(b / a);
    }
    return v;
  }

  // Interior extremum of slope*x + reciprocal/x, when it lies strictly inside (a, b).
  std::optional<double> stationary_point(double a, double b) const {
    if (slope == 0.0 || reciprocal == 0.0) return std::nullopt;
    const double ratio = reciprocal / slope;
    if (ratio <= 0.0) return std::nullopt;
    double x = std::sqrt(ratio);
    if (a < 0.0 && b < 0.0) x = -x;
    if (x > a && x < b) return x;
    return std::nullopt;
  }

  std::pair<double, double> range(double a, double b) const {
    double lo = std::min((*this)(a), (*this)(b));
    double hi = std::max((*this)(a), (*this)(b));
    if (auto x = stationary_point(a, b)) {
      const double v = (*this)(*x);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {lo, hi};
  }

  friend bool operator==(const Piece&, const Piece&) = default;
};

inline Piece combine(double wa, const Piece& a, double wb, const Piece& b) {
  return Piece{wa * a.constant + wb * b.constant, wa * a.slope + wb * b.slope,
               wa * a.reciprocal + wb * b.reciprocal};
}

// Points strictly inside (a, b) where p(x) == level, in increasing order.
inline std::vector<double> level_crossings(const Piece& p, double level, double a, double b) {
  std::vector<double> roots;
  const double s = p.slope;
  const double c = p.constant - level;
  const double r = p.reciprocal;
  if (r == 0.0) {
    if (s != 0.0) roots.push_back(-c / s);
  } else if (s == 0.0) {
    if (c != 0.0) roots.push_back(-r / c);
  } else {
    // s x^2 + c x + r = 0, stable form.
    const double disc = c * c - 4.0 * s * r;
    if (disc >= 0.0) {
      const double q = -0.5 * (c + std::copysign(std::sqrt(disc), c));
      if (q != 0.0) {
        roots.push_back(q / s);
        roots.push_back(r / q);
      } else {
        roots.push_back(0.0);
      }
    }
  }
  const double eps = 1e-13 * std::max({1.0, std::abs(a), std::abs(b)});
  std::vector<double> inside;
  for (double x : roots) {
    if (std::isfinite(x) && x != 0.0 && x > a + eps && x < b - eps) inside.push_back(x);
  }
  std::sort(inside.begin(), inside.end());
  inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
  return inside;
}

// Sorted union of two breakpoint sets; points closer than a relative 1e-13 are merged.
inline std::vector<double> merge_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> all;
  all.reserve(a.size() + b.size());
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double x : all) {
    if (!out.empty() && x - out.back() <= 1e-13 * std::max({1.0, std::abs(x), std::abs(out.back())})) continue;
    out.push_back(x);
  }
  return out;
}

// A function on [breakpoints.front(), breakpoints.back()] made of Pieces. Piece p covers
// (breakpoints[p], breakpoints[p+1]]; the first piece also owns the left endpoint.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  PiecewiseFunction(std::vector<double> breakpoints, std::vector<Piece> pieces)
      : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (breakpoints_.size() < 2) throw ArgumentError("piecewise function needs at least two breakpoints");
    if (pieces_.size() + 1 != breakpoints_.size()) {
      throw ArgumentError("piecewise function needs exactly one piece per breakpoint interval");
    }
    for (std::size_t p = 0; p + 1 < breakpoints_.size(); ++p) {
      const double a = breakpoints_[p], b = breakpoints_[p + 1];
      if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        std::ostringstream os;
        os << "breakpoints must be finite and strictly increasing (index " << p << ")";
        throw ArgumentError(os.str());
      }
      const Piece& q = pieces_[p];
      if (!std::isfinite(q.constant) || !std::isfinite(q.slope) || !std::isfinite(q.reciprocal)) {
        throw ArgumentError("piece coefficients must be finite");
      }
      if (q.reciprocal != 0.0 && a <= 0.0 && b >= 0.0) {
        throw ArgumentError("reciprocal term on a piece containing zero");
      }
    }
  }

  static PiecewiseFunction single(double lo, double hi, Piece piece) { return {{lo, hi}, {piece}}; }

  static PiecewiseFunction constant(double lo, double hi, double value) {
    return single(lo, hi, Piece{value, 0.0, 0.0});
  }

  static PiecewiseFunction step(std::vector<double> breakpoints, const std::vector<double>& values) {
    std::vector<Piece> pieces;
    pieces.reserve(values.size());
    for (double v : values) pieces.push_back(Piece{v, 0.0, 0.0});
    return {std::move(breakpoints), std::move(pieces)};
  }

  // Continuous piecewise-linear interpolant through (xs[k], ys[k]).
  static PiecewiseFunction interpolate(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
      throw ArgumentError("interpolation needs matching node and value arrays of length >= 2");
    }
    std::vector<Piece> pieces;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double s = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
      pieces.push_back(Piece{ys[k] - s * xs[k], s, 0.0});
    }
    return {xs, std::move(pieces)};
  }

  double lo() const { return breakpoints_.front(); }
  double hi() const { return breakpoints_.back(); }
  std::size_t size() const { return pieces_.size(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  // Maps x into the domain, tolerating rounding-level excursions.
  double checked(double x) const {
    const double eps = 1e-12 * std::max({1.0, std::abs(lo()), std::abs(hi())});
    if (!(x >= lo() - eps && x <= hi() + eps)) {
      std::ostringstream os;
      os << "argument " << x << " outside domain [" << lo() << ", " << hi() << "]";
      throw DomainError(os.str());
    }
    return std::clamp(x, lo(), hi());
  }

  std::size_t piece_index(double x) const {
    auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), x);
    auto p = static_cast<std::size_t>(it - (breakpoints_.begin() + 1));
    return std::min(p, pieces_.size() - 1);
  }

  double operator()(double x) const {
    x = checked(x);
    return pieces_[piece_index(x)](x);
  }

  std::pair<double, double> range() const {
    double lo_v = pieces_[0](breakpoints_[0]);
    double hi_v = lo_v;
    for (std::size_t p = 0; p < pieces_.size(); ++p) {
      auto [a, b] = pieces_[p].range(breakpoints_[p], breakpoints_[p + 1]);
      lo_v = std::min(lo_v, a);
      hi_v = std::max(hi_v, b);
    }
    return {lo_v, hi_v};
  }

  // Re-expresses the function on a finer breakpoint set containing the current one.
  PiecewiseFunction refined(const std::vector<double>& points) const {
    std::vector<double> merged = merge_breakpoints(breakpoints_, points);
    std::vector<double> kept;
    for (double x : merged) {
      if (x >= lo() && x <= hi()) kept.push_back(x);
    }
    std::vector<Piece> pieces;
    for (std::size_t k = 0; k + 1 < kept.size(); ++k) {
      pieces.push_back(pieces_[piece_index(0.5 * (kept[k] + kept[k + 1]))]);
    }
    return {std::move(kept), std::move(pieces)};
  }

  // Merges neighbouring pieces with identical coefficients.
  PiecewiseFunction simplified() const {
    std::vector<double> b{breakpoints_.front()};
    std::vector<Piece> ps;
    for (std::size_t p = 0; p < pieces_.size(); ++p) {
      if (!ps.empty() && ps.back() == pieces_[p]) {
        b.back() = breakpoints_[p + 1];
      } else {
        ps.push_back(pieces_[p]);
        b.push_back(breakpoints_[p + 1]);
      }
    }
    return {std::move(b), std::move(ps)};
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<Piece> pieces_;
};

namespace detail {

inline void require_same_domain(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  const double eps = 1e-12 * std::max({1.0, std::abs(f.lo()), std::abs(f.hi())});
  if (std::abs(f.lo() - g.lo()) > eps || std::abs(f.hi() - g.hi()) > eps) {
    throw DomainError("piecewise functions have different domains");
  }
}

// Pointwise selection between f and g; take_first(df) decides on a sub-interval where
// df = f - g keeps a constant sign, given df at its midpoint.
template <class Select>
PiecewiseFunction select_pointwise(const PiecewiseFunction& f, const PiecewiseFunction& g, Select take_first) {
  require_same_domain(f, g);
  const std::vector<double> xs = merge_breakpoints(f.breakpoints(), g.breakpoints());
  std::vector<double> b{xs.front()};
  std::vector<Piece> ps;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double x0 = xs[k], x1 = xs[k + 1];
    const double m = 0.5 * (x0 + x1);
    const Piece& pf = f.pieces()[f.piece_index(m)];
    const Piece& pg = g.pieces()[g.piece_index(m)];
    const Piece diff = combine(1.0, pf, -1.0, pg);
    std::vector<double> cuts{x0};
    for (double r : level_crossings(diff, 0.0, x0, x1)) cuts.push_back(r);
    cuts.push_back(x1);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
      ps.push_back(take_first(diff(mid)) ? pf : pg);
      b.push_back(cuts[j + 1]);
    }
  }
  return PiecewiseFunction(std::move(b), std::move(ps)).simplified();
}

}  // namespace detail

inline PiecewiseFunction pointwise_max(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  return detail::select_pointwise(f, g, [](double d) { return d >= 0.0; });
}

inline PiecewiseFunction pointwise_min(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  return detail::select_pointwise(f, g, [](double d) { return d <= 0.0; });
}

// min(max(f, lower), upper)
inline PiecewiseFunction clamp_between(const PiecewiseFunction& f, const PiecewiseFunction& lower,
                                       const PiecewiseFunction& upper) {
  return pointwise_min(pointwise_max(f, lower), upper);
}

inline PiecewiseFunction combine(double wa, const PiecewiseFunction& f, double wb, const PiecewiseFunction& g) {
  detail::require_same_domain(f, g);
  const std::vector<double> xs = merge_breakpoints(f.breakpoints(), g.breakpoints());
  std::vector<Piece> ps;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double m = 0.5 * (xs[k] + xs[k + 1]);
    ps.push_back(combine(wa, f.pieces()[f.piece_index(m)], wb, g.pieces()[g.piece_index(m)]));
  }
  return PiecewiseFunction(xs, std::move(ps)).simplified();
}

}  // namespace pointrat
