#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pointrat/error.hpp"

namespace pointrat {

// Default absolute tolerance for dominance comparisons.
inline constexpr double kDefaultTol = 1e-9;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
  double clamp(double x) const { return std::clamp(x, lo, hi); }
  // Slack used for membership tests on values produced by floating-point arithmetic.
  double slack(double rel = 1e-12) const { return rel * std::max(1.0, std::abs(lo) + std::abs(hi)); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval make_interval(double lo, double hi, const std::string& what = "interval") {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError(what + ": bounds must be finite");
  }
  if (lo > hi) {
    std::ostringstream os;
    os << what << ": lower bound " << lo << " exceeds upper bound " << hi;
    throw ArgumentError(os.str());
  }
  return Interval{lo, hi};
}

// Two intervals agree up to rounding.
inline bool same_interval(const Interval& a, const Interval& b, double rel = 1e-12) {
  const double s = rel * std::max({1.0, std::abs(a.lo), std::abs(a.hi)});
  return std::abs(a.lo - b.lo) <= s && std::abs(a.hi - b.hi) <= s;
}

inline std::ostream& operator<<(std::ostream& os, const Interval& iv) {
  return os << '[' << iv.lo << ", " << iv.hi << ']';
}

}  // namespace pointrat
