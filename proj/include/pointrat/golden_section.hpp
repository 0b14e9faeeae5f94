#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pointrat/error.hpp"

namespace pointrat {

struct Maximum {
  double x;
  double value;
};

// Rejects objectives that dip and rise again across five equally spaced probes;
// such a shape has at least two local maxima on [a, b].
template <class F>
void probe_unimodal(F&& f, double a, double b) {
  if (!(b > a)) return;
  double xs[5], ys[5];
  double scale = 0.0;
  for (int k = 0; k < 5; ++k) {
    xs[k] = a + (b - a) * k / 4.0;
    ys[k] = f(xs[k]);
    scale = std::max(scale, std::abs(ys[k]));
  }
  const double tol = 1e-12 * std::max(1.0, scale);
  bool fell = false;
  for (int k = 1; k < 5; ++k) {
    const double step = ys[k] - ys[k - 1];
    if (step < -tol) fell = true;
    if (step > tol && fell) {
      std::ostringstream os;
      os.precision(17);
      os << "objective is not unimodal on [" << a << ", " << b << "]: value rises again at " << xs[k];
      throw AssumptionViolation(os.str(), {{"c", xs[k]}, {"value", ys[k]}, {"previous_value", ys[k - 1]}});
    }
  }
}

// Maximizer of a unimodal f on [a, b], located to within `tol` in x.
template <class F>
Maximum golden_section_max(F&& f, double a, double b, double tol = 1e-10, int max_iter = 400) {
  if (!(b >= a)) throw ArgumentError("golden-section search needs a <= b");
  if (b == a) return {a, f(a)};
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = a, hi = b;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  Maximum best{0.5 * (lo + hi), f(0.5 * (lo + hi))};
  // The bracket shrinks toward an endpoint maximum but never reaches it.
  for (double e : {a, b}) {
    const double v = f(e);
    if (v > best.value) best = {e, v};
  }
  return best;
}

}  // namespace pointrat
