#pragma once

#include <cmath>

#include "pointrat/error.hpp"
#include "pointrat/interval.hpp"

namespace pointrat {

// Surviving prices after k rounds of the price game with cost types on [0, phi].
// As k grows this tends to [a + phi/8 + theta/2, a + 3 phi/8 + theta/2].
inline Interval bertrand_round_interval(int k, double a, double phi, double p_bar, double theta) {
  if (k < 1) throw ArgumentError("round index must be at least 1");
  const double h = std::ldexp(1.0, -k);  // 2^-k
  const double base = (1.0 - h) * a + 0.5 * theta;
  return {base + (0.125 - 0.25 * h) * phi, base + (0.375 - 0.75 * h) * phi + h * p_bar};
}

inline Interval bertrand_limit_interval(double a, double phi, double theta) {
  return {a + phi / 8.0 + 0.5 * theta, a + 3.0 * phi / 8.0 + 0.5 * theta};
}

// Surviving quantities after k rounds of the quantity game with slope types on
// [phi_lo, phi_hi]. These values follow the unconstrained best-response recursion;
// they are only guaranteed to lie in [0, q_bar] when every round stays interior.
inline Interval cournot_round_interval(int k, double a, double c, double phi_lo, double phi_hi, double q_bar,
                                       double theta) {
  if (k < 1) throw ArgumentError("round index must be at least 1");
  if (!(a > c) || !(phi_lo > 0.0) || !(phi_lo < phi_hi)) {
    throw ArgumentError("cournot closed form requires a > c and 0 < phi_lo < phi_hi");
  }
  if (!(theta > 0.0)) throw ArgumentError("cournot closed form requires a positive parameter");
  const double K = a - c;
  const double D = phi_hi - phi_lo;
  const double l1 = std::log((phi_hi + phi_lo) / (2.0 * phi_lo));
  const double l2 = std::log(2.0 * phi_hi / (phi_hi + phi_lo));
  const double head = K / (2.0 * theta);
  const double w = K / (3.0 * D);
  const double tail = q_bar * std::ldexp(1.0, -k);
  if (k % 2 == 0) {
    const double r = 1.0 - std::pow(0.25, k / 2);
    const double s = 1.0 - std::pow(0.25, k / 2 - 1);
    return {head - w * (2.0 * l1 * r - l2 * s), head - w * (2.0 * l2 * r - l1 * s) + tail};
  }
  const double r = 1.0 - std::pow(0.25, (k - 1) / 2);
  return {head - w * (2.0 * l1 - l2) * r - tail, head - w * (2.0 * l2 - l1) * r};
}

inline Interval cournot_limit_interval(double a, double c, double phi_lo, double phi_hi, double theta) {
  const double K = a - c;
  const double D = phi_hi - phi_lo;
  const double l1 = std::log((phi_hi + phi_lo) / (2.0 * phi_lo));
  const double l2 = std::log(2.0 * phi_hi / (phi_hi + phi_lo));
  const double head = K / (2.0 * theta);
  return {head - K / (3.0 * D) * (2.0 * l1 - l2), head - K / (3.0 * D) * (2.0 * l2 - l1)};
}

}  // namespace pointrat
