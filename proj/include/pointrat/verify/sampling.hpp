#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "pointrat/choice_belief.hpp"
#include "pointrat/density.hpp"
#include "pointrat/interval.hpp"

// Random beliefs for the sampled checks. Ordered pairs are built by construction:
// raising a choice belief pointwise, or moving density mass upward.
namespace pointrat::verify {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Sorted points lo = x_0 < ... < x_n = hi with random interior points.
inline std::vector<double> random_breakpoints(std::mt19937_64& rng, const Interval& dom, std::size_t pieces) {
  std::vector<double> xs{dom.lo};
  std::vector<double> inner;
  for (std::size_t k = 1; k < pieces; ++k) inner.push_back(uniform(rng, dom.lo, dom.hi));
  std::sort(inner.begin(), inner.end());
  const double gap = 1e-6 * dom.width();
  for (double x : inner) {
    if (x - xs.back() > gap && dom.hi - x > gap) xs.push_back(x);
  }
  xs.push_back(dom.hi);
  return xs;
}

inline Density random_density(std::mt19937_64& rng, const Interval& dom, std::size_t max_pieces = 4) {
  std::vector<double> xs = random_breakpoints(rng, dom, uniform_index(rng, 1, max_pieces));
  std::vector<double> masses;
  for (std::size_t p = 0; p + 1 < xs.size(); ++p) {
    masses.push_back(uniform(rng, 0.0, 1.0) < 0.15 ? 0.0 : uniform(rng, 0.05, 1.0));
  }
  if (*std::max_element(masses.begin(), masses.end()) == 0.0) masses.back() = 1.0;
  return Density::from_masses(std::move(xs), masses);
}

// A density that first-order stochastically dominates f: each piece sends a random
// share of its mass to a random higher piece.
inline Density shift_up(std::mt19937_64& rng, const Density& f) {
  std::vector<double> masses;
  for (std::size_t p = 0; p < f.size(); ++p) masses.push_back(f.piece_mass(p));
  for (std::size_t p = masses.size(); p-- > 1;) {
    const std::size_t from = p - 1;
    const std::size_t to = uniform_index(rng, p, masses.size() - 1);
    const double moved = uniform(rng, 0.0, 1.0) * masses[from];
    masses[from] -= moved;
    masses[to] += moved;
  }
  return Density::from_masses(f.breakpoints(), masses);
}

// Piecewise-linear choice belief through random node values; increasing if asked.
inline ChoiceBelief random_belief(std::mt19937_64& rng, const Interval& params, const Interval& choices,
                                  bool increasing, std::size_t max_nodes = 5) {
  const std::vector<double> xs = random_breakpoints(rng, params, uniform_index(rng, 1, max_nodes - 1));
  std::vector<double> ys;
  for (std::size_t k = 0; k < xs.size(); ++k) ys.push_back(uniform(rng, choices.lo, choices.hi));
  if (increasing) std::sort(ys.begin(), ys.end());
  return ChoiceBelief::interpolating(xs, ys, choices);
}

inline std::vector<double> node_values(const ChoiceBelief& b) {
  std::vector<double> ys;
  for (double x : b.map().breakpoints()) ys.push_back(b(x));
  return ys;
}

// A belief pointwise at least b, on the same nodes.
inline ChoiceBelief raise_belief(std::mt19937_64& rng, const ChoiceBelief& b) {
  const Interval ch = b.choices();
  std::vector<double> ys = node_values(b);
  for (double& y : ys) y = std::min(ch.hi, y + uniform(rng, 0.0, 0.5) * ch.width());
  return ChoiceBelief::interpolating(b.map().breakpoints(), ys, ch);
}

}  // namespace pointrat::verify
