#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pointrat/density.hpp"
#include "pointrat/piecewise.hpp"
#include "pointrat/verify/report.hpp"
#include "pointrat/verify/sampling.hpp"

namespace pointrat::verify {

// Integral of u(x) = sum_j g[j](x_j) against the product of the densities, summed
// cell by cell over the tensor grid of the densities' breakpoints.
inline double product_expectation(const std::vector<PiecewiseFunction>& g, const std::vector<Density>& f) {
  const std::size_t n = g.size();
  if (f.size() != n) throw ArgumentError("one density per coordinate required");
  std::vector<std::vector<double>> cuts;
  for (std::size_t j = 0; j < n; ++j) cuts.push_back(merge_breakpoints(f[j].breakpoints(), g[j].breakpoints()));
  std::vector<std::size_t> idx(n, 0);
  double acc = 0.0;
  for (;;) {
    std::vector<double> mass(n), integral(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = cuts[j][idx[j]], b = cuts[j][idx[j] + 1];
      const double h = f[j].values()[f[j].piece_index(0.5 * (a + b))];
      mass[j] = h * (b - a);
      integral[j] = h * g[j].pieces()[g[j].piece_index(0.5 * (a + b))].integral(a, b);
    }
    for (std::size_t j = 0; j < n; ++j) {
      double others = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) others *= mass[k];
      }
      acc += integral[j] * others;
    }
    std::size_t j = 0;
    while (j < n && ++idx[j] + 1 == cuts[j].size()) idx[j++] = 0;
    if (j == n) break;
  }
  return acc;
}

// Continuous, weakly increasing piecewise-affine function on dom.
inline PiecewiseFunction random_increasing(std::mt19937_64& rng, const Interval& dom) {
  const std::vector<double> xs = random_breakpoints(rng, dom, uniform_index(rng, 1, 4));
  std::vector<double> ys{uniform(rng, -1.0, 1.0)};
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const double slope = uniform(rng, 0.0, 1.0) < 0.2 ? 0.0 : uniform(rng, 0.0, 3.0);
    ys.push_back(ys.back() + slope * (xs[k] - xs[k - 1]));
  }
  return PiecewiseFunction::interpolate(xs, ys);
}

struct ExpectationTrial {
  std::vector<PiecewiseFunction> g;
  std::vector<Density> upper;  // coordinatewise dominating
  std::vector<Density> lower;
};

inline ExpectationTrial expectation_trial(std::size_t n_vars, std::uint64_t seed, std::uint64_t k) {
  std::mt19937_64 rng = sample_rng(seed, k);
  ExpectationTrial t;
  for (std::size_t j = 0; j < n_vars; ++j) {
    const double lo = uniform(rng, -2.0, 2.0);
    const Interval dom{lo, lo + uniform(rng, 0.5, 3.0)};
    t.g.push_back(random_increasing(rng, dom));
    Density base = random_density(rng, dom);
    t.upper.push_back(shift_up(rng, base));
    t.lower.push_back(std::move(base));
  }
  return t;
}

// Expectations of increasing functions with no interaction between coordinates are
// larger under coordinatewise dominating product measures.
inline AssumptionReport check_expectation_dominance(std::size_t n_trials, std::size_t n_vars, std::uint64_t seed,
                                                    double tol = 1e-12) {
  if (n_vars < 1) throw ArgumentError("n_vars must be at least 1");
  CheckResult r{"expectation dominance", Status::Pass, "", {},
                {{"tol", tol}, {"seed", static_cast<double>(seed)}, {"n_vars", static_cast<double>(n_vars)}}};
  for (std::size_t k = 0; k < n_trials; ++k) {
    const ExpectationTrial t = expectation_trial(n_vars, seed, k);
    const double eu = product_expectation(t.g, t.upper);
    const double el = product_expectation(t.g, t.lower);
    ++r.evaluated;
    const double margin = (el - eu) / std::max({1.0, std::abs(eu), std::abs(el)});
    if (margin > tol && margin > r.worst) {
      r.worst = margin;
      r.status = Status::Fail;
      r.witness = {{"trial", static_cast<double>(k)}, {"upper_expectation", eu}, {"lower_expectation", el}};
    }
  }
  r.detail = "expectation under the dominating product measure is at least that under the dominated one";
  return {{r}};
}

}  // namespace pointrat::verify
