#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pointrat/composite.hpp"
#include "pointrat/game.hpp"
#include "pointrat/solver.hpp"
#include "pointrat/verify/report.hpp"
#include "pointrat/verify/sampling.hpp"

namespace pointrat::verify {

// ---------------------------------------------------------------------------
// Mixed partial derivatives by finite differences

struct CrossPartialSample {
  std::size_t player = 0;
  double theta = 0.0;
  double c = 0.0;
  std::vector<double> others;
  double own_theta = 0.0;               // d2u / dc_i dtheta_i
  std::vector<double> own_opponent;     // d2u / dc_i dc_j, per opponent
  std::vector<double> third;            // d3u / dc_i dc_j dc_l, per opponent pair j < l
};

namespace detail {

struct Tap {
  double offset;
  double weight;
};

// First-derivative stencil at x, exact for quadratics. Central where it fits,
// otherwise one-sided second order so grid points on the boundary are estimated
// at the point itself rather than at a shifted centre.
inline std::vector<Tap> stencil(double x, const Interval& iv, double h) {
  if (!(iv.width() > 0.0)) return {};
  if (x - h >= iv.lo && x + h <= iv.hi) return {{-h, -0.5 / h}, {h, 0.5 / h}};
  if (x + 2.0 * h <= iv.hi) return {{0.0, -1.5 / h}, {h, 2.0 / h}, {2.0 * h, -0.5 / h}};
  return {{0.0, 1.5 / h}, {-h, -2.0 / h}, {-2.0 * h, 0.5 / h}};
}

inline std::vector<double> grid_points(const Interval& iv, std::size_t n) {
  if (!(iv.width() > 0.0) || n < 2) return {iv.mid()};
  return uniform_grid(iv, n);
}

}  // namespace detail

inline std::vector<CrossPartialSample> cross_partial_samples(const GameSpec& g, std::size_t grid_size,
                                                             double h_rel = 1e-4) {
  if (grid_size < 2) throw ArgumentError("grid_size must be at least 2");
  std::vector<CrossPartialSample> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const PlayerSpec& p = g.player(i);
    const auto opp = g.opponents(i);
    const std::size_t m = opp.size();
    std::vector<Interval> box{p.parameters, p.choices};
    for (std::size_t j : opp) box.push_back(g.player(j).choices);
    std::vector<std::vector<double>> axes;
    // Rounding in a k-th order difference grows like eps/h^k, so the third-order
    // estimate takes the cube root of the relative step.
    std::vector<double> h, h3;
    for (const Interval& iv : box) {
      axes.push_back(detail::grid_points(iv, grid_size));
      h.push_back(h_rel * iv.width());
      h3.push_back(std::cbrt(h_rel) * iv.width());
    }
    std::vector<std::size_t> idx(box.size(), 0);
    std::vector<double> pt(box.size());
    std::vector<double> others(m);
    auto u_at = [&](const std::vector<double>& x) {
      for (std::size_t k = 0; k < m; ++k) others[k] = x[2 + k];
      return utility_eval(g, i, x[0], x[1], others);
    };
    // Sum over the product of stencils along the listed axes.
    auto mixed = [&](const std::vector<std::size_t>& dims, const std::vector<double>& step) {
      std::vector<std::vector<detail::Tap>> taps;
      for (std::size_t d : dims) {
        taps.push_back(detail::stencil(pt[d], box[d], step[d]));
        if (taps.back().empty()) return 0.0;
      }
      std::vector<std::size_t> t(dims.size(), 0);
      double acc = 0.0;
      for (;;) {
        std::vector<double> x = pt;
        double w = 1.0;
        for (std::size_t a = 0; a < dims.size(); ++a) {
          x[dims[a]] += taps[a][t[a]].offset;
          w *= taps[a][t[a]].weight;
        }
        acc += w * u_at(x);
        std::size_t a = 0;
        while (a < dims.size() && ++t[a] == taps[a].size()) t[a++] = 0;
        if (a == dims.size()) break;
      }
      return acc;
    };
    for (;;) {
      for (std::size_t d = 0; d < box.size(); ++d) pt[d] = axes[d][idx[d]];
      CrossPartialSample s;
      s.player = i;
      s.theta = pt[0];
      s.c = pt[1];
      s.others.assign(pt.begin() + 2, pt.end());
      s.own_theta = mixed({1, 0}, h);
      for (std::size_t k = 0; k < m; ++k) s.own_opponent.push_back(mixed({1, 2 + k}, h));
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t l = j + 1; l < m; ++l) s.third.push_back(mixed({1, 2 + j, 2 + l}, h3));
      }
      out.push_back(std::move(s));
      std::size_t d = 0;
      while (d < box.size() && ++idx[d] == axes[d].size()) idx[d++] = 0;
      if (d == box.size()) break;
    }
  }
  return out;
}

// Sign conditions on the mixed partials implied by the declared mode, and vanishing
// third-order opponent interactions.
inline AssumptionReport check_cross_partials(const GameSpec& g, std::size_t grid_size = 9, double h_rel = 1e-4,
                                             double tol = 1e-6) {
  const std::vector<CrossPartialSample> samples = cross_partial_samples(g, grid_size, h_rel);
  const double dir = g.mode() == Mode::Complements ? 1.0 : -1.0;
  const Witness tols{{"h_rel", h_rel}, {"tol", tol}};
  CheckResult own{"cross-partial own parameter", Status::Pass, "", {}, tols};
  CheckResult opp{"cross-partial opponent choice", Status::Pass, "", {}, tols};
  CheckResult third{"third-order opponent interaction", Status::Pass, "", {}, tols};

  auto point = [](const CrossPartialSample& s) {
    Witness w{{"player", static_cast<double>(s.player + 1)}, {"theta", s.theta}, {"c", s.c}};
    for (std::size_t k = 0; k < s.others.size(); ++k) w.emplace_back("other" + std::to_string(k + 1), s.others[k]);
    return w;
  };
  auto note = [&](CheckResult& r, double margin, const CrossPartialSample& s, const char* what, double value) {
    ++r.evaluated;
    if (margin > tol && margin > r.worst) {
      r.worst = margin;
      r.status = Status::Fail;
      r.witness = point(s);
      r.witness.emplace_back(what, value);
    }
  };
  for (const auto& s : samples) {
    note(own, -dir * s.own_theta, s, "estimate", s.own_theta);
    for (std::size_t k = 0; k < s.own_opponent.size(); ++k) {
      note(opp, -dir * s.own_opponent[k], s, "estimate", s.own_opponent[k]);
    }
    for (double t : s.third) note(third, std::abs(t), s, "estimate", t);
  }
  const char* sign = dir > 0 ? "nonnegative" : "nonpositive";
  own.detail = std::string("mixed partial in own choice and own parameter must be ") + sign;
  opp.detail = std::string("mixed partial in own choice and each opponent choice must be ") + sign;
  third.detail = g.size() < 3 ? "vacuous with two players" : "must vanish for every pair of opponents";
  return {{own, opp, third}};
}

// ---------------------------------------------------------------------------
// Increasing (or decreasing) differences of expected utility

// theta <= theta2, c <= c2 and, for every opponent, the composite of
// (beta2, f2) dominates that of (beta, f).
struct OrderedQuadruple {
  std::size_t player = 0;
  double theta = 0.0, theta2 = 0.0, c = 0.0, c2 = 0.0;
  std::vector<ChoiceBelief> beta, beta2;
  std::vector<Density> f, f2;
  int construction = 0;  // 0: raised belief, 1: shifted density, 2: both
};

inline OrderedQuadruple ordered_quadruple(const GameSpec& g, std::uint64_t seed, std::uint64_t k) {
  std::mt19937_64 rng = sample_rng(seed, k);
  OrderedQuadruple q;
  q.player = uniform_index(rng, 0, g.size() - 1);
  const PlayerSpec& p = g.player(q.player);
  q.theta = uniform(rng, p.parameters.lo, p.parameters.hi);
  q.theta2 = uniform(rng, p.parameters.lo, p.parameters.hi);
  if (q.theta > q.theta2) std::swap(q.theta, q.theta2);
  q.c = uniform(rng, p.choices.lo, p.choices.hi);
  q.c2 = uniform(rng, p.choices.lo, p.choices.hi);
  if (q.c > q.c2) std::swap(q.c, q.c2);
  q.construction = static_cast<int>(uniform_index(rng, 0, 2));
  for (std::size_t j : g.opponents(q.player)) {
    const PlayerSpec& o = g.player(j);
    const bool raise = q.construction != 1;
    const bool shift = q.construction != 0;
    ChoiceBelief b = random_belief(rng, o.parameters, o.choices, shift);
    Density f = random_density(rng, o.parameters);
    q.beta2.push_back(raise ? raise_belief(rng, b) : b);
    q.f2.push_back(shift ? shift_up(rng, f) : f);
    q.beta.push_back(std::move(b));
    q.f.push_back(std::move(f));
  }
  return q;
}

struct DifferenceSample {
  double high_gain;  // U(theta2, c2, beta2, f2) - U(theta2, c, beta2, f2)
  double low_gain;   // U(theta, c2, beta, f) - U(theta, c, beta, f)
  double scale;
};

inline DifferenceSample evaluate_differences(const GameSpec& g, const OrderedQuadruple& q) {
  for (std::size_t k = 0; k < q.beta.size(); ++k) {
    const Comparison cmp = composite_compare(pushforward(q.beta2[k], q.f2[k]), pushforward(q.beta[k], q.f[k]));
    if (!cmp.first_dominates()) throw ConsistencyError("constructed beliefs are not ordered");
  }
  const double u22 = expected_utility(g, q.player, q.theta2, q.c2, q.beta2, q.f2);
  const double u21 = expected_utility(g, q.player, q.theta2, q.c, q.beta2, q.f2);
  const double u12 = expected_utility(g, q.player, q.theta, q.c2, q.beta, q.f);
  const double u11 = expected_utility(g, q.player, q.theta, q.c, q.beta, q.f);
  const double scale = std::max({1.0, std::abs(u22), std::abs(u21), std::abs(u12), std::abs(u11)});
  return {u22 - u21, u12 - u11, scale};
}

inline AssumptionReport check_increasing_differences(const GameSpec& g, std::size_t n_samples, std::uint64_t seed,
                                                     double tol = 1e-9) {
  if (n_samples < 1) throw ArgumentError("n_samples must be at least 1");
  const double dir = g.mode() == Mode::Complements ? 1.0 : -1.0;
  CheckResult r{dir > 0 ? "increasing differences" : "decreasing differences", Status::Pass, "", {},
                {{"tol", tol}, {"seed", static_cast<double>(seed)}}};
  for (std::size_t k = 0; k < n_samples; ++k) {
    const OrderedQuadruple q = ordered_quadruple(g, seed, k);
    const DifferenceSample d = evaluate_differences(g, q);
    ++r.evaluated;
    const double margin = dir * (d.low_gain - d.high_gain) / d.scale;
    if (margin > tol && margin > r.worst) {
      r.worst = margin;
      r.status = Status::Fail;
      r.witness = {{"sample", static_cast<double>(k)}, {"player", static_cast<double>(q.player + 1)},
                   {"theta", q.theta},   {"theta2", q.theta2},
                   {"c", q.c},           {"c2", q.c2},
                   {"high_gain", d.high_gain}, {"low_gain", d.low_gain}};
    }
  }
  r.detail = dir > 0 ? "gain from raising the choice grows along ordered parameter-belief pairs"
                     : "gain from raising the choice shrinks along ordered parameter-belief pairs";
  return {{r}};
}

// ---------------------------------------------------------------------------
// Continuity of the best response along belief mixtures

struct BeliefPair {
  std::vector<ChoiceBelief> beliefs;
  std::vector<Density> densities;
};

struct SweepPoint {
  double lambda;
  double response;
};

inline BeliefPair mix_pair(const BeliefPair& a, const BeliefPair& b, double lambda) {
  BeliefPair out;
  for (std::size_t k = 0; k < a.beliefs.size(); ++k) {
    out.beliefs.push_back(mix_choice_belief(a.beliefs[k], b.beliefs[k], lambda));
    out.densities.push_back(mix_density(a.densities[k], b.densities[k], lambda));
  }
  return out;
}

inline double mixture_response(const GameSpec& g, std::size_t i, double theta, const BeliefPair& a,
                               const BeliefPair& b, double lambda) {
  const BeliefPair m = mix_pair(a, b, lambda);
  return best_response(g, i, theta, m.beliefs, m.densities, g.player(i).choices).choice;
}

// Best responses on lambda = 0, 1/(n-1), ..., 1.
inline std::vector<SweepPoint> mixture_sweep(const GameSpec& g, std::size_t i, double theta, const BeliefPair& a,
                                             const BeliefPair& b, std::size_t lambda_grid) {
  if (lambda_grid < 3) throw ArgumentError("lambda grid needs at least 3 points");
  std::vector<SweepPoint> out;
  for (std::size_t k = 0; k < lambda_grid; ++k) {
    const double lambda = k + 1 == lambda_grid ? 1.0 : static_cast<double>(k) / static_cast<double>(lambda_grid - 1);
    out.push_back({lambda, mixture_response(g, i, theta, a, b, lambda)});
  }
  return out;
}

inline BeliefPair random_pair(const GameSpec& g, std::size_t i, std::mt19937_64& rng) {
  BeliefPair out;
  for (std::size_t j : g.opponents(i)) {
    const PlayerSpec& o = g.player(j);
    out.beliefs.push_back(random_belief(rng, o.parameters, o.choices, false));
    out.densities.push_back(random_density(rng, o.parameters));
  }
  return out;
}

// A sweep can expose a jump but cannot prove continuity, so the best outcome is
// Inconclusive. Suspicious steps are bisected: a true jump keeps its size while the
// step of a continuous response shrinks with the lambda spacing.
inline AssumptionReport check_mixture_continuity(const GameSpec& g, std::size_t n_samples, std::size_t lambda_grid,
                                                 std::uint64_t seed) {
  if (lambda_grid < 3) throw ArgumentError("lambda grid needs at least 3 points");
  CheckResult r{"mixture continuity", Status::Inconclusive, "", {},
                {{"lambda_grid", static_cast<double>(lambda_grid)}, {"seed", static_cast<double>(seed)}}};
  for (std::size_t s = 0; s < n_samples && r.status != Status::Fail; ++s) {
    std::mt19937_64 rng = sample_rng(seed, s);
    const std::size_t i = uniform_index(rng, 0, g.size() - 1);
    const Interval params = g.player(i).parameters;
    const double theta = uniform(rng, params.lo, params.hi);
    const BeliefPair a = random_pair(g, i, rng);
    const BeliefPair b = random_pair(g, i, rng);
    const std::vector<SweepPoint> sw = mixture_sweep(g, i, theta, a, b, lambda_grid);
    ++r.evaluated;

    const double scale = std::max(1.0, g.player(i).choices.width());
    double variation = 0.0, max_step = 0.0;
    for (std::size_t k = 1; k < sw.size(); ++k) {
      const double step = std::abs(sw[k].response - sw[k - 1].response);
      variation += step;
      max_step = std::max(max_step, step);
    }
    const double dl = 1.0 / static_cast<double>(lambda_grid - 1);
    const double modulus = 4.0 * variation * dl + 1e-9 * scale;
    auto fail = [&](const char* what, Witness w) {
      r.status = Status::Fail;
      r.detail = what;
      w.insert(w.begin(), {{"sample", static_cast<double>(s)}, {"player", static_cast<double>(i + 1)}, {"theta", theta}});
      r.witness = std::move(w);
    };
    for (std::size_t k = 1; k < sw.size() && r.status != Status::Fail; ++k) {
      double la = sw[k - 1].lambda, lb = sw[k].lambda;
      double ra = sw[k - 1].response, rb = sw[k].response;
      if (std::abs(rb - ra) <= modulus) continue;
      for (int depth = 0; depth < 60 && std::abs(rb - ra) > 1e-7 * scale; ++depth) {
        const double lm = 0.5 * (la + lb);
        const double rm = mixture_response(g, i, theta, a, b, lm);
        if (std::abs(rm - ra) >= std::abs(rb - rm)) {
          lb = lm;
          rb = rm;
        } else {
          la = lm;
          ra = rm;
        }
      }
      if (std::abs(rb - ra) > 1e-7 * scale) {
        r.worst = std::abs(rb - ra);
        fail("best response jumps along the mixture", {{"lambda_lo", la}, {"lambda_hi", lb}, {"jump", rb - ra}});
      }
    }
    if (r.status == Status::Fail) break;
    // Every value between the endpoint responses is met to within the sweep resolution.
    const double r0 = sw.front().response, r1 = sw.back().response;
    for (std::size_t t = 1; t + 1 < lambda_grid; ++t) {
      const double y = r0 + (r1 - r0) * static_cast<double>(t) / static_cast<double>(lambda_grid - 1);
      double best = INFINITY;
      for (const auto& p : sw) best = std::min(best, std::abs(p.response - y));
      if (best > 0.5 * max_step + 1e-9 * scale) {
        fail("intermediate best response not attained", {{"target", y}, {"distance", best}});
        break;
      }
    }
  }
  if (r.status != Status::Fail) {
    r.detail = "no discontinuity found; sampled sweeps cannot certify continuity";
  }
  return {{r}};
}

}  // namespace pointrat::verify
