#pragma once

// Seeded property suites shared by the unit tests and the acceptance runner.
// Each returns the first counterexample it meets, if any.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "pointrat/solver.hpp"
#include "pointrat/verify/assumptions.hpp"
#include "pointrat/verify/expectation.hpp"

namespace suites {

using namespace pointrat;
using namespace pointrat::verify;

struct Outcome {
  bool ok = true;
  std::size_t samples = 0;
  std::string failure;

  void fail(std::uint64_t sample, const std::string& what) {
    if (!ok) return;
    ok = false;
    std::ostringstream os;
    os << "sample " << sample << ": " << what;
    failure = os.str();
  }
};

inline GameSpec random_bertrand(std::mt19937_64& rng) {
  const double a = uniform(rng, 0.5, 5.0), phi = uniform(rng, 0.2, 2.0);
  return bertrand_game(a, phi, a + phi + uniform(rng, 0.0, 5.0));
}

inline GameSpec random_cournot(std::mt19937_64& rng) {
  const double c = uniform(rng, 0.0, 3.0), a = c + uniform(rng, 1.0, 10.0);
  const double lo = uniform(rng, 0.5, 2.0), hi = lo + uniform(rng, 0.2, 3.0);
  return cournot_game(a, c, lo, hi, (a - c) / (2.0 * lo) * uniform(rng, 1.0, 2.5));
}

// Even samples are price games, odd samples quantity games.
inline GameSpec random_game(std::uint64_t seed, std::uint64_t k) {
  std::mt19937_64 rng = sample_rng(seed, k);
  return k % 2 == 0 ? random_bertrand(rng) : random_cournot(rng);
}

inline Outcome rounds_nested(std::size_t n, std::uint64_t seed) {
  Outcome out;
  for (std::uint64_t k = 0; k < n && out.ok; ++k) {
    const GameSpec g = random_game(seed, k);
    const IterationTrace tr = solve(g, 25, 1e-12, 5);
    ++out.samples;
    for (std::size_t r = 1; r < tr.rounds.size(); ++r) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double tol = 1e-9 * std::max(1.0, g.player(i).choices.width());
        for (std::size_t t = 0; t < tr.rounds[r].players[i].intervals.size(); ++t) {
          const Interval& prev = tr.rounds[r - 1].players[i].intervals[t];
          const Interval& cur = tr.rounds[r].players[i].intervals[t];
          if (cur.lo < prev.lo - tol || cur.hi > prev.hi + tol || cur.lo > cur.hi + tol) {
            out.fail(k, "round " + std::to_string(r) + " leaves the previous interval");
          }
        }
      }
    }
  }
  return out;
}

inline Outcome complements_monotone(std::size_t n, std::uint64_t seed) {
  Outcome out;
  for (std::uint64_t k = 0; k < n && out.ok; ++k) {
    std::mt19937_64 rng = sample_rng(seed, k);
    const IterationTrace tr = solve(random_bertrand(rng), 25, 1e-12, 7);
    ++out.samples;
    for (std::size_t r = 0; r < tr.rounds.size(); ++r) {
      for (const PlayerBounds& pb : tr.rounds[r].players) {
        for (std::size_t t = 1; t < pb.grid.size(); ++t) {
          if (pb.intervals[t].lo < pb.intervals[t - 1].lo - 1e-12 || pb.intervals[t].hi < pb.intervals[t - 1].hi - 1e-12) {
            out.fail(k, "bounds decrease in theta at round " + std::to_string(r));
          }
        }
      }
    }
  }
  return out;
}

// Higher own parameter and a dominating composite move the best response up under
// complements and down under substitutes.
inline Outcome best_response_monotone(std::size_t n, std::uint64_t seed) {
  Outcome out;
  for (std::uint64_t k = 0; k < n && out.ok; ++k) {
    const GameSpec g = random_game(seed, k);
    const OrderedQuadruple q = ordered_quadruple(g, seed + 1, k);
    const Interval feasible = g.player(q.player).choices;
    const double low = best_response(g, q.player, q.theta, q.beta, q.f, feasible).choice;
    const double high = best_response(g, q.player, q.theta2, q.beta2, q.f2, feasible).choice;
    const double tol = 1e-9 * std::max(1.0, feasible.width());
    ++out.samples;
    const bool ok = g.mode() == Mode::Complements ? high >= low - tol : high <= low + tol;
    if (!ok) {
      std::ostringstream os;
      os.precision(17);
      os << "best responses " << low << " -> " << high << " move against the mode";
      out.fail(k, os.str());
    }
  }
  return out;
}

inline Outcome differences_hold(const GameSpec& g, std::size_t n, std::uint64_t seed) {
  Outcome out;
  const AssumptionReport r = check_increasing_differences(g, n, seed);
  out.samples = r.checks.front().evaluated;
  if (r.any_fail()) out.fail(0, r.checks.front().detail);
  return out;
}

inline Outcome expectation_dominance(std::size_t trials, std::size_t max_vars, std::uint64_t seed) {
  Outcome out;
  for (std::size_t v = 1; v <= max_vars && out.ok; ++v) {
    const AssumptionReport r = check_expectation_dominance(trials, v, seed);
    out.samples += r.checks.front().evaluated;
    if (r.any_fail()) out.fail(0, "n_vars " + std::to_string(v) + " violates the inequality");
  }
  return out;
}

}  // namespace suites
