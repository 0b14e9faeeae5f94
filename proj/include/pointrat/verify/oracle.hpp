#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "pointrat/game.hpp"
#include "pointrat/solver.hpp"

// Brute-force point rationalizability on finite grids, used to cross-check the
// extremal-belief solver.
namespace pointrat::verify {

struct DiscretePlayer {
  std::vector<double> choices;
  std::vector<double> parameters;
  // masses[k][m][t]: probability that opponent k has parameter grid point t under member m.
  std::vector<std::vector<std::vector<double>>> masses;
};

struct DiscretizedGame {
  GameSpec game;
  std::vector<DiscretePlayer> players;

  DiscretizedGame(GameSpec g, std::vector<DiscretePlayer> ps) : game(std::move(g)), players(std::move(ps)) {
    if (players.size() != game.size()) throw ArgumentError("one discrete player per game player required");
    for (std::size_t i = 0; i < players.size(); ++i) {
      const DiscretePlayer& d = players[i];
      const PlayerSpec& p = game.player(i);
      check_grid(d.choices, p.choices, "choice");
      check_grid(d.parameters, p.parameters, "parameter");
      const auto opp = game.opponents(i);
      if (d.masses.size() != opp.size()) throw ArgumentError("one member list per opponent required");
      for (std::size_t k = 0; k < opp.size(); ++k) {
        if (d.masses[k].empty()) throw ArgumentError("each opponent needs at least one belief member");
        for (const auto& m : d.masses[k]) {
          if (m.size() != players[opp[k]].parameters.size()) {
            throw ArgumentError("member masses must match the opponent's parameter grid");
          }
        }
      }
    }
  }

 private:
  static void check_grid(const std::vector<double>& xs, const Interval& iv, const char* what) {
    if (xs.empty()) throw ArgumentError(std::string(what) + " grid is empty");
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (!iv.contains(xs[k], iv.slack())) throw ArgumentError(std::string(what) + " grid leaves its interval");
      if (k > 0 && !(xs[k] > xs[k - 1])) throw ArgumentError(std::string(what) + " grid must be increasing");
    }
  }
};

// Uniform grids; each member density contributes the mass of the cell around each
// parameter grid point (cells split halfway between neighbouring points).
inline DiscretizedGame discretize(const GameSpec& g, std::size_t n_choices, std::size_t n_params) {
  if (n_choices < 1 || n_params < 2) throw ArgumentError("need at least one choice and two parameter points");
  std::vector<DiscretePlayer> ps;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const PlayerSpec& p = g.player(i);
    DiscretePlayer d;
    d.choices = n_choices == 1 ? std::vector<double>{p.choices.mid()} : uniform_grid(p.choices, n_choices);
    d.parameters = uniform_grid(p.parameters, n_params);
    ps.push_back(std::move(d));
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto opp = g.opponents(i);
    for (std::size_t k = 0; k < opp.size(); ++k) {
      const std::vector<double>& t = ps[opp[k]].parameters;
      std::vector<std::vector<double>> members;
      for (const Density& f : g.player(i).beliefs[k].members()) {
        std::vector<double> m;
        for (std::size_t s = 0; s < t.size(); ++s) {
          const double lo = s == 0 ? t.front() : 0.5 * (t[s - 1] + t[s]);
          const double hi = s + 1 == t.size() ? t.back() : 0.5 * (t[s] + t[s + 1]);
          m.push_back(f.cdf(hi) - f.cdf(lo));
        }
        members.push_back(std::move(m));
      }
      ps[i].masses.push_back(std::move(members));
    }
  }
  return {g, std::move(ps)};
}

enum class OracleSearch { Full, Reduced };

// survivors[i][t]: indices of player i's grid choices surviving at parameter grid point t.
using Survivors = std::vector<std::vector<std::vector<std::size_t>>>;

struct OracleResult {
  std::vector<Survivors> rounds;  // rounds[0]: every grid choice
};

namespace detail {

struct OracleContext {
  const DiscretizedGame& d;
  std::size_t player;
  std::size_t theta_index;
  const std::vector<std::size_t>& feasible;
};

// Expected utility of each feasible choice; beliefs[k][t] is opponent k's choice
// value at its parameter grid point t, members[k] the member used for opponent k.
inline std::vector<double> oracle_utilities(const OracleContext& ctx, const std::vector<std::vector<double>>& beliefs,
                                            const std::vector<std::size_t>& members) {
  const DiscretePlayer& me = ctx.d.players[ctx.player];
  const auto opp = ctx.d.game.opponents(ctx.player);
  const double theta = me.parameters[ctx.theta_index];
  std::vector<double> eu(ctx.feasible.size(), 0.0);
  std::vector<std::size_t> t(opp.size(), 0);
  std::vector<double> others(opp.size());
  for (;;) {
    double w = 1.0;
    for (std::size_t k = 0; k < opp.size(); ++k) {
      w *= me.masses[k][members[k]][t[k]];
      others[k] = beliefs[k][t[k]];
    }
    if (w > 0.0) {
      for (std::size_t a = 0; a < ctx.feasible.size(); ++a) {
        eu[a] += w * utility_eval(ctx.d.game, ctx.player, theta, me.choices[ctx.feasible[a]], others);
      }
    }
    std::size_t k = 0;
    while (k < opp.size() && ++t[k] == beliefs[k].size()) t[k++] = 0;
    if (k == opp.size()) break;
  }
  return eu;
}

inline void add_maximizers(const std::vector<double>& eu, const std::vector<std::size_t>& feasible,
                           std::vector<bool>& hit) {
  const double best = *std::max_element(eu.begin(), eu.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(best));
  for (std::size_t a = 0; a < eu.size(); ++a) {
    if (eu[a] >= best - tol) hit[feasible[a]] = true;
  }
}

// Visits every combination of family members across opponents.
template <class F>
void for_each_member_choice(const DiscretePlayer& me, F&& f) {
  std::vector<std::size_t> m(me.masses.size(), 0);
  for (;;) {
    f(m);
    std::size_t k = 0;
    while (k < m.size() && ++m[k] == me.masses[k].size()) m[k++] = 0;
    if (k == m.size()) break;
  }
}

}  // namespace detail

// Round k keeps a grid choice at a parameter grid point when it maximizes expected
// utility over the previous survivors for some point belief (each opponent grid
// parameter mapped to one of its surviving grid choices) and some family member.
//
// Full search enumerates every such belief. Reduced search only uses the beliefs
// that send every opponent to its smallest, or to its largest, surviving choice,
// and keeps every previous survivor between the smallest and largest maximizer found.
inline OracleResult oracle_rationalizable(const DiscretizedGame& d, std::size_t max_rounds,
                                          OracleSearch search = OracleSearch::Reduced,
                                          std::uint64_t budget = 5'000'000) {
  const GameSpec& g = d.game;
  OracleResult out;
  Survivors all;
  for (const DiscretePlayer& p : d.players) {
    std::vector<std::size_t> every(p.choices.size());
    for (std::size_t a = 0; a < every.size(); ++a) every[a] = a;
    all.emplace_back(p.parameters.size(), every);
  }
  out.rounds.push_back(std::move(all));

  std::uint64_t work = 0;
  auto spend = [&](std::uint64_t units) {
    work += units;
    if (work > budget) {
      std::ostringstream os;
      os << "oracle exceeded its budget of " << budget << " belief evaluations";
      throw ResourceError(os.str());
    }
  };

  for (std::size_t round = 1; round <= max_rounds; ++round) {
    const Survivors& prev = out.rounds.back();
    Survivors next(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const DiscretePlayer& me = d.players[i];
      const auto opp = g.opponents(i);
      for (std::size_t ti = 0; ti < me.parameters.size(); ++ti) {
        const std::vector<std::size_t>& feasible = prev[i][ti];
        std::vector<bool> hit(me.choices.size(), false);
        const detail::OracleContext ctx{d, i, ti, feasible};

        if (search == OracleSearch::Full) {
          // Odometer over (opponent, parameter point) -> surviving choice.
          std::vector<std::pair<std::size_t, std::size_t>> slots;
          for (std::size_t k = 0; k < opp.size(); ++k) {
            for (std::size_t t = 0; t < d.players[opp[k]].parameters.size(); ++t) slots.emplace_back(k, t);
          }
          std::vector<std::size_t> pick(slots.size(), 0);
          std::vector<std::vector<double>> beliefs(opp.size());
          for (std::size_t k = 0; k < opp.size(); ++k) beliefs[k].resize(d.players[opp[k]].parameters.size());
          for (;;) {
            for (std::size_t s = 0; s < slots.size(); ++s) {
              const auto [k, t] = slots[s];
              beliefs[k][t] = d.players[opp[k]].choices[prev[opp[k]][t][pick[s]]];
            }
            detail::for_each_member_choice(me, [&](const std::vector<std::size_t>& members) {
              spend(1);
              detail::add_maximizers(detail::oracle_utilities(ctx, beliefs, members), feasible, hit);
            });
            std::size_t s = 0;
            while (s < slots.size() && ++pick[s] == prev[opp[slots[s].first]][slots[s].second].size()) pick[s++] = 0;
            if (s == slots.size()) break;
          }
        } else {
          for (bool upper : {false, true}) {
            std::vector<std::vector<double>> beliefs;
            for (std::size_t j : opp) {
              std::vector<double> b;
              for (const auto& surv : prev[j]) b.push_back(d.players[j].choices[upper ? surv.back() : surv.front()]);
              beliefs.push_back(std::move(b));
            }
            detail::for_each_member_choice(me, [&](const std::vector<std::size_t>& members) {
              spend(1);
              detail::add_maximizers(detail::oracle_utilities(ctx, beliefs, members), feasible, hit);
            });
          }
          const auto first = std::find(hit.begin(), hit.end(), true);
          const auto last = std::find(hit.rbegin(), hit.rend(), true);
          const std::size_t lo = static_cast<std::size_t>(first - hit.begin());
          const std::size_t hi = hit.size() - 1 - static_cast<std::size_t>(last - hit.rbegin());
          for (std::size_t a : feasible) {
            if (a >= lo && a <= hi) hit[a] = true;
          }
        }
        std::vector<std::size_t> keep;
        for (std::size_t a : feasible) {
          if (hit[a]) keep.push_back(a);
        }
        next[i].push_back(std::move(keep));
      }
    }
    out.rounds.push_back(std::move(next));
  }
  return out;
}

struct OracleComparison {
  double max_deviation = 0.0;
  std::vector<double> per_round;  // per_round[k-1] for round k
  bool within_step = true;        // max_deviation <= choice_step (plus rounding)
};

// Largest distance between the solver's bounds and the extreme surviving grid choices,
// over all players, parameter grid points and rounds present in both.
inline OracleComparison compare_oracle(const IterationTrace& trace, const DiscretizedGame& d, const OracleResult& o,
                                       double choice_step) {
  if (trace.rounds.empty() || trace.rounds.front().players.size() != d.players.size()) {
    throw ArgumentError("trace and discretization describe different games");
  }
  for (std::size_t i = 0; i < d.players.size(); ++i) {
    const auto& tg = trace.rounds.front().players[i].grid;
    const auto& dg = d.players[i].parameters;
    bool same = tg.size() == dg.size();
    for (std::size_t t = 0; same && t < tg.size(); ++t) same = std::abs(tg[t] - dg[t]) <= 1e-12 * std::max(1.0, std::abs(dg[t]));
    if (!same) throw ArgumentError("trace and oracle use different parameter grids");
  }
  OracleComparison out;
  const std::size_t rounds = std::min(trace.rounds.size(), o.rounds.size());
  for (std::size_t k = 1; k < rounds; ++k) {
    double dev = 0.0;
    for (std::size_t i = 0; i < d.players.size(); ++i) {
      for (std::size_t t = 0; t < d.players[i].parameters.size(); ++t) {
        const auto& surv = o.rounds[k][i][t];
        if (surv.empty()) throw ConsistencyError("oracle eliminated every choice");
        const Interval& iv = trace.rounds[k].players[i].intervals[t];
        dev = std::max({dev, std::abs(iv.lo - d.players[i].choices[surv.front()]),
                        std::abs(iv.hi - d.players[i].choices[surv.back()])});
      }
    }
    out.per_round.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  out.within_step = out.max_deviation <= choice_step * (1.0 + 1e-12);
  return out;
}

// The oracle's surviving extremes as a bound trace on the same grids.
inline IterationTrace trace_from_oracle(const DiscretizedGame& d, const OracleResult& o) {
  IterationTrace tr;
  for (const Survivors& s : o.rounds) {
    BoundProfile bp;
    for (std::size_t i = 0; i < d.players.size(); ++i) {
      PlayerBounds pb;
      pb.grid = d.players[i].parameters;
      for (const auto& surv : s[i]) pb.intervals.push_back({d.players[i].choices[surv.front()], d.players[i].choices[surv.back()]});
      bp.players.push_back(std::move(pb));
    }
    tr.rounds.push_back(std::move(bp));
  }
  tr.terminated_by = Termination::MaxRounds;
  return tr;
}

// True when every round's survivors are subsets of the previous round's.
inline bool oracle_nested(const OracleResult& o) {
  for (std::size_t k = 1; k < o.rounds.size(); ++k) {
    for (std::size_t i = 0; i < o.rounds[k].size(); ++i) {
      for (std::size_t t = 0; t < o.rounds[k][i].size(); ++t) {
        const auto& a = o.rounds[k][i][t];
        const auto& b = o.rounds[k - 1][i][t];
        if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
      }
    }
  }
  return true;
}

}  // namespace pointrat::verify
