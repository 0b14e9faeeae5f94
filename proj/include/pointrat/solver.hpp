#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pointrat/choice_belief.hpp"
#include "pointrat/composite.hpp"
#include "pointrat/density.hpp"
#include "pointrat/error.hpp"
#include "pointrat/game.hpp"
#include "pointrat/golden_section.hpp"
#include "pointrat/interval.hpp"
#include "pointrat/piecewise.hpp"
#include "pointrat/quadrature.hpp"

namespace pointrat {

enum class Side { Low, High };

inline const char* to_string(Side s) { return s == Side::Low ? "low" : "high"; }

inline std::vector<double> uniform_grid(const Interval& iv, std::size_t n) {
  if (n < 2) throw ArgumentError("grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = iv.lo + iv.width() * static_cast<double>(k) / static_cast<double>(n - 1);
  g.back() = iv.hi;
  return g;
}

// Bounds of one player's surviving choices, sampled on a parameter grid. For
// quadratic games the bound functions are also kept exactly.
struct PlayerBounds {
  std::vector<double> grid;
  std::vector<Interval> intervals;
  std::optional<PiecewiseFunction> lower_exact;
  std::optional<PiecewiseFunction> upper_exact;

  bool exact() const { return lower_exact.has_value() && upper_exact.has_value(); }

  PiecewiseFunction lower_function() const {
    if (lower_exact) return *lower_exact;
    std::vector<double> v;
    for (const Interval& iv : intervals) v.push_back(iv.lo);
    return PiecewiseFunction::interpolate(grid, v);
  }

  PiecewiseFunction upper_function() const {
    if (upper_exact) return *upper_exact;
    std::vector<double> v;
    for (const Interval& iv : intervals) v.push_back(iv.hi);
    return PiecewiseFunction::interpolate(grid, v);
  }

  PiecewiseFunction bound_function(bool upper) const { return upper ? upper_function() : lower_function(); }

  // Surviving interval at any parameter value; exact when available, else interpolated.
  Interval at(double theta) const {
    if (exact()) return {(*lower_exact)(theta), (*upper_exact)(theta)};
    return {lower_function()(theta), upper_function()(theta)};
  }
};

struct BoundProfile {
  std::vector<PlayerBounds> players;
};

// Round 0: every choice survives.
inline BoundProfile initial_profile(const GameSpec& g, std::size_t grid_size) {
  BoundProfile out;
  const bool exact = g.is_quadratic();
  for (const PlayerSpec& p : g.players()) {
    PlayerBounds b;
    b.grid = uniform_grid(p.parameters, grid_size);
    b.intervals.assign(b.grid.size(), p.choices);
    if (exact) {
      b.lower_exact = PiecewiseFunction::constant(p.parameters.lo, p.parameters.hi, p.choices.lo);
      b.upper_exact = PiecewiseFunction::constant(p.parameters.lo, p.parameters.hi, p.choices.hi);
    }
    out.players.push_back(std::move(b));
  }
  return out;
}

namespace detail {

inline void check_belief_inputs(const GameSpec& g, std::size_t i, const std::vector<ChoiceBelief>& betas,
                                const std::vector<Density>& fs) {
  const auto opp = g.opponents(i);
  if (betas.size() != opp.size() || fs.size() != opp.size()) {
    throw ArgumentError("one choice belief and one density per opponent required");
  }
  for (std::size_t k = 0; k < opp.size(); ++k) {
    const PlayerSpec& q = g.player(opp[k]);
    if (!same_interval(betas[k].domain(), q.parameters) || !same_interval(fs[k].domain(), q.parameters)) {
      std::ostringstream os;
      os << "beliefs about player " << opp[k] + 1 << " must live on " << q.parameters;
      throw DomainError(os.str());
    }
    if (!same_interval(betas[k].choices(), q.choices)) {
      std::ostringstream os;
      os << "choice belief about player " << opp[k] + 1 << " must map into " << q.choices;
      throw DomainError(os.str());
    }
  }
}

inline std::vector<double> opponent_means(const std::vector<ChoiceBelief>& betas, const std::vector<Density>& fs) {
  std::vector<double> m;
  for (std::size_t k = 0; k < betas.size(); ++k) m.push_back(fs[k].expectation(betas[k].map()));
  return m;
}

inline void check_own(const PlayerSpec& p, std::size_t i, double theta) {
  if (!p.parameters.contains(theta, p.parameters.slack())) {
    std::ostringstream os;
    os << "player " << i + 1 << ": parameter " << theta << " outside " << p.parameters;
    throw DomainError(os.str());
  }
}

// Expected utility of a blackbox player as a function of own choice.
class BlackboxObjective {
 public:
  BlackboxObjective(const Blackbox& u, double theta, const std::vector<ChoiceBelief>& betas,
                    const std::vector<Density>& fs)
      : u_(u), theta_(theta) {
    for (std::size_t k = 0; k < betas.size(); ++k) {
      const std::vector<double> xs = merge_breakpoints(betas[k].map().breakpoints(), fs[k].breakpoints());
      std::vector<QuadCell> cells;
      std::vector<Piece> pieces;
      for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        const double m = 0.5 * (xs[j] + xs[j + 1]);
        cells.push_back({xs[j], xs[j + 1], fs[k].values()[fs[k].piece_index(m)]});
        pieces.push_back(betas[k].map().pieces()[betas[k].map().piece_index(m)]);
      }
      cells_.push_back(std::move(cells));
      pieces_.push_back(std::move(pieces));
    }
  }

  double operator()(double c) const {
    std::vector<double> others(cells_.size());
    return tensor_simpson(cells_, [&](std::span<const double> x, std::span<const std::size_t> cell) {
      for (std::size_t k = 0; k < others.size(); ++k) others[k] = pieces_[k][cell[k]](x[k]);
      return u_.eval(theta_, c, others);
    });
  }

 private:
  const Blackbox& u_;
  double theta_;
  std::vector<std::vector<QuadCell>> cells_;
  std::vector<std::vector<Piece>> pieces_;
};

}  // namespace detail

// Expected utility of player i at (theta, c) when opponent k plays betas[k] and has
// parameters distributed by fs[k], independently across opponents.
inline double expected_utility(const GameSpec& g, std::size_t i, double theta, double c,
                               const std::vector<ChoiceBelief>& betas, const std::vector<Density>& fs) {
  if (i >= g.size()) throw ArgumentError("player index out of range");
  const PlayerSpec& p = g.player(i);
  detail::check_own(p, i, theta);
  if (!p.choices.contains(c, p.choices.slack())) {
    std::ostringstream os;
    os << "player " << i + 1 << ": choice " << c << " outside " << p.choices;
    throw DomainError(os.str());
  }
  detail::check_belief_inputs(g, i, betas, fs);
  if (const auto* q = std::get_if<QuadraticOwnChoice>(&p.utility)) {
    // Multi-affine in independent opponent choices, so the expectation is the
    // utility at the opponents' mean choices.
    const std::vector<double> m = detail::opponent_means(betas, fs);
    return (q->quadratic.contract(m)(theta) * c + q->linear.contract(m)(theta)) * c + q->constant.contract(m)(theta);
  }
  return detail::BlackboxObjective(std::get<Blackbox>(p.utility), theta, betas, fs)(c);
}

struct BestResponse {
  double choice;     // maximizer over the feasible interval
  double unclipped;  // unconstrained maximizer when known in closed form, else equal to choice
  bool clipped;      // the maximizer sits on a feasible endpoint that binds
};

inline BestResponse best_response(const GameSpec& g, std::size_t i, double theta, const std::vector<ChoiceBelief>& betas,
                                  const std::vector<Density>& fs, const Interval& feasible) {
  if (i >= g.size()) throw ArgumentError("player index out of range");
  const PlayerSpec& p = g.player(i);
  detail::check_own(p, i, theta);
  make_interval(feasible.lo, feasible.hi, "feasible interval");
  const double s = p.choices.slack(1e-12);
  if (feasible.lo < p.choices.lo - s || feasible.hi > p.choices.hi + s) {
    std::ostringstream os;
    os << "feasible interval " << feasible << " is not inside choice interval " << p.choices;
    throw ArgumentError(os.str());
  }
  detail::check_belief_inputs(g, i, betas, fs);
  if (const auto* q = std::get_if<QuadraticOwnChoice>(&p.utility)) {
    const std::vector<double> m = detail::opponent_means(betas, fs);
    const double a = q->quadratic.contract(m)(theta);
    const double b = q->linear.contract(m)(theta);
    if (!(a < 0.0)) {
      throw AssumptionViolation("expected utility is not strictly concave in own choice",
                                {{"theta", theta}, {"quadratic_coefficient", a}});
    }
    const double x = -b / (2.0 * a);
    const double c = feasible.clamp(x);
    return {c, x, c != x};
  }
  const detail::BlackboxObjective obj(std::get<Blackbox>(p.utility), theta, betas, fs);
  probe_unimodal(obj, feasible.lo, feasible.hi);
  const Maximum best = golden_section_max(obj, feasible.lo, feasible.hi, 1e-10);
  const bool at_edge = feasible.width() > 0.0 &&
                       (best.x - feasible.lo <= 1e-9 || feasible.hi - best.x <= 1e-9);
  return {best.x, best.x, at_edge};
}

struct ExtremalInputs {
  std::vector<ChoiceBelief> beliefs;       // per opponent
  std::vector<Density> densities;          // per opponent
  std::vector<std::size_t> member_index;   // chosen family member per opponent
};

// Beliefs generating player i's highest (or lowest) surviving choice next round:
// each opponent's previous upper or lower bound function paired with the family
// member whose composite is stochastically largest (or smallest). Under substitutes
// the high choice answers the lowest opponent composite and vice versa.
inline ExtremalInputs extremal_composite_inputs(const GameSpec& g, std::size_t i, const BoundProfile& prev,
                                                Side which, double tol = kDefaultTol) {
  if (prev.players.size() != g.size()) throw ArgumentError("bound profile does not match the game");
  const bool use_upper = (which == Side::High) == (g.mode() == Mode::Complements);
  const bool want_top = use_upper;
  const auto opp = g.opponents(i);
  ExtremalInputs out;
  for (std::size_t k = 0; k < opp.size(); ++k) {
    const std::size_t j = opp[k];
    const BeliefFamily& fam = g.player(i).beliefs[k];
    ChoiceBelief beta(prev.players[j].bound_function(use_upper), g.player(j).choices);
    std::vector<CompositeBelief> comps;
    for (const Density& f : fam.members()) comps.push_back(pushforward(beta, f));

    std::vector<std::size_t> order{want_top ? fam.max_index() : fam.min_index()};
    for (std::size_t m = 0; m < fam.size(); ++m) {
      if (m != order.front()) order.push_back(m);
    }
    std::optional<std::size_t> chosen;
    std::size_t bad_other = 0;
    Comparison bad_cmp;
    for (std::size_t cand : order) {
      bool ok = true;
      for (std::size_t m = 0; m < fam.size() && ok; ++m) {
        if (m == cand) continue;
        const Comparison cmp = composite_compare(comps[cand], comps[m], tol);
        ok = want_top ? cmp.first_dominates() : cmp.second_dominates();
        if (!ok && cand == order.front()) {
          bad_other = m;
          bad_cmp = cmp;
        }
      }
      if (ok) {
        chosen = cand;
        break;
      }
    }
    if (!chosen) {
      std::ostringstream os;
      os << "player " << i + 1 << ": no belief about player " << j + 1 << " yields a "
         << (want_top ? "largest" : "smallest") << " composite; members " << order.front() << " and " << bad_other
         << " are incomparable";
      Witness w{{"member", static_cast<double>(order.front())}, {"other_member", static_cast<double>(bad_other)}};
      if (bad_cmp.first_above_at) w.emplace_back("first_above_at", *bad_cmp.first_above_at);
      if (bad_cmp.second_above_at) w.emplace_back("second_above_at", *bad_cmp.second_above_at);
      throw AssumptionViolation(os.str(), std::move(w));
    }
    out.beliefs.push_back(std::move(beta));
    out.densities.push_back(fam.members()[*chosen]);
    out.member_index.push_back(*chosen);
  }
  return out;
}

struct ClippingEvent {
  std::size_t round;
  std::size_t player;
  double theta;
  Side side;
  double unclipped;
  double clipped;
};

namespace detail {

// Exact best-response function when the expected curvature is constant or
// proportional to theta; otherwise nullopt.
inline std::optional<PiecewiseFunction> exact_best_response(const PlayerSpec& p, const ExtremalInputs& in) {
  const auto* q = std::get_if<QuadraticOwnChoice>(&p.utility);
  if (!q) return std::nullopt;
  const std::vector<double> m = opponent_means(in.beliefs, in.densities);
  const ThetaAffine a = q->quadratic.contract(m);
  const ThetaAffine b = q->linear.contract(m);
  Piece piece;
  if (q->curvature_constant_in_theta()) {
    piece = {-b.c0 / (2.0 * a.c0), -b.c1 / (2.0 * a.c0), 0.0};
  } else if (q->curvature_proportional_to_theta() && (p.parameters.lo > 0.0 || p.parameters.hi < 0.0)) {
    piece = {-b.c1 / (2.0 * a.c1), 0.0, -b.c0 / (2.0 * a.c1)};
  } else {
    return std::nullopt;
  }
  return PiecewiseFunction::single(p.parameters.lo, p.parameters.hi, piece);
}

inline double bound_tol(const Interval& choices) { return 1e-9 * std::max(1.0, choices.width()); }

}  // namespace detail

// One round of elimination: each player's new bounds are best responses to the
// extremal composite beliefs, restricted to the previous round's surviving interval.
inline BoundProfile iterate_round(const GameSpec& g, const BoundProfile& prev,
                                  std::vector<ClippingEvent>* events = nullptr, std::size_t round = 0) {
  if (prev.players.size() != g.size()) throw ArgumentError("bound profile does not match the game");
  BoundProfile next;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const PlayerSpec& p = g.player(i);
    const PlayerBounds& old = prev.players[i];
    const ExtremalInputs hi_in = extremal_composite_inputs(g, i, prev, Side::High);
    const ExtremalInputs lo_in = extremal_composite_inputs(g, i, prev, Side::Low);
    PlayerBounds nb;
    nb.grid = old.grid;
    nb.intervals.resize(old.grid.size());

    auto record = [&](double theta, Side side, double unclipped, double clipped) {
      if (events) events->push_back({round, i, theta, side, unclipped, clipped});
    };

    std::optional<PiecewiseFunction> br_hi, br_lo;
    if (old.exact()) {
      br_hi = detail::exact_best_response(p, hi_in);
      br_lo = detail::exact_best_response(p, lo_in);
    }
    if (br_hi && br_lo) {
      nb.upper_exact = clamp_between(*br_hi, *old.lower_exact, *old.upper_exact);
      nb.lower_exact = clamp_between(*br_lo, *old.lower_exact, *old.upper_exact);
      for (std::size_t k = 0; k < nb.grid.size(); ++k) {
        const double t = nb.grid[k];
        nb.intervals[k] = {(*nb.lower_exact)(t), (*nb.upper_exact)(t)};
        const double s = 1e-12 * std::max(1.0, std::abs((*br_hi)(t)));
        if (std::abs((*br_hi)(t) - nb.intervals[k].hi) > s) record(t, Side::High, (*br_hi)(t), nb.intervals[k].hi);
        if (std::abs((*br_lo)(t) - nb.intervals[k].lo) > s) record(t, Side::Low, (*br_lo)(t), nb.intervals[k].lo);
      }
    } else {
      for (std::size_t k = 0; k < nb.grid.size(); ++k) {
        const double t = nb.grid[k];
        const BestResponse h = best_response(g, i, t, hi_in.beliefs, hi_in.densities, old.intervals[k]);
        const BestResponse l = best_response(g, i, t, lo_in.beliefs, lo_in.densities, old.intervals[k]);
        if (h.clipped) record(t, Side::High, h.unclipped, h.choice);
        if (l.clipped) record(t, Side::Low, l.unclipped, l.choice);
        nb.intervals[k] = {l.choice, h.choice};
      }
    }

    // Nesting and ordering; rounding-level excursions are absorbed by intersecting.
    const double tol = detail::bound_tol(p.choices);
    for (std::size_t k = 0; k < nb.grid.size(); ++k) {
      Interval& iv = nb.intervals[k];
      const Interval& was = old.intervals[k];
      const double escape = std::max(was.lo - iv.lo, iv.hi - was.hi);
      if (escape > 1e-6) {
        std::ostringstream os;
        os << "player " << i + 1 << ": round bounds escape the previous interval by " << escape;
        throw ConsistencyError(os.str(), {{"theta", nb.grid[k]}, {"escape", escape}});
      }
      iv.lo = std::clamp(iv.lo, was.lo, was.hi);
      iv.hi = std::clamp(iv.hi, was.lo, was.hi);
      if (iv.lo > iv.hi + tol) {
        std::ostringstream os;
        os << "player " << i + 1 << ": lower bound exceeds upper bound";
        throw ConsistencyError(os.str(), {{"theta", nb.grid[k]}, {"lower", iv.lo}, {"upper", iv.hi}});
      }
      iv.hi = std::max(iv.hi, iv.lo);
    }
    // Bound functions move with the own parameter in the direction fixed by the mode.
    const double dir = g.mode() == Mode::Complements ? 1.0 : -1.0;
    for (std::size_t k = 1; k < nb.grid.size(); ++k) {
      const double dl = dir * (nb.intervals[k].lo - nb.intervals[k - 1].lo);
      const double du = dir * (nb.intervals[k].hi - nb.intervals[k - 1].hi);
      if (dl < -tol || du < -tol) {
        std::ostringstream os;
        os << "player " << i + 1 << ": bound functions are not " << (dir > 0 ? "increasing" : "decreasing")
           << " in the parameter as the declared mode requires";
        throw ConsistencyError(os.str(), {{"theta", nb.grid[k]}, {"lower_step", dir * dl}, {"upper_step", dir * du}});
      }
    }
    next.players.push_back(std::move(nb));
  }
  return next;
}

enum class Termination { MaxRounds, WidthTolerance, FixedPoint };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::MaxRounds: return "max-rounds";
    case Termination::WidthTolerance: return "width-tolerance";
    case Termination::FixedPoint: return "fixed-point";
  }
  return "?";
}

struct IterationTrace {
  std::vector<BoundProfile> rounds;  // rounds[0] is the full choice intervals
  std::vector<double> convergence;   // convergence[k-1]: max width change from round k-1 to k
  Termination terminated_by = Termination::MaxRounds;
  std::vector<ClippingEvent> clipping_events;

  const BoundProfile& final_profile() const { return rounds.back(); }
};

struct SolveOptions {
  std::size_t max_rounds = 200;
  double width_tol = 1e-12;
  std::size_t grid_size = 65;
};

inline IterationTrace solve(const GameSpec& g, const SolveOptions& opt = {}) {
  if (opt.max_rounds < 1) throw ArgumentError("max_rounds must be at least 1");
  if (!(opt.width_tol > 0.0)) throw ArgumentError("width_tol must be positive");
  if (opt.grid_size < 2) throw ArgumentError("grid_size must be at least 2");
  IterationTrace trace;
  trace.rounds.push_back(initial_profile(g, opt.grid_size));
  for (std::size_t k = 1; k <= opt.max_rounds; ++k) {
    BoundProfile next = iterate_round(g, trace.rounds.back(), &trace.clipping_events, k);
    const BoundProfile& prev = trace.rounds.back();
    double width_change = 0.0;
    bool same = true;
    for (std::size_t i = 0; i < next.players.size(); ++i) {
      for (std::size_t t = 0; t < next.players[i].intervals.size(); ++t) {
        const Interval& a = prev.players[i].intervals[t];
        const Interval& b = next.players[i].intervals[t];
        width_change = std::max(width_change, std::abs(b.width() - a.width()));
        same = same && a == b;
      }
    }
    trace.rounds.push_back(std::move(next));
    trace.convergence.push_back(width_change);
    if (same) {
      trace.terminated_by = Termination::FixedPoint;
      return trace;
    }
    if (width_change < opt.width_tol) {
      trace.terminated_by = Termination::WidthTolerance;
      return trace;
    }
  }
  trace.terminated_by = Termination::MaxRounds;
  return trace;
}

inline IterationTrace solve(const GameSpec& g, std::size_t max_rounds, double width_tol = 1e-12,
                            std::size_t grid_size = 65) {
  return solve(g, SolveOptions{max_rounds, width_tol, grid_size});
}

}  // namespace pointrat
