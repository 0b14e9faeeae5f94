#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pointrat/density.hpp"
#include "pointrat/error.hpp"
#include "pointrat/family.hpp"
#include "pointrat/interval.hpp"

namespace pointrat {

// Complements: increasing differences in own parameter and opponents' choices.
// Substitutes: decreasing differences in both.
enum class Mode { Complements, Substitutes };

inline const char* to_string(Mode m) { return m == Mode::Complements ? "complements" : "substitutes"; }

// c0 + c1 * theta
struct ThetaAffine {
  double c0 = 0.0;
  double c1 = 0.0;
  double operator()(double theta) const { return c0 + c1 * theta; }
};

// Sum of theta-affine coefficients times products of opponent choices. Bit j of a
// term's mask selects the j-th opponent (in GameSpec::opponents order).
struct MultiAffine {
  struct Term {
    std::uint32_t mask = 0;
    ThetaAffine coef;
  };
  std::vector<Term> terms;

  static MultiAffine constant(ThetaAffine coef) { return {{{0u, coef}}}; }

  MultiAffine& add(std::uint32_t mask, ThetaAffine coef) {
    terms.push_back({mask, coef});
    return *this;
  }

  double operator()(double theta, std::span<const double> c) const {
    double acc = 0.0;
    for (const Term& t : terms) {
      double v = t.coef(theta);
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (t.mask >> j & 1u) v *= c[j];
      }
      acc += v;
    }
    return acc;
  }

  // Collapses the opponent choices to fixed values, leaving a function of theta.
  // With independent opponents this turns the expectation into evaluation at the means.
  ThetaAffine contract(std::span<const double> c) const {
    ThetaAffine out;
    for (const Term& t : terms) {
      double w = 1.0;
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (t.mask >> j & 1u) w *= c[j];
      }
      out.c0 += w * t.coef.c0;
      out.c1 += w * t.coef.c1;
    }
    return out;
  }

  std::uint32_t used_mask() const {
    std::uint32_t m = 0;
    for (const Term& t : terms) m |= t.mask;
    return m;
  }
};

// u = A c^2 + B c + D with A, B, D multi-affine in the opponents' choices.
struct QuadraticOwnChoice {
  MultiAffine quadratic;
  MultiAffine linear;
  MultiAffine constant;

  double operator()(double theta, double c, std::span<const double> others) const {
    return (quadratic(theta, others) * c + linear(theta, others)) * c + constant(theta, others);
  }

  // True when the own-choice curvature does not depend on theta.
  bool curvature_constant_in_theta() const {
    for (const auto& t : quadratic.terms) {
      if (t.coef.c1 != 0.0) return false;
    }
    return true;
  }

  // True when the own-choice curvature is proportional to theta.
  bool curvature_proportional_to_theta() const {
    for (const auto& t : quadratic.terms) {
      if (t.coef.c0 != 0.0) return false;
    }
    return true;
  }
};

using BlackboxUtility = std::function<double(double theta, double c, std::span<const double> others)>;

struct Blackbox {
  BlackboxUtility eval;
};

using UtilitySpec = std::variant<QuadraticOwnChoice, Blackbox>;

struct PlayerSpec {
  Interval choices;
  Interval parameters;
  std::vector<BeliefFamily> beliefs;  // one per opponent, in GameSpec::opponents order
  UtilitySpec utility;
};

class GameSpec {
 public:
  GameSpec(std::vector<PlayerSpec> players, Mode mode) : players_(std::move(players)), mode_(mode) { validate(); }

  std::size_t size() const { return players_.size(); }
  Mode mode() const { return mode_; }
  const PlayerSpec& player(std::size_t i) const { return players_.at(i); }
  const std::vector<PlayerSpec>& players() const { return players_; }

  std::vector<std::size_t> opponents(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < players_.size(); ++j) {
      if (j != i) out.push_back(j);
    }
    return out;
  }

  bool is_quadratic() const {
    for (const auto& p : players_) {
      if (!std::holds_alternative<QuadraticOwnChoice>(p.utility)) return false;
    }
    return true;
  }

 private:
  void validate() const;

  std::vector<PlayerSpec> players_;
  Mode mode_;
};

namespace detail {

inline void check_interval(const Interval& iv, const std::string& what) {
  make_interval(iv.lo, iv.hi, what);
}

}  // namespace detail

inline void GameSpec::validate() const {
  const std::size_t n = players_.size();
  if (n < 2) throw ArgumentError("a game needs at least two players");
  if (n > 31) throw ArgumentError("at most 31 players are supported");
  for (std::size_t i = 0; i < n; ++i) {
    const PlayerSpec& p = players_[i];
    const std::string who = "player " + std::to_string(i + 1);
    detail::check_interval(p.choices, who + " choice interval");
    detail::check_interval(p.parameters, who + " parameter interval");
    if (p.beliefs.size() != n - 1) {
      throw ArgumentError(who + ": one belief family per opponent required");
    }
    const auto opp = opponents(i);
    for (std::size_t k = 0; k < opp.size(); ++k) {
      const Interval want = players_[opp[k]].parameters;
      if (!same_interval(p.beliefs[k].domain(), want)) {
        std::ostringstream os;
        os << who << ": belief family about player " << opp[k] + 1 << " lives on " << p.beliefs[k].domain()
           << " but that player's parameters lie in " << want;
        throw DomainError(os.str());
      }
      family_extremes(p.beliefs[k]);
    }
    if (const auto* q = std::get_if<QuadraticOwnChoice>(&p.utility)) {
      const std::uint32_t limit = (n - 1) >= 32 ? ~0u : ((1u << (n - 1)) - 1u);
      const std::uint32_t used = q->quadratic.used_mask() | q->linear.used_mask() | q->constant.used_mask();
      if (used & ~limit) throw ArgumentError(who + ": utility refers to a nonexistent opponent");
      // A is affine in theta and in each opponent choice, so its maximum sits at a box vertex.
      const std::size_t dims = n;  // theta plus n - 1 opponents
      std::vector<double> c(n - 1);
      for (std::uint32_t v = 0; v < (1u << dims); ++v) {
        const double theta = (v & 1u) ? p.parameters.hi : p.parameters.lo;
        for (std::size_t k = 0; k < opp.size(); ++k) {
          const Interval& ck = players_[opp[k]].choices;
          c[k] = (v >> (k + 1) & 1u) ? ck.hi : ck.lo;
        }
        const double a = q->quadratic(theta, c);
        if (!(a < 0.0)) {
          Witness w{{"theta", theta}};
          for (std::size_t k = 0; k < opp.size(); ++k) w.emplace_back("c" + std::to_string(opp[k] + 1), c[k]);
          std::ostringstream os;
          os << who << ": quadratic coefficient " << a << " is not negative at theta = " << theta;
          throw AssumptionViolation(os.str(), std::move(w));
        }
      }
    }
  }
}

inline double utility_eval(const GameSpec& g, std::size_t i, double theta, double c, std::span<const double> others) {
  if (i >= g.size()) throw ArgumentError("player index out of range");
  const PlayerSpec& p = g.player(i);
  const auto who = [&] { return "player " + std::to_string(i + 1); };
  if (!p.parameters.contains(theta, p.parameters.slack())) {
    std::ostringstream os;
    os << who() << ": parameter " << theta << " outside " << p.parameters;
    throw DomainError(os.str());
  }
  if (!p.choices.contains(c, p.choices.slack())) {
    std::ostringstream os;
    os << who() << ": choice " << c << " outside " << p.choices;
    throw DomainError(os.str());
  }
  const auto opp = g.opponents(i);
  if (others.size() != opp.size()) throw ArgumentError(who() + ": wrong number of opponent choices");
  for (std::size_t k = 0; k < opp.size(); ++k) {
    const Interval& ck = g.player(opp[k]).choices;
    if (!ck.contains(others[k], ck.slack())) {
      std::ostringstream os;
      os << "player " << opp[k] + 1 << " choice " << others[k] << " outside " << ck;
      throw DomainError(os.str());
    }
  }
  return std::visit(
      [&](const auto& u) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(u)>, QuadraticOwnChoice>) {
          return u(theta, c, others);
        } else {
          return u.eval(theta, c, others);
        }
      },
      p.utility);
}

// Two-valued step family on [lo, hi]: height alpha on the lower half, 2/(hi-lo) - alpha
// on the upper half. alpha = 0 is stochastically largest, alpha = 2/(hi-lo) smallest.
inline BeliefFamily halves_family(double lo, double hi) {
  const double w = hi - lo;
  const double mid = lo + 0.5 * w;
  std::vector<Density> members;
  for (double alpha : {0.0, 1.0 / w, 2.0 / w}) {
    members.emplace_back(std::vector<double>{lo, mid, hi}, std::vector<double>{alpha, 2.0 / w - alpha});
  }
  return {std::move(members), 0, 2};
}

// Differentiated-products price competition with private marginal cost theta:
// u = (p_i - theta)(a - p_i + p_j).
inline GameSpec bertrand_game(double a, double phi, double p_bar) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("bertrand: a must be positive");
  if (!(phi > 0.0) || !std::isfinite(phi)) throw ArgumentError("bertrand: phi must be positive");
  if (!(p_bar >= a + phi) || !std::isfinite(p_bar)) {
    std::ostringstream os;
    os << "bertrand: p_bar = " << p_bar << " must be at least a + phi = " << a + phi;
    throw ArgumentError(os.str());
  }
  QuadraticOwnChoice u;
  u.quadratic = MultiAffine::constant({-1.0, 0.0});
  u.linear = MultiAffine::constant({a, 1.0}).add(1u, {1.0, 0.0});
  u.constant = MultiAffine::constant({0.0, -a}).add(1u, {0.0, -1.0});
  std::vector<PlayerSpec> players;
  for (int k = 0; k < 2; ++k) {
    players.push_back({Interval{0.0, p_bar}, Interval{0.0, phi}, {halves_family(0.0, phi)}, u});
  }
  return {std::move(players), Mode::Complements};
}

// Quantity competition with private demand slope theta:
// u = (a - theta (q_i + q_j) - c) q_i.
inline GameSpec cournot_game(double a, double c, double phi_lo, double phi_hi, double q_bar) {
  if (!std::isfinite(a) || !std::isfinite(c) || !(a > c) || !(c >= 0.0)) {
    throw ArgumentError("cournot: requires a > c >= 0");
  }
  if (!std::isfinite(phi_lo) || !std::isfinite(phi_hi) || !(phi_lo > 0.0) || !(phi_lo < phi_hi)) {
    throw ArgumentError("cournot: requires 0 < phi_lo < phi_hi");
  }
  const double interior = (a - c) / (2.0 * phi_lo);
  if (!std::isfinite(q_bar) || !(q_bar >= interior)) {
    std::ostringstream os;
    os << "cournot: q_bar = " << q_bar << " must be at least (a - c)/(2 phi_lo) = " << interior;
    throw ArgumentError(os.str());
  }
  QuadraticOwnChoice u;
  u.quadratic = MultiAffine::constant({0.0, -1.0});
  u.linear = MultiAffine::constant({a - c, 0.0}).add(1u, {0.0, -1.0});
  u.constant = MultiAffine::constant({0.0, 0.0});
  std::vector<PlayerSpec> players;
  for (int k = 0; k < 2; ++k) {
    players.push_back({Interval{0.0, q_bar}, Interval{phi_lo, phi_hi}, {halves_family(phi_lo, phi_hi)}, u});
  }
  return {std::move(players), Mode::Substitutes};
}

}  // namespace pointrat
