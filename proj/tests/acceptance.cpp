// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pointrat/closed_forms.hpp"
#include "pointrat/pointrat.hpp"
#include "property_suites.hpp"

using namespace pointrat;
using namespace pointrat::verify;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Solver rounds 1..20 against the price-game closed form, then the limit after 60 rounds.
Verdict criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  double round_gap = 0.0, limit_gap = 0.0;
  for (auto [a, phi, p_bar] : {std::tuple{1.0, 1.0, 3.0}, {2.0, 0.5, 4.0}, {5.0, 2.0, 10.0}}) {
    const IterationTrace tr = solve(bertrand_game(a, phi, p_bar), 60, 1e-300, 65);
    for (int k = 1; k <= 20; ++k) {
      for (double t : {0.0, phi / 2.0, phi}) {
        for (const PlayerBounds& pb : tr.rounds[k].players) {
          const Interval s = pb.at(t);
          const Interval cf = bertrand_round_interval(k, a, phi, p_bar, t);
          round_gap = std::max({round_gap, std::abs(s.lo - cf.lo), std::abs(s.hi - cf.hi)});
        }
      }
    }
    for (double t : {0.0, phi / 2.0, phi}) {
      const Interval s = tr.final_profile().players[0].at(t);
      const Interval lim = bertrand_limit_interval(a, phi, t);
      limit_gap = std::max({limit_gap, std::abs(s.lo - lim.lo), std::abs(s.hi - lim.hi)});
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {round_gap <= 1e-9 && limit_gap <= 1e-9 && secs < 5.0,
          "max round gap " + fmt(round_gap) + ", limit gap " + fmt(limit_gap) + " (tol 1e-9), " + fmt(secs) + " s"};
}

// Quantity game at (10, 2, 1, 3, 8): rounds 1..20 against the even/odd closed forms,
// round 2 separately, and the limit.
Verdict criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const double a = 10.0, c = 2.0, lo = 1.0, hi = 3.0, q_bar = 8.0;
  const IterationTrace tr = solve(cournot_game(a, c, lo, hi, q_bar), 200, 1e-300, 65);
  double round_gap = 0.0, round2_gap = 0.0, limit_gap = 0.0;
  int worst_k = 0, last_bad_k = 0;
  for (int k = 1; k <= 20; ++k) {
    for (double t : {1.0, 2.0, 3.0}) {
      const Interval s = tr.rounds[k].players[0].at(t);
      const Interval cf = cournot_round_interval(k, a, c, lo, hi, q_bar, t);
      const double gap = std::max(std::abs(s.lo - cf.lo), std::abs(s.hi - cf.hi));
      if (k == 2) round2_gap = std::max(round2_gap, gap);
      if (gap > 1e-7) last_bad_k = k;
      if (gap > round_gap) {
        round_gap = gap;
        worst_k = k;
      }
    }
  }
  for (double t : {1.0, 2.0, 3.0}) {
    const Interval s = tr.final_profile().players[0].at(t);
    const Interval lim = cournot_limit_interval(a, c, lo, hi, t);
    limit_gap = std::max({limit_gap, std::abs(s.lo - lim.lo), std::abs(s.hi - lim.hi)});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = "max round gap " + fmt(round_gap) + " at k=" + std::to_string(worst_k) + ", round-2 gap " +
                       fmt(round2_gap) + ", limit gap " + fmt(limit_gap) + " (tol 1e-7), " +
                       std::to_string(tr.clipping_events.size()) + " clipped bounds, " + fmt(secs) + " s";
  if (last_bad_k > 0) {
    detail += "; rounds up to k=" + std::to_string(last_bad_k) +
              " differ because the solver keeps quantities in [0, q_bar] while the closed form does not";
  }
  return {round_gap <= 1e-7 && limit_gap <= 1e-7 && secs < 10.0, detail};
}

Verdict criterion_3() {
  const std::vector<double> cuts{0.0, 0.3, 0.7, 1.0};
  const Density f_prime(cuts, {2.0 / 3.0, 0.25, 7.0 / 3.0});
  const Density f_plain(cuts, {1.0 / 3.0, 7.0 / 4.0, 2.0 / 3.0});
  const CompositeBelief p = pushforward(ChoiceBelief::step(cuts, {0.5, 0.3, 0.8}, {0.0, 1.0}), f_prime);
  const CompositeBelief q = pushforward(ChoiceBelief::step(cuts, {0.8, 0.2, 0.5}, {0.0, 1.0}), f_plain);
  // (threshold, survival at the threshold, survival just above it)
  const std::vector<std::tuple<double, double, double>> tp{{0.3, 1.0, 0.9}, {0.5, 0.9, 0.7}, {0.8, 0.7, 0.0}};
  const std::vector<std::tuple<double, double, double>> tq{{0.2, 1.0, 0.3}, {0.5, 0.3, 0.1}, {0.8, 0.1, 0.0}};
  double worst = 0.0;
  for (const auto& [c, at, above] : tp) worst = std::max({worst, std::abs(p.survival(c) - at), std::abs(p.survival_above(c) - above)});
  for (const auto& [c, at, above] : tq) worst = std::max({worst, std::abs(q.survival(c) - at), std::abs(q.survival_above(c) - above)});
  worst = std::max({worst, std::abs(p.survival(0.0) - 1.0), std::abs(q.survival(0.0) - 1.0)});
  const Relation dens = fosd_compare(f_prime, f_plain).relation;
  const Relation comp = composite_compare(p, q).relation;
  return {worst <= 1e-12 && dens == Relation::Incomparable && comp == Relation::Dominates,
          "table error " + fmt(worst) + " (tol 1e-12), densities " + to_string(dens) + ", composites " + to_string(comp)};
}

Verdict criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const GameSpec g = bertrand_game(1.0, 1.0, 3.0);
  const std::size_t n_choices = 9;
  const double step = 3.0 / static_cast<double>(n_choices - 1);
  const DiscretizedGame d = discretize(g, n_choices, 3);
  const OracleComparison cmp = compare_oracle(solve(g, 5, 1e-300, 3), d, oracle_rationalizable(d, 5), step);
  bool agree = true;
  std::size_t instances = 0;
  for (const GameSpec& h : {bertrand_game(1.0, 1.0, 3.0), bertrand_game(2.0, 0.5, 4.0), bertrand_game(5.0, 2.0, 10.0),
                            cournot_game(10.0, 2.0, 1.0, 3.0, 8.0), cournot_game(10.0, 2.0, 2.0, 3.0, 2.5)}) {
    for (std::size_t n : {2u, 3u, 4u}) {
      const DiscretizedGame m = discretize(h, n, 3);
      agree = agree && oracle_rationalizable(m, 6, OracleSearch::Full).rounds ==
                           oracle_rationalizable(m, 6, OracleSearch::Reduced).rounds;
      ++instances;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {cmp.within_step && cmp.per_round.size() == 5 && agree && secs < 30.0,
          "deviation " + fmt(cmp.max_deviation) + " vs step " + fmt(step) + " over rounds 1..5; full and reduced " +
              (agree ? "agree" : "DISAGREE") + " on " + std::to_string(instances) + " instances, " + fmt(secs) + " s"};
}

Verdict criterion_5() {
  constexpr std::size_t n = 500;
  constexpr std::uint64_t seed = 777;
  const std::vector<std::pair<std::string, suites::Outcome>> parts{
      {"nested", suites::rounds_nested(n, seed)},
      {"monotone in theta", suites::complements_monotone(n, seed + 1)},
      {"best response", suites::best_response_monotone(n, seed + 2)},
      {"differences (price)", suites::differences_hold(bertrand_game(1.0, 1.0, 3.0), n, seed + 3)},
      {"differences (quantity)", suites::differences_hold(cournot_game(10.0, 2.0, 1.0, 3.0, 8.0), n, seed + 4)},
      {"expectation", suites::expectation_dominance(200, 3, seed + 5)},
  };
  Verdict v;
  for (const auto& [name, o] : parts) {
    if (!v.detail.empty()) v.detail += ", ";
    v.detail += name + " " + std::to_string(o.samples);
    if (!o.ok) {
      v.pass = false;
      v.detail += " FAILED (" + o.failure + ")";
    }
  }
  return v;
}

Verdict criterion_6() {
  const GameSpec b = bertrand_game(1.0, 1.0, 3.0);
  const GameSpec c = cournot_game(10.0, 2.0, 1.0, 3.0, 8.0);
  AssumptionReport rb = check_cross_partials(b);
  rb.append(check_increasing_differences(b, 500, 1));
  AssumptionReport rc = check_cross_partials(c);
  rc.append(check_increasing_differences(c, 500, 1));
  const GameSpec mis(b.players(), Mode::Substitutes);
  AssumptionReport rm = check_cross_partials(mis);
  rm.append(check_increasing_differences(mis, 500, 1));
  bool witnessed = false;
  for (const auto& r : rm.checks) witnessed = witnessed || (r.status == Status::Fail && !r.witness.empty());

  double err = 0.0;
  for (const auto& s : cross_partial_samples(b, 9)) {
    err = std::max({err, std::abs(s.own_theta - 1.0), std::abs(s.own_opponent[0] - 1.0)});
  }
  for (const auto& s : cross_partial_samples(c, 9)) {
    err = std::max({err, std::abs(s.own_theta - (-2.0 * s.c - s.others[0])), std::abs(s.own_opponent[0] + s.theta)});
  }
  const bool pass = !rb.any_fail() && !rc.any_fail() && rm.any_fail() && witnessed && err <= 1e-4;
  return {pass, std::string("price ") + (rb.any_fail() ? "fails" : "passes") + ", quantity " +
                    (rc.any_fail() ? "fails" : "passes") + ", mislabeled " + (rm.any_fail() ? "fails" : "passes") +
                    (witnessed ? " with witness" : " without witness") + ", finite-difference error " + fmt(err) +
                    " (tol 1e-4)"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict criterion_7() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("pointrat_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool same = true;
  std::size_t files = 0;
  std::string note;
  for (const char* spec : {"bertrand.ini", "cournot.ini"}) {
    for (const char* format : {"csv", "jsonl"}) {
      std::vector<std::string> outs;
      for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / (std::string(spec) + "." + std::to_string(run) + "." + format);
        const std::string cmd = std::string(POINTRAT_CLI) + " solve --spec " + POINTRAT_SPECS + "/" + spec +
                                " --format " + format + " --out " + out.string() + " 2>/dev/null";
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
          same = false;
          note = std::string(" (solve failed on ") + spec + ")";
        }
        std::string all = slurp(out);
        if (std::string(format) == "csv") {
          const std::string stem = out.stem().string();
          all += slurp(dir / (stem + ".final.csv")) + slurp(dir / (stem + ".summary.csv"));
        }
        outs.push_back(all);
      }
      same = same && !outs[0].empty() && outs[0] == outs[1];
      ++files;
    }
  }
  fs::remove_all(dir);
  return {same, std::to_string(files) + " configurations solved twice, outputs " +
                    (same ? "byte-identical" : "DIFFER") + note};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"bertrand golden", criterion_1},   {"cournot golden", criterion_2}, {"dominance worked example", criterion_3},
      {"oracle equivalence", criterion_4}, {"property suites", criterion_5}, {"assumption checker", criterion_6},
      {"determinism", criterion_7},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::cout << "criterion " << k + 1 << " " << (v.pass ? "PASS" : "FAIL") << " " << criteria[k].first << ": "
              << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
