// Command-line driver: solve a game file, check its assumptions, compare two beliefs,
// or reproduce the closed-form rounds of the built-in games.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pointrat/closed_forms.hpp"
#include "pointrat/io/output.hpp"
#include "pointrat/io/spec_file.hpp"
#include "pointrat/solver.hpp"
#include "pointrat/verify/assumptions.hpp"

namespace {

using namespace pointrat;

enum Exit { kOk = 0, kParse = 2, kAssumption = 3, kNumeric = 4, kResource = 5 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string spec;
  std::string out;
  std::string format = "csv";
  std::size_t rounds = 200;
  double tol = 1e-12;
  std::size_t grid = 65;
  std::uint64_t seed = 1;
  std::size_t samples = 500;
  std::size_t lambda_grid = 11;
};

io::Format parse_format(const std::string& s) { return s == "jsonl" ? io::Format::Jsonl : io::Format::Csv; }

// Writes through `emit` to the given file, or to stdout when the path is empty.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  emit(os);
  os.flush();
  if (!os) throw IoError("write failed for " + path);
}

// out.csv -> out.final.csv
std::string sibling(const std::string& path, const std::string& tag) {
  std::filesystem::path p(path);
  const std::string ext = p.extension().string();
  p.replace_extension();
  return p.string() + "." + tag + ext;
}

void require_positive(const RunConfig& cfg) {
  if (cfg.rounds < 1) throw ArgumentError("--rounds must be at least 1");
  if (!(cfg.tol > 0.0)) throw ArgumentError("--tol must be positive");
  if (cfg.grid < 2) throw ArgumentError("--grid must be at least 2");
}

int cmd_solve(const RunConfig& cfg) {
  require_positive(cfg);
  const GameSpec g = io::load_game(cfg.spec);
  const IterationTrace tr = solve(g, SolveOptions{cfg.rounds, cfg.tol, cfg.grid});
  const io::Format f = parse_format(cfg.format);
  if (f == io::Format::Jsonl) {
    with_output(cfg.out, [&](std::ostream& os) {
      io::write_trace(os, tr, f);
      io::write_final(os, tr, f);
      io::write_summary(os, tr, f);
    });
  } else if (cfg.out.empty()) {
    with_output("", [&](std::ostream& os) {
      io::write_trace(os, tr, f);
      os << '\n';
      io::write_final(os, tr, f);
      os << '\n';
      io::write_summary(os, tr, f);
    });
  } else {
    with_output(cfg.out, [&](std::ostream& os) { io::write_trace(os, tr, f); });
    with_output(sibling(cfg.out, "final"), [&](std::ostream& os) { io::write_final(os, tr, f); });
    with_output(sibling(cfg.out, "summary"), [&](std::ostream& os) { io::write_summary(os, tr, f); });
  }
  return kOk;
}

int cmd_check(const RunConfig& cfg) {
  if (cfg.grid < 2) throw ArgumentError("--grid must be at least 2");
  if (cfg.samples < 1) throw ArgumentError("--samples must be at least 1");
  const GameSpec g = io::load_game(cfg.spec);  // validates every belief family
  verify::AssumptionReport report;
  std::size_t families = 0;
  for (const auto& p : g.players()) families += p.beliefs.size();
  report.checks.push_back({"belief family extremes", verify::Status::Pass,
                           "designated extremes dominate and are dominated by every member", {}, {{"tol", kDefaultTol}},
                           families, 0.0});
  report.append(verify::check_cross_partials(g, cfg.grid));
  report.append(verify::check_increasing_differences(g, cfg.samples, cfg.seed));
  report.append(verify::check_mixture_continuity(g, std::max<std::size_t>(1, cfg.samples / 10), cfg.lambda_grid, cfg.seed));
  with_output(cfg.out, [&](std::ostream& os) { io::write_report(os, report, parse_format(cfg.format)); });
  return report.any_fail() ? kAssumption : kOk;
}

int cmd_dominance(const RunConfig& cfg) {
  const io::DominanceInput in = io::load_dominance(cfg.spec);
  const CompositeBelief p = pushforward(in.first.belief, in.first.density);
  const CompositeBelief q = pushforward(in.second.belief, in.second.density);
  const Comparison densities = fosd_compare(in.first.density, in.second.density, in.tol);
  const Comparison composites = composite_compare(p, q, in.tol);
  const io::Format f = parse_format(cfg.format);
  with_output(cfg.out, [&](std::ostream& os) {
    if (f == io::Format::Csv) os << "kind,subject,threshold,at,above,relation\n";
    io::write_density_survival(os, "density1", in.first.density, f);
    io::write_density_survival(os, "density2", in.second.density, f);
    io::write_survival(os, "composite1", p, f);
    io::write_survival(os, "composite2", q, f);
    io::write_relation(os, "densities", densities, f);
    io::write_relation(os, "composites", composites, f);
  });
  return kOk;
}

struct ReproduceParams {
  std::string model;
  double a = 0.0, phi = 1.0, p_bar = 3.0;
  double c = 2.0, phi_lo = 1.0, phi_hi = 3.0, q_bar = 8.0;
  bool a_set = false;
};

int cmd_reproduce(const RunConfig& cfg, const ReproduceParams& rp) {
  if (cfg.rounds < 1) throw ArgumentError("--rounds must be at least 1");
  if (cfg.grid < 2) throw ArgumentError("--grid must be at least 2");
  const bool bertrand = rp.model == "bertrand";
  const double a = rp.a_set ? rp.a : (bertrand ? 1.0 : 10.0);
  const GameSpec g = bertrand ? bertrand_game(a, rp.phi, rp.p_bar) : cournot_game(a, rp.c, rp.phi_lo, rp.phi_hi, rp.q_bar);
  // Stop only on the round budget so every requested round is compared.
  const IterationTrace tr = solve(g, SolveOptions{cfg.rounds, 1e-300, 65});
  const double tol = bertrand ? 1e-9 : 1e-7;
  const Interval params = g.player(0).parameters;
  const std::vector<double> thetas = uniform_grid(params, cfg.grid);
  const io::Format f = parse_format(cfg.format);
  double max_gap = 0.0;
  std::ostringstream body;
  if (f == io::Format::Csv) body << "round,theta,solver_lower,solver_upper,closed_lower,closed_upper,gap_lower,gap_upper\n";
  for (std::size_t k = 1; k < tr.rounds.size(); ++k) {
    for (double t : thetas) {
      const Interval s = tr.rounds[k].players[0].at(t);
      const int kk = static_cast<int>(k);
      const Interval cf = bertrand ? bertrand_round_interval(kk, a, rp.phi, rp.p_bar, t)
                                   : cournot_round_interval(kk, a, rp.c, rp.phi_lo, rp.phi_hi, rp.q_bar, t);
      const double gl = std::abs(s.lo - cf.lo), gu = std::abs(s.hi - cf.hi);
      max_gap = std::max({max_gap, gl, gu});
      if (f == io::Format::Csv) {
        body << k << ',' << io::num(t) << ',' << io::num(s.lo) << ',' << io::num(s.hi) << ',' << io::num(cf.lo) << ','
             << io::num(cf.hi) << ',' << io::num(gl) << ',' << io::num(gu) << '\n';
      } else {
        body << nlohmann::json{{"type", "round"},        {"round", k},         {"theta", t},
                               {"solver_lower", s.lo},   {"solver_upper", s.hi}, {"closed_lower", cf.lo},
                               {"closed_upper", cf.hi},  {"gap_lower", gl},     {"gap_upper", gu}}
                    .dump()
             << '\n';
      }
    }
  }
  const bool ok = max_gap < tol;
  if (f == io::Format::Jsonl) {
    body << nlohmann::json{{"type", "summary"}, {"model", rp.model}, {"max_gap", max_gap}, {"tolerance", tol}, {"ok", ok}}
                .dump()
         << '\n';
  }
  with_output(cfg.out, [&](std::ostream& os) { os << body.str(); });
  if (!ok) {
    std::cerr << "numeric-error: largest gap to the closed form is " << io::num(max_gap) << ", tolerance "
              << io::num(tol) << '\n';
    return kNumeric;
  }
  return kOk;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::Argument:
    case ErrorKind::Domain: return kParse;
    case ErrorKind::AssumptionViolation: return kAssumption;
    case ErrorKind::Numeric:
    case ErrorKind::Consistency: return kNumeric;
    case ErrorKind::Resource: return kResource;
  }
  return kNumeric;
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-rationalizable choice sets for games with strategic complements or substitutes"};
  app.require_subcommand(1);
  RunConfig solve_cfg, check_cfg, dom_cfg, rep_cfg;
  check_cfg.grid = 9;
  rep_cfg.rounds = 20;
  rep_cfg.grid = 3;
  ReproduceParams rp;

  auto common = [](CLI::App* sub, RunConfig& cfg, bool needs_spec) {
    auto* spec = sub->add_option("--spec", cfg.spec, "game or dominance file");
    if (needs_spec) spec->required();
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option("--format", cfg.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  };

  auto* s = app.add_subcommand("solve", "iterate the bound functions to convergence");
  common(s, solve_cfg, true);
  s->add_option("--rounds", solve_cfg.rounds, "maximum rounds");
  s->add_option("--tol", solve_cfg.tol, "stop when the largest width change falls below this");
  s->add_option("--grid", solve_cfg.grid, "parameter grid points per player");
  s->add_option("--seed", solve_cfg.seed, "unused; accepted for uniform invocation");

  auto* c = app.add_subcommand("check", "numerically check the game's assumptions");
  common(c, check_cfg, true);
  c->add_option("--grid", check_cfg.grid, "finite-difference grid points per axis");
  c->add_option("--samples", check_cfg.samples, "sampled ordered quadruples");
  c->add_option("--lambda-grid", check_cfg.lambda_grid, "mixture weights per sweep");
  c->add_option("--seed", check_cfg.seed, "master seed for sampled checks");

  auto* d = app.add_subcommand("dominance", "compare two (choice belief, density) pairs");
  common(d, dom_cfg, true);

  auto* r = app.add_subcommand("reproduce", "compare solver rounds with the closed forms");
  r->add_option("model", rp.model, "bertrand or cournot")->required()->check(CLI::IsMember({"bertrand", "cournot"}));
  r->add_option("--out", rep_cfg.out, "output file (default: stdout)");
  r->add_option("--format", rep_cfg.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  r->add_option("--rounds", rep_cfg.rounds, "rounds to compare");
  r->add_option("--grid", rep_cfg.grid, "parameter points compared per round");
  r->add_option("--a", rp.a, "demand intercept")->each([&](const std::string&) { rp.a_set = true; });
  r->add_option("--phi", rp.phi, "bertrand: cost parameter range [0, phi]");
  r->add_option("--p-bar", rp.p_bar, "bertrand: highest price");
  r->add_option("--c", rp.c, "cournot: marginal cost");
  r->add_option("--phi-lo", rp.phi_lo, "cournot: lowest slope parameter");
  r->add_option("--phi-hi", rp.phi_hi, "cournot: highest slope parameter");
  r->add_option("--q-bar", rp.q_bar, "cournot: largest quantity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "argument-error: " << one_line(e.what()) << '\n';
    return kParse;
  }

  try {
    if (*s) return cmd_solve(solve_cfg);
    if (*c) return cmd_check(check_cfg);
    if (*d) return cmd_dominance(dom_cfg);
    return cmd_reproduce(rep_cfg, rp);
  } catch (const Error& e) {
    std::cerr << to_string(e.kind()) << ": " << one_line(e.what());
    if (!e.witness().empty()) std::cerr << " [" << io::witness_text(e.witness()) << ']';
    std::cerr << '\n';
    return exit_code(e.kind());
  } catch (const IoError& e) {
    std::cerr << "io-error: " << one_line(e.what()) << '\n';
    return kParse;
  }
}
