#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pointrat/composite.hpp"
#include "pointrat/density.hpp"
#include "pointrat/solver.hpp"
#include "pointrat/verify/report.hpp"

// Tables for traces, reports and dominance runs, as CSV with a header row or as one
// JSON object per line.
namespace pointrat::io {

enum class Format { Csv, Jsonl };

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string witness_text(const Witness& w) {
  std::string out;
  for (const auto& [k, v] : w) {
    if (!out.empty()) out += ';';
    out += k + "=" + num(v);
  }
  return out;
}

inline nlohmann::json witness_json(const Witness& w) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : w) j[k] = v;
  return j;
}

// One row per (round, player, parameter grid point).
inline void write_trace(std::ostream& os, const IterationTrace& tr, Format f) {
  if (f == Format::Csv) os << "round,player,theta,lower,upper,width\n";
  for (std::size_t k = 0; k < tr.rounds.size(); ++k) {
    const BoundProfile& bp = tr.rounds[k];
    for (std::size_t i = 0; i < bp.players.size(); ++i) {
      const PlayerBounds& pb = bp.players[i];
      for (std::size_t t = 0; t < pb.grid.size(); ++t) {
        const Interval& iv = pb.intervals[t];
        if (f == Format::Csv) {
          os << k << ',' << i + 1 << ',' << num(pb.grid[t]) << ',' << num(iv.lo) << ',' << num(iv.hi) << ','
             << num(iv.width()) << '\n';
        } else {
          os << nlohmann::json{{"type", "bound"},      {"round", k},       {"player", i + 1}, {"theta", pb.grid[t]},
                               {"lower", iv.lo},        {"upper", iv.hi},   {"width", iv.width()}}
                    .dump()
             << '\n';
        }
      }
    }
  }
}

inline void write_final(std::ostream& os, const IterationTrace& tr, Format f) {
  const BoundProfile& bp = tr.final_profile();
  if (f == Format::Csv) os << "player,theta,lower,upper\n";
  for (std::size_t i = 0; i < bp.players.size(); ++i) {
    const PlayerBounds& pb = bp.players[i];
    for (std::size_t t = 0; t < pb.grid.size(); ++t) {
      const Interval& iv = pb.intervals[t];
      if (f == Format::Csv) {
        os << i + 1 << ',' << num(pb.grid[t]) << ',' << num(iv.lo) << ',' << num(iv.hi) << '\n';
      } else {
        os << nlohmann::json{{"type", "final"}, {"player", i + 1}, {"theta", pb.grid[t]}, {"lower", iv.lo}, {"upper", iv.hi}}
                  .dump()
           << '\n';
      }
    }
  }
}

inline void write_summary(std::ostream& os, const IterationTrace& tr, Format f) {
  const std::size_t rounds = tr.rounds.size() - 1;
  if (f == Format::Csv) {
    os << "key,value\n";
    os << "terminated_by," << to_string(tr.terminated_by) << '\n';
    os << "rounds," << rounds << '\n';
    os << "clipping_events," << tr.clipping_events.size() << '\n';
    for (std::size_t k = 0; k < tr.convergence.size(); ++k) {
      os << "width_change_" << k + 1 << ',' << num(tr.convergence[k]) << '\n';
    }
    return;
  }
  nlohmann::json clips = nlohmann::json::array();
  for (const auto& e : tr.clipping_events) {
    clips.push_back({{"round", e.round}, {"player", e.player + 1}, {"theta", e.theta}, {"side", to_string(e.side)},
                     {"unclipped", e.unclipped}, {"clipped", e.clipped}});
  }
  os << nlohmann::json{{"type", "summary"},
                       {"terminated_by", to_string(tr.terminated_by)},
                       {"rounds", rounds},
                       {"convergence", tr.convergence},
                       {"clipping_events", clips}}
            .dump()
     << '\n';
}

inline void write_report(std::ostream& os, const verify::AssumptionReport& r, Format f) {
  if (f == Format::Csv) os << "check,status,evaluated,worst,detail,witness,tolerances\n";
  for (const auto& c : r.checks) {
    if (f == Format::Csv) {
      os << csv_field(c.name) << ',' << verify::to_string(c.status) << ',' << c.evaluated << ',' << num(c.worst) << ','
         << csv_field(c.detail) << ',' << csv_field(witness_text(c.witness)) << ','
         << csv_field(witness_text(c.tolerances)) << '\n';
    } else {
      os << nlohmann::json{{"type", "check"},
                           {"check", c.name},
                           {"status", verify::to_string(c.status)},
                           {"evaluated", c.evaluated},
                           {"worst", c.worst},
                           {"detail", c.detail},
                           {"witness", witness_json(c.witness)},
                           {"tolerances", witness_json(c.tolerances)}}
                .dump()
         << '\n';
    }
  }
}

// Survival probabilities of a composite at each of its thresholds, on both sides.
inline void write_survival(std::ostream& os, const std::string& subject, const CompositeBelief& p, Format f) {
  for (double t : p.thresholds()) {
    if (f == Format::Csv) {
      os << "survival," << subject << ',' << num(t) << ',' << num(p.survival(t)) << ',' << num(p.survival_above(t))
         << ",\n";
    } else {
      os << nlohmann::json{{"type", "survival"}, {"subject", subject}, {"threshold", t}, {"at", p.survival(t)},
                           {"above", p.survival_above(t)}}
                .dump()
         << '\n';
    }
  }
}

inline void write_density_survival(std::ostream& os, const std::string& subject, const Density& d, Format f) {
  for (double t : d.breakpoints()) {
    if (f == Format::Csv) {
      os << "survival," << subject << ',' << num(t) << ',' << num(d.survival(t)) << ',' << num(d.survival(t)) << ",\n";
    } else {
      os << nlohmann::json{{"type", "survival"}, {"subject", subject}, {"threshold", t}, {"at", d.survival(t)},
                           {"above", d.survival(t)}}
                .dump()
         << '\n';
    }
  }
}

inline void write_relation(std::ostream& os, const std::string& subject, const Comparison& c, Format f) {
  if (f == Format::Csv) {
    os << "relation," << subject << ",,,," << to_string(c.relation) << '\n';
  } else {
    nlohmann::json j{{"type", "relation"}, {"subject", subject}, {"relation", to_string(c.relation)}, {"max_gap", c.max_gap}};
    if (c.first_above_at) j["first_above_at"] = *c.first_above_at;
    if (c.second_above_at) j["second_above_at"] = *c.second_above_at;
    os << j.dump() << '\n';
  }
}

}  // namespace pointrat::io
