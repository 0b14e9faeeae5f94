#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pointrat/choice_belief.hpp"
#include "pointrat/density.hpp"
#include "pointrat/error.hpp"
#include "pointrat/family.hpp"
#include "pointrat/game.hpp"

// Reader for the sectioned key = value game and dominance files. Numbers may be
// written as decimals or as ratios such as 7/4; arrays are [x, y, ...].
namespace pointrat::io {

struct Entry {
  std::string value;
  int line = 0;
};

class Section {
 public:
  Section() = default;
  Section(std::string name, int line, std::string source) : name_(std::move(name)), line_(line), source_(std::move(source)) {}

  const std::string& name() const { return name_; }
  int line() const { return line_; }

  void set(const std::string& key, Entry e) {
    if (entries_.count(key)) fail(e.line, "duplicate key '" + key + "'");
    entries_[key] = std::move(e);
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  const Entry& entry(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) fail(line_, "missing key '" + key + "' in [" + name_ + "]");
    used_.insert(key);
    return it->second;
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
  }

  double number(const std::string& key) const;
  std::optional<double> optional_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  std::vector<double> array(const std::string& key) const;
  Interval interval(const std::string& key) const;
  std::string word(const std::string& key) const {
    std::string v = entry(key).value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return v;
  }

  // Rejects keys nobody asked for; catches misspellings.
  void reject_unused() const {
    for (const auto& [k, e] : entries_) {
      if (!used_.count(k)) fail(e.line, "unknown key '" + k + "' in [" + name_ + "]");
    }
  }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    std::ostringstream os;
    os << source_ << ':' << line << ": " << msg;
    throw ParseError(os.str());
  }

 private:
  std::string name_;
  int line_ = 0;
  std::string source_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> used_;
};

struct Document {
  std::string source;
  std::vector<Section> sections;

  const Section* find(const std::string& name) const {
    for (const auto& s : sections) {
      if (s.name() == name) return &s;
    }
    return nullptr;
  }

  const Section& require(const std::string& name) const {
    if (const Section* s = find(name)) return *s;
    throw ParseError(source + ": missing section [" + name + "]");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_plain(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<double> parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_plain(s);
  const auto num = parse_plain(trim(s.substr(0, slash)));
  const auto den = parse_plain(trim(s.substr(slash + 1)));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

}  // namespace detail

inline double Section::number(const std::string& key) const {
  const Entry& e = entry(key);
  if (auto v = detail::parse_number(e.value)) return *v;
  fail(e.line, "field '" + key + "': expected a number, got '" + e.value + "'");
}

inline std::vector<double> Section::array(const std::string& key) const {
  const Entry& e = entry(key);
  const std::string s = detail::trim(e.value);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    fail(e.line, "field '" + key + "': expected an array [x, y, ...]");
  }
  std::vector<double> out;
  const std::string body = s.substr(1, s.size() - 2);
  if (detail::trim(body).empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto v = detail::parse_number(item);
    if (!v) fail(e.line, "field '" + key + "': bad array element '" + detail::trim(item) + "'");
    out.push_back(*v);
  }
  return out;
}

inline Interval Section::interval(const std::string& key) const {
  const std::vector<double> v = array(key);
  const Entry& e = entry(key);
  if (v.size() != 2) fail(e.line, "field '" + key + "': an interval needs exactly two bounds");
  if (v[0] > v[1]) {
    std::ostringstream os;
    os << "field '" << key << "': lower bound " << v[0] << " exceeds upper bound " << v[1];
    fail(e.line, os.str());
  }
  return {v[0], v[1]};
}

inline Document parse_document(std::istream& in, const std::string& source) {
  Document doc{source, {}};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError(source + ":" + std::to_string(line) + ": unterminated section header");
      const std::string name = detail::trim(text.substr(1, text.size() - 2));
      if (name.empty()) throw ParseError(source + ":" + std::to_string(line) + ": empty section name");
      if (doc.find(name)) throw ParseError(source + ":" + std::to_string(line) + ": duplicate section [" + name + "]");
      doc.sections.emplace_back(name, line, source);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(source + ":" + std::to_string(line) + ": expected key = value");
    if (doc.sections.empty()) throw ParseError(source + ":" + std::to_string(line) + ": key outside any section");
    const std::string key = detail::trim(text.substr(0, eq));
    if (key.empty()) throw ParseError(source + ":" + std::to_string(line) + ": empty key");
    doc.sections.back().set(key, {detail::trim(text.substr(eq + 1)), line});
  }
  return doc;
}

inline Document read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return parse_document(in, path);
}

// Re-raises construction errors as parse errors pointing at the offending section.
template <class F>
auto at_section(const Section& s, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ArgumentError& e) {
    s.fail(s.line(), "[" + s.name() + "]: " + e.what());
  } catch (const DomainError& e) {
    s.fail(s.line(), "[" + s.name() + "]: " + e.what());
  }
}

inline Mode parse_mode(const Section& s, const std::string& key = "mode") {
  const std::string m = s.word(key);
  if (m == "complements") return Mode::Complements;
  if (m == "substitutes") return Mode::Substitutes;
  s.fail(s.entry(key).line, "field '" + key + "': expected complements or substitutes, got '" + m + "'");
}

// Members are member.1, member.2, ... each with breakpoints and density values.
inline BeliefFamily parse_family(const Section& s) {
  std::vector<Density> members;
  for (int m = 1;; ++m) {
    const std::string stem = "member." + std::to_string(m);
    if (!s.has(stem + ".breakpoints")) break;
    const auto xs = s.array(stem + ".breakpoints");
    const auto vs = s.array(stem + ".values");
    members.push_back(at_section(s, [&] { return Density(xs, vs); }));
  }
  if (members.empty()) s.fail(s.line(), "[" + s.name() + "]: needs member.1.breakpoints and member.1.values");
  auto index = [&](const char* key, std::size_t dflt) -> std::size_t {
    if (!s.has(key)) return dflt;
    const double v = s.number(key);
    if (v != std::floor(v) || v < 1 || v > static_cast<double>(members.size())) {
      s.fail(s.entry(key).line, std::string("field '") + key + "': expected a member number");
    }
    return static_cast<std::size_t>(v) - 1;
  };
  const std::size_t max_i = index("max", 0);
  const std::size_t min_i = index("min", 0);
  s.reject_unused();
  return at_section(s, [&] { return BeliefFamily(std::move(members), max_i, min_i); });
}

namespace detail {

// "B" -> no opponents; "B.2" -> player 2; "B.2*3" -> players 2 and 3 (1-based).
inline std::optional<std::uint32_t> coefficient_mask(const std::string& key, char letter, std::size_t self,
                                                     const std::vector<std::size_t>& opp) {
  if (key.empty() || key[0] != letter) return std::nullopt;
  if (key.size() == 1) return 0u;
  if (key[1] != '.') return std::nullopt;
  std::uint32_t mask = 0;
  std::stringstream ss(key.substr(2));
  std::string tok;
  while (std::getline(ss, tok, '*')) {
    const auto v = parse_plain(trim(tok));
    if (!v || *v != std::floor(*v) || *v < 1) return std::nullopt;
    const auto player = static_cast<std::size_t>(*v) - 1;
    if (player == self) return std::nullopt;
    const auto it = std::find(opp.begin(), opp.end(), player);
    if (it == opp.end()) return std::nullopt;
    mask |= 1u << static_cast<std::uint32_t>(it - opp.begin());
  }
  return mask;
}

}  // namespace detail

inline QuadraticOwnChoice parse_quadratic(const Section& s, std::size_t self, std::size_t n) {
  std::vector<std::size_t> opp;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != self) opp.push_back(j);
  }
  QuadraticOwnChoice u;
  for (const std::string& key : s.keys()) {
    if (key == "choice" || key == "parameter") continue;
    MultiAffine* target = nullptr;
    std::optional<std::uint32_t> mask;
    for (auto [letter, dst] : {std::pair{'A', &u.quadratic}, std::pair{'B', &u.linear}, std::pair{'D', &u.constant}}) {
      if ((mask = detail::coefficient_mask(key, letter, self, opp))) {
        target = dst;
        break;
      }
    }
    if (!target) s.fail(s.entry(key).line, "unknown key '" + key + "' in [" + s.name() + "]");
    const auto v = s.array(key);
    if (v.size() != 2) s.fail(s.entry(key).line, "field '" + key + "': expected [constant, theta coefficient]");
    target->add(*mask, {v[0], v[1]});
  }
  if (u.quadratic.terms.empty()) s.fail(s.line(), "[" + s.name() + "]: quadratic coefficient A is required");
  return u;
}

inline GameSpec build_game(const Document& doc) {
  const Section& game = doc.require("game");
  const std::string model = game.word("model");
  std::optional<Mode> mode;
  if (game.has("mode")) mode = parse_mode(game);

  auto with_mode = [&](GameSpec g) {
    if (!mode || *mode == g.mode()) return g;
    return GameSpec(g.players(), *mode);
  };

  if (model == "bertrand") {
    const double a = game.number("a"), phi = game.number("phi"), p_bar = game.number("p_bar");
    game.reject_unused();
    return with_mode(at_section(game, [&] { return bertrand_game(a, phi, p_bar); }));
  }
  if (model == "cournot") {
    const double a = game.number("a"), c = game.number("c");
    const double lo = game.number("phi_lo"), hi = game.number("phi_hi"), q_bar = game.number("q_bar");
    game.reject_unused();
    return with_mode(at_section(game, [&] { return cournot_game(a, c, lo, hi, q_bar); }));
  }
  if (model != "quadratic") {
    game.fail(game.entry("model").line, "field 'model': expected bertrand, cournot or quadratic");
  }
  if (!mode) game.fail(game.line(), "[game]: a quadratic model needs mode");
  std::size_t n = 0;
  while (doc.find("players." + std::to_string(n + 1))) ++n;
  if (game.has("players")) {
    const double v = game.number("players");
    if (v != static_cast<double>(n)) game.fail(game.entry("players").line, "field 'players' disagrees with the [players.N] sections");
  }
  game.reject_unused();
  if (n < 2) game.fail(game.line(), "a quadratic model needs sections [players.1] and [players.2]");

  std::vector<PlayerSpec> players;
  for (std::size_t i = 0; i < n; ++i) {
    const Section& ps = doc.require("players." + std::to_string(i + 1));
    PlayerSpec p{ps.interval("choice"), ps.interval("parameter"), {}, parse_quadratic(ps, i, n)};
    players.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::string name = "beliefs." + std::to_string(i + 1) + "." + std::to_string(j + 1);
      const Section* s = doc.find(name);
      if (!s && n == 2) s = doc.find("beliefs." + std::to_string(i + 1));
      if (!s) throw ParseError(doc.source + ": missing section [" + name + "]");
      players[i].beliefs.push_back(parse_family(*s));
    }
  }
  for (const Section& s : doc.sections) {
    const std::string& nm = s.name();
    if (nm != "game" && nm.rfind("players.", 0) != 0 && nm.rfind("beliefs.", 0) != 0) {
      s.fail(s.line(), "unexpected section [" + nm + "]");
    }
  }
  try {
    return GameSpec(std::move(players), *mode);
  } catch (const ArgumentError& e) {
    throw ParseError(doc.source + ": " + e.what());
  } catch (const DomainError& e) {
    throw ParseError(doc.source + ": " + e.what());
  }
}

inline GameSpec load_game(const std::string& path) { return build_game(read_document(path)); }

// One (choice belief, parameter density) pair of a dominance file.
struct BeliefInput {
  ChoiceBelief belief;
  Density density;
};

struct DominanceInput {
  BeliefInput first;
  BeliefInput second;
  double tol = kDefaultTol;
};

inline BeliefInput parse_pair(const Section& s) {
  const Interval choices = s.interval("choice");
  const auto bx = s.array("belief.breakpoints");
  const auto bv = s.array("belief.values");
  std::vector<double> slopes(bv.size(), 0.0);
  if (s.has("belief.slopes")) slopes = s.array("belief.slopes");
  if (slopes.size() != bv.size()) s.fail(s.entry("belief.slopes").line, "belief.slopes needs one entry per piece");
  const auto dx = s.array("density.breakpoints");
  const auto dv = s.array("density.values");
  s.reject_unused();
  return at_section(s, [&] {
    std::vector<Piece> pieces;
    for (std::size_t p = 0; p < bv.size(); ++p) pieces.push_back({bv[p], slopes[p], 0.0});
    return BeliefInput{ChoiceBelief(PiecewiseFunction(bx, std::move(pieces)), choices), Density(dx, dv)};
  });
}

inline DominanceInput build_dominance(const Document& doc) {
  double tol = kDefaultTol;
  if (const Section* d = doc.find("dominance")) {
    if (auto t = d->optional_number("tol")) tol = *t;
    d->reject_unused();
  }
  for (const Section& s : doc.sections) {
    if (s.name() != "dominance" && s.name() != "pair.1" && s.name() != "pair.2") {
      s.fail(s.line(), "unexpected section [" + s.name() + "]");
    }
  }
  return {parse_pair(doc.require("pair.1")), parse_pair(doc.require("pair.2")), tol};
}

inline DominanceInput load_dominance(const std::string& path) { return build_dominance(read_document(path)); }

}  // namespace pointrat::io
