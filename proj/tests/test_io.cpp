#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include <json.hpp>

#include "pointrat/io/output.hpp"
#include "pointrat/io/spec_file.hpp"

using namespace pointrat;

namespace {

const std::string kSpecs = POINTRAT_SPECS;

GameSpec game_from(const std::string& text) {
  std::istringstream in(text);
  return io::build_game(io::parse_document(in, "inline"));
}

std::string parse_error(const std::string& text) {
  try {
    game_from(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const char* kQuadraticBertrand = R"(
# the built-in price game written out by hand
[game]
model = quadratic
mode = complements

[players.1]
choice = [0, 3]
parameter = [0, 1]
A = [-1, 0]
B = [1, 1]
B.2 = [1, 0]
D = [0, -1]
D.2 = [0, -1]

[players.2]
choice = [0, 3]
parameter = [0, 1]
A = [-1, 0]
B = [1, 1]
B.1 = [1, 0]
D = [0, -1]
D.1 = [0, -1]

[beliefs.1]
member.1.breakpoints = [0, 1/2, 1]
member.1.values = [0, 2]
member.2.breakpoints = [0, 1/2, 1]
member.2.values = [1, 1]
member.3.breakpoints = [0, 1/2, 1]
member.3.values = [2, 0]
max = 1
min = 3

[beliefs.2]
member.1.breakpoints = [0, 1/2, 1]
member.1.values = [0, 2]
member.2.breakpoints = [0, 1/2, 1]
member.2.values = [2, 0]
max = 1
min = 2
)";

}  // namespace

TEST(SpecFile, BuiltInModels) {
  const GameSpec b = io::load_game(kSpecs + "/bertrand.ini");
  EXPECT_EQ(b.mode(), Mode::Complements);
  EXPECT_DOUBLE_EQ(b.player(0).choices.hi, 3.0);
  const GameSpec c = io::load_game(kSpecs + "/cournot.ini");
  EXPECT_EQ(c.mode(), Mode::Substitutes);
  EXPECT_DOUBLE_EQ(c.player(1).parameters.lo, 1.0);
  EXPECT_DOUBLE_EQ(io::load_game(kSpecs + "/cournot_interior.ini").player(0).choices.hi, 2.5);
}

TEST(SpecFile, ModeOverride) {
  EXPECT_EQ(io::load_game(kSpecs + "/bertrand_substitutes.ini").mode(), Mode::Substitutes);
}

TEST(SpecFile, QuadraticMatchesBuiltIn) {
  const GameSpec q = game_from(kQuadraticBertrand);
  const GameSpec b = bertrand_game(1.0, 1.0, 3.0);
  const IterationTrace tq = solve(q, 30, 1e-12, 9);
  const IterationTrace tb = solve(b, 30, 1e-12, 9);
  for (std::size_t t = 0; t < 9; ++t) {
    EXPECT_NEAR(tq.final_profile().players[0].intervals[t].lo, tb.final_profile().players[0].intervals[t].lo, 1e-12);
    EXPECT_NEAR(tq.final_profile().players[0].intervals[t].hi, tb.final_profile().players[0].intervals[t].hi, 1e-12);
  }
}

TEST(SpecFile, ThreePlayerGame) {
  const GameSpec g = io::load_game(kSpecs + "/public_good.ini");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g.player(2).beliefs.size(), 2u);
  EXPECT_EQ(g.player(0).beliefs[0].max_index(), 1u);
  const std::vector<double> o{1.0, 2.0};
  EXPECT_DOUBLE_EQ(utility_eval(g, 0, 0.5, 1.0, o), -1.0 + 0.5 + 0.25 + 0.5);
}

TEST(SpecFile, InvertedIntervalNamesLineAndField) {
  try {
    io::load_game(kSpecs + "/invalid_interval.ini");
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("invalid_interval.ini:6"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'choice'"), std::string::npos) << msg;
  }
}

TEST(SpecFile, Errors) {
  EXPECT_NE(parse_error("[game]\nmodel = bertrand\na = 1\nphi = 1\n").find("p_bar"), std::string::npos);
  EXPECT_NE(parse_error("[game]\nmodel = bertrand\na = 1\nphi = 1\np_bar = x\n").find("inline:5"), std::string::npos);
  EXPECT_NE(parse_error("[game]\nmodel = bertrand\na = 1\nphi = 1\np_bar = 3\ncolour = red\n").find("colour"),
            std::string::npos);
  EXPECT_NE(parse_error("[game]\nmodel = bertrand\na = 1\nphi = 1\np_bar = 1.5\n"), "");
  EXPECT_NE(parse_error("[game]\nmodel = chess\n").find("model"), std::string::npos);
  EXPECT_NE(parse_error("[game]\nmodel = bertrand\nmode = sideways\na = 1\nphi = 1\np_bar = 3\n").find("mode"),
            std::string::npos);
  EXPECT_NE(parse_error("no section = 1\n"), "");
  EXPECT_THROW(io::load_game(kSpecs + "/does_not_exist.ini"), ParseError);
}

TEST(SpecFile, DominanceInput) {
  const io::DominanceInput in = io::load_dominance(kSpecs + "/dominance.ini");
  EXPECT_DOUBLE_EQ(in.tol, 1e-9);
  EXPECT_NEAR(in.first.density.values()[2], 7.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(in.second.belief(0.1), 0.8);
  EXPECT_EQ(composite_compare(pushforward(in.first.belief, in.first.density),
                              pushforward(in.second.belief, in.second.density))
                .relation,
            Relation::Dominates);
}

TEST(Output, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5}) EXPECT_EQ(std::stod(io::num(x)), x);
  EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(io::csv_field("say \"hi\", ok"), "\"say \"\"hi\"\", ok\"");
}

TEST(Output, TraceTables) {
  const IterationTrace tr = solve(bertrand_game(1.0, 1.0, 3.0), 2, 1e-12, 3);
  std::ostringstream csv;
  io::write_trace(csv, tr, io::Format::Csv);
  std::istringstream lines(csv.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "round,player,theta,lower,upper,width");
  EXPECT_EQ(first, "0,1,0,0,3,3");

  std::ostringstream jl;
  io::write_final(jl, tr, io::Format::Jsonl);
  std::istringstream jlines(jl.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(jlines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["type"], "final");
    ++n;
  }
  EXPECT_EQ(n, 6u);

  std::ostringstream summary;
  io::write_summary(summary, tr, io::Format::Jsonl);
  const auto js = nlohmann::json::parse(summary.str());
  EXPECT_EQ(js["terminated_by"], "max-rounds");
  EXPECT_EQ(js["rounds"], 2);
}

TEST(Output, ReportWitness) {
  verify::AssumptionReport r;
  r.checks.push_back({"demo", verify::Status::Fail, "x, y", {{"theta", 0.5}}, {{"tol", 1e-6}}, 3, 0.25});
  std::ostringstream csv;
  io::write_report(csv, r, io::Format::Csv);
  EXPECT_NE(csv.str().find("demo,fail,3,0.25,\"x, y\",theta=0.5,tol=9.9999999999999995e-07"), std::string::npos)
      << csv.str();
  std::ostringstream jl;
  io::write_report(jl, r, io::Format::Jsonl);
  const auto j = nlohmann::json::parse(jl.str());
  EXPECT_EQ(j["status"], "fail");
  EXPECT_EQ(j["witness"]["theta"], 0.5);
}
