#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wsscatter/pipeline.hpp"
#include "wsscatter/report.hpp"
#include "wsscatter/scenario.hpp"

using namespace wss;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("wss-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool mentions(const std::vector<std::string>& v, const std::string& what) {
  for (const auto& s : v)
    if (s.find(what) != std::string::npos) return true;
  return false;
}

// small enough for a unit test: coarse grids, short times
const char* kSmall = R"(
version: 1
name: small
grid: {n_per_axis: 32, box_length: 32}
profile_grid: {n_per_axis: 16, box_length: 16}
state:
  w_plus: {amplitude: 0.05, width: 0.6}
  a_plus: {kind: gaussian, amplitude: 1.0, width: 1.2}
times: {T: 2, t0_list: [4, 8], t_max: 8, per_octave: 4, fit_from: 2, r2_times: [4], profile_times: [4]}
quadrature: {nu_max: 16, node_count: 64}
solver: {radial_points: 1024, radial_radius: 64}
)";

}  // namespace

TEST(Scenario, MinimalFileGetsDefaults) {
  const auto s = parse_scenario("version: 1\nname: tiny\n");
  EXPECT_EQ(s.name, "tiny");
  EXPECT_EQ(s.grid.n_per_axis, 128);
  EXPECT_DOUBLE_EQ(s.T, 4.0);
  EXPECT_EQ(s.t0_list, (std::vector<double>{16, 32, 64}));
  EXPECT_EQ(s.w_plus.amplitude, 0.0);
  EXPECT_EQ(s.tolerances, default_tolerances());
  EXPECT_EQ(s.formats, (std::vector<std::string>{"csv", "json"}));
}

TEST(Scenario, BoxTooSmallNamesTheInequality) {
  try {
    parse_scenario("state: {w_plus: {amplitude: 0.1, width: 0.6}}\ngrid: {n_per_axis: 32, box_length: 8}\n");
    FAIL() << "expected a validation error";
  } catch (const ScenarioError& e) {
    EXPECT_TRUE(mentions(e.violations, "box_length >= 2 * max(r2_times) * support_radius(w_plus)"));
  }
}

TEST(Scenario, AllViolationsAreListed) {
  try {
    parse_scenario(
        "version: 1\n"
        "grid: {n_per_axis: 30}\n"
        "times: {T: 4, t0_list: [2, 100], t_max: 64}\n"
        "tolerances: {order: -1, bogus: 3}\n"
        "colour: red\n");
    FAIL() << "expected a validation error";
  } catch (const ScenarioError& e) {
    EXPECT_GE(e.violations.size(), 4u);
    EXPECT_TRUE(mentions(e.violations, "grid.n_per_axis"));
    EXPECT_TRUE(mentions(e.violations, "t0_list"));
    EXPECT_TRUE(mentions(e.violations, "tolerances.order"));
    EXPECT_TRUE(mentions(e.violations, "colour"));
    EXPECT_TRUE(mentions(e.violations, "line 5"));
  }
}

TEST(Scenario, WrongTypeIsReported) {
  try {
    parse_scenario("times:\n  T: four\n");
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_TRUE(mentions(e.violations, "line 2"));
    EXPECT_TRUE(mentions(e.violations, "times.T"));
  }
}

TEST(Scenario, ParseErrorCarriesLine) {
  try {
    parse_scenario("version: 1\nname: x\ngrid: {n_per_axis: 32\n");
    FAIL();
  } catch (const ScenarioError& e) {
    ASSERT_FALSE(e.violations.empty());
    EXPECT_NE(e.violations.front().find("line"), std::string::npos) << e.violations.front();
  }
}

TEST(Scenario, MissingFileIsNotFound) {
  EXPECT_THROW(load_scenario("/nonexistent/dir/scenario.yaml"), ScenarioNotFound);
}

TEST(Scenario, ReferenceScenarioLoads) {
  const auto s = load_scenario(std::string(WSS_SOURCE_DIR) + "/scenarios/reference.yaml");
  EXPECT_EQ(s.name, "reference");
  const auto b = build_scenario_bundle(s);
  EXPECT_NEAR(b.state.c4, 0.05, 1e-3);
}

TEST(Report, CsvQuotingAndRoundTrip) {
  Table t{{"t", "a,b", "say \"hi\""}, {}};
  t.add({1.0, 0.1, -2.5e-300});
  t.add({2.0, 1.0 / 3.0, 12345678.9});
  const std::string text = csv_text(t);
  EXPECT_EQ(text.substr(0, text.find("\r\n")), "t,\"a,b\",\"say \"\"hi\"\"\"");
  const auto dir = scratch("csv");
  write_csv((dir / "t.csv").string(), t);
  const auto back = read_csv((dir / "t.csv").string());
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.rows, t.rows);  // shortest round-trip formatting is exact
}

TEST(Report, NonFiniteValuesAreRejected) {
  Table t{{"t", "x"}, {}};
  t.add({1.0, std::nan("")});
  const auto dir = scratch("nan");
  EXPECT_THROW(write_csv((dir / "t.csv").string(), t), NumericalError);
  EXPECT_FALSE(fs::exists(dir / "t.csv"));
}

TEST(Report, JsonCarriesVersion) {
  const auto dir = scratch("json");
  write_json((dir / "x.json").string(), "thing", {{"a", 1}});
  const auto j = nlohmann::json::parse(slurp(dir / "x.json"));
  EXPECT_EQ(j["format_version"], kFormatVersion);
  EXPECT_EQ(j["kind"], "thing");
  EXPECT_EQ(j["a"], 1);
}

TEST(Pipeline, StageParsing) {
  EXPECT_EQ(parse_stages("all"), all_stages());
  EXPECT_EQ(parse_stages("checks, profiles"), (std::vector<Stage>{Stage::Checks, Stage::Profiles}));
  EXPECT_THROW(parse_stages("profiles,plots"), DomainError);
}

TEST(Pipeline, ProfilesOnZeroDataSucceeds) {
  auto s = parse_scenario(kSmall);
  s.w_plus.amplitude = 0.0;
  const auto dir = scratch("zero");
  PipelineOptions opt;
  opt.out_dir = dir.string();
  const auto r = run_pipeline(s, {Stage::Profiles}, opt);
  EXPECT_EQ(r.exit_status, 0);
  const auto t = read_csv((dir / "profiles.csv").string());
  for (const auto& row : t.rows)
    for (std::size_t k = 1; k < row.size(); ++k) EXPECT_EQ(row[k], 0.0);
  EXPECT_TRUE(fs::exists(dir / "verdicts.csv"));
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
}

TEST(Pipeline, ChecksWithoutProfilesIsSkipped) {
  const auto s = parse_scenario(kSmall);
  const auto dir = scratch("skip");
  PipelineOptions opt;
  opt.out_dir = dir.string();
  const auto r = run_pipeline(s, {Stage::Checks}, opt);
  EXPECT_NE(r.exit_status, 0);
  ASSERT_EQ(r.stages.size(), 1u);
  EXPECT_EQ(r.stages[0].status, "skipped");
  EXPECT_NE(r.stages[0].reason.find("missing prerequisite"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(j["stages"][0]["status"], "skipped");
}

TEST(Pipeline, SmallRunIsDeterministic) {
  const auto s = parse_scenario(kSmall);
  std::vector<std::string> texts[2];
  for (int k = 0; k < 2; ++k) {
    const auto dir = scratch("det" + std::to_string(k));
    PipelineOptions opt;
    opt.out_dir = dir.string();
    opt.seed = 7;
    const auto r = run_pipeline(s, all_stages(), opt);
    for (const auto& o : r.stages) EXPECT_EQ(o.status, "ok") << o.stage << ": " << o.reason;
    for (const char* f : {"profiles.csv", "remainders.csv", "trajectory.csv", "t0study.csv", "free_wave.csv", "verdicts.csv"})
      texts[k].push_back(slurp(dir / f));
  }
  EXPECT_EQ(texts[0], texts[1]);
  for (const auto& t : texts[0]) EXPECT_FALSE(t.empty());
}
