#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support.hpp"
#include "ugf/cli.hpp"
#include "ugf/config.hpp"
#include "ugf/error.hpp"

namespace ugf {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string case34() { return (test::data_dir() / "case34.json").string(); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ugfrel_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

TEST(Cli, AssessJsonHasIndices) {
  const CliRun r = run({"assess", "--config", case34(), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["version"], 1);
  EXPECT_NEAR(j["lole_hr_per_yr"].get<double>(), 292.18, 0.01);
  EXPECT_NEAR(j["eens_mwh_per_yr"].get<double>(), 824.01, 0.01);
  for (const char* key : {"loss_probability", "generation_terms", "load_terms", "state_counts"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_FALSE(j.contains("oracle"));
}

TEST(Cli, AssessIsByteIdentical) {
  const std::vector<std::string> args{"assess", "--config", case34(), "--format", "json", "--mc-samples", "5000",
                                      "--seed", "3"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, JsonRoundTripReproducesIndices) {
  const CliRun r = run({"assess", "--config", case34(), "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  const UFunction g = ufunction_from_json(j["generation_terms"]);
  const UFunction l = ufunction_from_json(j["load_terms"]);
  const std::size_t horizon = j["horizon_hours"];
  EXPECT_LE(test::rel_diff(lole(g, l, horizon, true), j["lole_hr_per_yr"]), 1e-12);
  EXPECT_LE(test::rel_diff(eens(g, l, horizon, true), j["eens_kwh_per_yr"]), 1e-12);
}

TEST(Cli, VerifyOracleAgrees) {
  const CliRun r = run({"assess", "--config", case34(), "--format", "json", "--verify-oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["oracle"]["agrees"].get<bool>());
}

TEST(Cli, OracleCapFailureIsValidationError) {
  const CliRun r = run({"assess", "--config", case34(), "--verify-oracle", "--oracle-cap", "10"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("SpaceTooLarge"), std::string::npos);
}

TEST(Cli, StrictLossOverride) {
  const fs::path cfg = scratch("tie.json");
  write_file(cfg, R"({"version": 1, "transformer": {"rated_kw": 100, "mech": {"failure_rate": 0,
    "repair_rate": 1, "per": "hour"}}, "load": {"n_states": 1, "hourly_kw": [100, 100]}})");
  const CliRun strict = run({"assess", "--config", cfg.string(), "--format", "json"});
  const CliRun loose = run({"assess", "--config", cfg.string(), "--format", "json", "--strict-loss", "false"});
  ASSERT_EQ(strict.code, 0) << strict.err;
  EXPECT_EQ(json::parse(strict.out)["loss_probability"], 0.0);
  EXPECT_EQ(json::parse(loose.out)["loss_probability"], 1.0);
  EXPECT_EQ(json::parse(loose.out)["horizon_hours"], 2);
}

TEST(Cli, LoadCsvOverride) {
  const fs::path csv = scratch("flat.csv");
  std::string rows = "kw\n";
  for (int i = 0; i < 12; ++i) rows += std::to_string(9000 + 100 * i) + "\n";
  write_file(csv, rows);
  const CliRun r = run({"assess", "--config", case34(), "--load-csv", csv.string(), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["loss_probability"], 1.0);
}

TEST(Cli, OutFileAndTextFormat) {
  const fs::path out = scratch("report.txt");
  const CliRun r = run({"assess", "--config", case34(), "--out", out.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  const std::string text((std::istreambuf_iterator<char>(f)), {});
  EXPECT_NE(text.find("LOLE              292.2 hr/yr"), std::string::npos) << text;
}

TEST(Cli, ValidationErrors) {
  const fs::path cfg = scratch("bad.json");
  write_file(cfg, R"({"version": 1, "load": {"n_states": 2, "hourly_kw": [1, 2]}, "sollar": {}})");
  CliRun r = run({"assess", "--config", cfg.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("sollar"), std::string::npos) << r.err;

  write_file(cfg, R"({"version": 2, "load": {"n_states": 2, "hourly_kw": [1, 2]}})");
  EXPECT_EQ(run({"assess", "--config", cfg.string()}).code, 2);

  write_file(cfg, R"({"version": 1, "load": {"n_states": 2, "hourly_kw": [1, 2]},
    "transformer": {"rated_kw": 10, "mech": {"failure_rate": 0.1, "repair_rate": 1}}})");
  EXPECT_EQ(run({"assess", "--config", cfg.string()}).code, 2);

  write_file(cfg, "{not json");
  EXPECT_EQ(run({"assess", "--config", cfg.string()}).code, 2);
  EXPECT_EQ(run({"assess", "--config", scratch("missing.json").string()}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"assess"}).code, 1);
  EXPECT_EQ(run({"assess", "--config", case34(), "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"discretize", "--dist", "gamma", "--params", "a=1", "--n", "3", "--max", "1"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DiscretizeUniform) {
  const CliRun r = run({"discretize", "--dist", "beta", "--params", "alpha=1,beta=1", "--n", "5", "--max", "1",
                     "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["state_probs"].size(), 5u);
  for (const auto& p : j["state_probs"]) EXPECT_NEAR(p.get<double>(), 0.2, 1e-12);

  const CliRun text = run({"discretize", "--dist", "beta", "--params", "mean=0.5,variance=0.05", "--n", "4", "--max",
                        "1"});
  EXPECT_EQ(text.code, 0);
  EXPECT_EQ(std::count(text.out.begin(), text.out.end(), '\n'), 5);

  EXPECT_EQ(run({"discretize", "--dist", "weibull", "--params", "k=2", "--n", "3", "--max", "9"}).code, 2);
  EXPECT_EQ(run({"discretize", "--dist", "weibull", "--params", "k=2,c=x", "--n", "3", "--max", "9"}).code, 2);
}

TEST(Cli, InspectTransformer) {
  const CliRun r = run({"inspect", "--config", case34(), "--component", "transformer", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json terms = json::parse(r.out)["terms"];
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0][0], 0.0);
  EXPECT_NEAR(terms[0][1].get<double>(), 0.0299, 5e-5);
  EXPECT_EQ(terms[1][0], 5000.0);
  EXPECT_NEAR(terms[1][1].get<double>(), 0.9701, 5e-5);

  for (const char* c : {"solar", "wind", "ev", "load", "system"}) {
    EXPECT_EQ(run({"inspect", "--config", case34(), "--component", c}).code, 0) << c;
  }
}

}  // namespace
}  // namespace ugf
