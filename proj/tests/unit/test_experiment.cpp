#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sbgk/errors.hpp"
#include "sbgk/experiment.hpp"

using namespace sbgk;

namespace {

const char* kMinimal = R"({
  "experiment": "unit",
  "problem": {"dim": 1, "flux": {"preset": "burgers"}, "field": {"preset": "constant", "value": [1.0]},
              "initial": {"preset": "riemann"}},
  "grid": {"cells": 64, "velocity_cells": 16},
  "bgk": {"epsilon": 0.01, "dt": 0.005, "T": 0.05, "snapshot_stride": 2},
  "monte_carlo": {"seed": 42}
})";

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("sbgk_unit_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, ParsesMinimal) {
  RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.bgk.cells, 64);
  EXPECT_EQ(c.problem.flux, "burgers");
  EXPECT_TRUE(c.audit.entropy);
}

TEST(Config, MissingFieldIsNamed) {
  std::string t = kMinimal;
  t.replace(t.find("\"cells\": 64, "), 13, "");
  EXPECT_EQ(message_of(t), "missing field /grid/cells");
}

TEST(Config, UnknownFieldIsNamed) {
  std::string t = kMinimal;
  t.replace(t.find("\"snapshot_stride\""), 0, "\"stride\": 1, ");
  EXPECT_EQ(message_of(t), "unknown field /bgk/stride");
}

TEST(Config, WrongTypeIsNamed) {
  std::string t = kMinimal;
  t.replace(t.find("\"seed\": 42"), 10, "\"seed\": \"x\"");
  EXPECT_EQ(message_of(t), "field /monte_carlo/seed: expected a non-negative integer");
  EXPECT_NE(message_of("{"), "");
}

TEST(Config, ResolvedJsonRoundTrips) {
  RunConfig c = parse_config(kMinimal);
  std::string a = config_json(c);
  EXPECT_EQ(config_json(parse_config(a)), a);
}

TEST(Config, Fnv1aReference) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Commands, ConvergenceNeedsThreeLevels) {
  std::string t = kMinimal;
  t.insert(t.rfind('}'), R"(, "convergence": {"cells": [64], "oracle_cells": 1024})");
  RunConfig c = parse_config(t);
  EXPECT_THROW(cmd_convergence(c, scratch("conv")), ConfigError);
}

TEST(Commands, SimulateAndAudit) {
  RunConfig c = parse_config(kMinimal);
  auto out = scratch("sim");
  auto res = cmd_simulate(c, out);
  EXPECT_EQ(res.exit_code, 0) << res.report.table();
  for (const char* f : {"config.json", "path.csv", "trajectory.csv", "diagnostics.csv", "defect.csv", "report.csv",
                        "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(out / f)) << f;
  }
  auto aud = cmd_audit(out, {});
  EXPECT_EQ(aud.exit_code, 0) << aud.report.table();
  auto again = cmd_audit(out, {});
  std::ostringstream a, b;
  aud.report.write_csv(a);
  again.report.write_csv(b);
  EXPECT_EQ(a.str(), b.str());
  std::filesystem::remove_all(out);
}

TEST(Commands, AuditRejectsPartialBundle) {
  RunConfig c = parse_config(kMinimal);
  auto out = scratch("partial");
  cmd_simulate(c, out);
  std::filesystem::remove(out / "manifest.json");
  EXPECT_THROW(cmd_audit(out, {}), ConfigError);
  std::filesystem::remove_all(out);
}

TEST(Commands, ExitCodes) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), 2);
  EXPECT_EQ(exit_code_for(RangeError("x")), 2);
  EXPECT_EQ(exit_code_for(NumericalError("x")), 3);
  EXPECT_EQ(exit_code_for(StructuralViolation("x")), 3);
}
