#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "flightoed/cli.hpp"
#include "flightoed/config.hpp"
#include "flightoed/errors.hpp"
#include "flightoed/units.hpp"

using namespace flightoed;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kConfigs = std::string(FLIGHTOED_SOURCE_DIR) + "/configs/";

struct Invocation {
  int status = 0;
  std::vector<std::string> artifacts;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Invocation r;
  r.status = run(args, out, err);
  std::istringstream lines(out.str());
  for (std::string l; std::getline(lines, l);)
    if (!l.empty()) r.artifacts.push_back(l);
  r.err = err.str();
  return r;
}

std::string fresh_dir(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("flightoed_cli_" + name);
  fs::remove_all(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string find_artifact(const Invocation& r, const std::string& ext) {
  for (const auto& a : r.artifacts)
    if (a.size() > ext.size() && a.compare(a.size() - ext.size(), ext.size(), ext) == 0) return a;
  return {};
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string write_config(const std::string& dir, const json& j) {
  fs::create_directories(dir);
  const std::string path = dir + "/config.json";
  std::ofstream(path) << j.dump(2);
  return path;
}

json longitudinal_json() {
  std::ifstream in(kConfigs + "longitudinal.json");
  json j = json::parse(in);
  j["airframe"] = kConfigs + "airframe_default.json";
  return j;
}

// One optimization shared by the tests that need an optimized signal.
const Invocation& oed_run() {
  static const Invocation r = invoke({"oed", "--config", kConfigs + "longitudinal.json", "--out", fresh_dir("oed")});
  return r;
}

}  // namespace

TEST(Artifacts, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ull);
}

TEST(Artifacts, NameCarriesContentHash) {
  EXPECT_EQ(artifact_name("longitudinal", "info", "a", "json"), "longitudinal_info_af63dc4c8601ec8c.json");
  EXPECT_NE(artifact_name("longitudinal", "info", "a", "json"), artifact_name("longitudinal", "info", "b", "json"));
}

TEST(Config, SampleLongitudinalConfig) {
  const ExperimentConfig c = load_config(kConfigs + "longitudinal.json");
  EXPECT_EQ(c.axis, Axis::Longitudinal);
  EXPECT_EQ(c.active_channel(), "delta_e");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_NEAR(c.baseline.amplitude, deg2rad(5.0), 1e-15);
  EXPECT_DOUBLE_EQ(c.baseline.pulse_width, 0.17);
  EXPECT_EQ(c.estimable_parameters().size(), 11u);
  // State limits are absolute in the file and stored relative to trim, in radians.
  EXPECT_NEAR(c.constraints.oed_bound("alpha")->lower, deg2rad(-4.36) - deg2rad(-0.4), 1e-15);
  EXPECT_NEAR(c.constraints.oed_bound("V_T")->upper, 3.0, 1e-12);
  EXPECT_NEAR(c.constraints.oed_bound("delta_e")->upper, deg2rad(5.0), 1e-15);
  EXPECT_EQ(c.grid().samples, 1000);
}

TEST(Config, LateralConfigsSelectChannel) {
  const ExperimentConfig a = load_config(kConfigs + "lateral_aileron.json");
  const ExperimentConfig r = load_config(kConfigs + "lateral_rudder.json");
  EXPECT_EQ(a.active_channel(), "delta_a");
  EXPECT_EQ(r.active_channel(), "delta_r");
  EXPECT_EQ(a.all_parameters().size(), 14u);
  EXPECT_EQ(a.estimable_parameters().size(), 11u);
  EXPECT_DOUBLE_EQ(r.baseline.pulse_width, 0.30);
}

TEST(Config, SensorSigmaInDegrees) {
  json j = longitudinal_json();
  j["sensor"]["sigma"] = {{"alpha", 0.5}, {"V_T", 0.2}};
  const ExperimentConfig c = parse_config(j.dump());
  EXPECT_NEAR(c.sensor.sigma(1), deg2rad(0.5), 1e-15);
  EXPECT_NEAR(c.sensor.sigma(0), 0.2, 1e-15);
}

TEST(Config, AirframeOverridesReachTheModel) {
  AirframeData a = load_airframe(kConfigs + "airframe_default.json");
  EXPECT_DOUBLE_EQ(a.derivatives.M_de, -10.668);
  EXPECT_NEAR(a.trim.pitch, deg2rad(-4.5), 1e-15);
  a = parse_airframe(R"({"derivatives": {"M_de": -12.0}, "properties": {"m": 40.0}})");
  EXPECT_DOUBLE_EQ(a.derivatives.M_de, -12.0);
  EXPECT_DOUBLE_EQ(a.properties.mass, 40.0);
  EXPECT_DOUBLE_EQ(a.derivatives.M_alpha, DimensionalDerivatives{}.M_alpha);
}

TEST(Config, DiagnosticsNameTheField) {
  const auto message = [](const std::string& text) {
    try {
      parse_config(text, ".", "cfg");
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message(R"({"baseline": {"amplitude_deg": 5}})"), "cfg: /baseline/pulse_width: required key missing");
  EXPECT_EQ(message(R"({"grid": {"horizon": "ten"}})"), "cfg: /grid/horizon: expected a number");
  EXPECT_EQ(message(R"({"gird": {}})"), "cfg: /gird: unknown key");
  EXPECT_EQ(message(R"({"constraints": {"oed": {"q": [5, -5]}}})"),
            "cfg: /constraints/oed/q: lower bound must be below upper bound");
  EXPECT_NE(message("{\"axis\": \n"), "no error");
  EXPECT_NE(message(R"({"constraints": {"oed": {"alpha": [-40, 40]}}})"), "no error");
  EXPECT_NE(message(R"({"airframe": "does_not_exist.json"})"), "no error");
}

TEST(Cli, ModalWritesFiveModes) {
  const Invocation r = invoke({"modal", "--config", kConfigs + "longitudinal.json", "--out", fresh_dir("modal")});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = read_csv(find_artifact(r, ".csv"));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[1][0], "Phugoid");
  EXPECT_NEAR(std::stod(rows[2][1]), 3.72, 0.02 * 3.72);
  EXPECT_EQ(rows[3][0], "Spiral");
  EXPECT_EQ(rows[3][2], "");  // unstable real mode has no damping ratio
  EXPECT_EQ(rows[3].back(), "false");
}

TEST(Cli, TrimRecoversReferenceCondition) {
  const Invocation r = invoke({"trim", "--out", fresh_dir("trim")});
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(slurp(r.artifacts.at(0)));
  EXPECT_NEAR(j["alpha_deg"].get<double>(), -0.4, 0.3);
  EXPECT_NEAR(j["theta_deg"].get<double>(), -4.5, 0.3);
  EXPECT_NEAR(j["delta_e_deg"].get<double>(), -1.5, 0.3);
}

TEST(Cli, GenAmplitudeOverride) {
  const Invocation r = invoke({"gen", "--config", kConfigs + "longitudinal.json", "--amplitude-deg", "3",
                               "--out", fresh_dir("gen")});
  ASSERT_EQ(r.status, 0) << r.err;
  const InputSignal s = read_signal_csv(r.artifacts.at(0));
  EXPECT_NEAR(s.samples.cwiseAbs().maxCoeff(), deg2rad(3.0), 1e-9);
  EXPECT_EQ(s.size(), 1000);
  EXPECT_EQ(fs::path(r.artifacts[0]).filename().string().rfind("longitudinal_gen_", 0), 0u);
}

TEST(Cli, CompareBaselineWithItselfIsZero) {
  const std::string dir = fresh_dir("compare_self");
  const Invocation g = invoke({"gen", "--config", kConfigs + "lateral_rudder.json", "--out", dir});
  ASSERT_EQ(g.status, 0) << g.err;
  const Invocation c = invoke({"compare", "--config", kConfigs + "lateral_rudder.json", "--out", dir, "--baseline",
                               g.artifacts.at(0), "--candidate", g.artifacts.at(0)});
  ASSERT_EQ(c.status, 0) << c.err;
  const auto rows = read_csv(find_artifact(c, ".csv"));
  ASSERT_EQ(rows.size(), 12u);
  for (size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(std::stod(rows[i][4]), 0.0) << rows[i][0];
}

TEST(Cli, OedThenInfoReproducesCriterion) {
  const Invocation& o = oed_run();
  ASSERT_EQ(o.status, 0) << o.err;
  const json report = json::parse(slurp(find_artifact(o, ".json")));
  EXPECT_EQ(report["status"], "converged");
  EXPECT_LE(report["mean_delta_pct"].get<double>(), -20.0);

  const Invocation i = invoke({"info", "--config", kConfigs + "longitudinal.json", "--out", fresh_dir("oed_info"),
                               "--signal", find_artifact(o, ".csv")});
  ASSERT_EQ(i.status, 0) << i.err;
  const json info = json::parse(slurp(i.artifacts.at(0)));
  const double a = report["objective"].get<double>();
  EXPECT_NEAR(info["report"]["a_criterion_scaled"].get<double>(), a, 1e-9 * a);
}

TEST(Cli, ScreenAndQuantizeOptimizedSignal) {
  const Invocation& o = oed_run();
  ASSERT_EQ(o.status, 0) << o.err;
  const std::string dir = fresh_dir("screen");
  const Invocation s = invoke({"screen", "--config", kConfigs + "longitudinal.json", "--out", dir, "--signal",
                               find_artifact(o, ".csv")});
  ASSERT_EQ(s.status, 0) << s.err;
  const json j = json::parse(slurp(find_artifact(s, ".json")));
  EXPECT_TRUE(j["passed"].get<bool>());
  const auto rows = read_csv(find_artifact(s, ".csv"));
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i][0] == "theta") {
      EXPECT_EQ(rows[i][1], "deg");
      EXPECT_DOUBLE_EQ(std::stod(rows[i][4]), -30.0);
    }

  const Invocation q = invoke({"quantize", "--config", kConfigs + "longitudinal.json", "--out", dir, "--signal",
                               find_artifact(o, ".csv")});
  ASSERT_EQ(q.status, 0) << q.err;
  ASSERT_EQ(q.artifacts.size(), 2u);
  const auto steps = read_csv(q.artifacts[0]);
  ASSERT_GT(steps.size(), 1u);
  for (size_t i = 1; i < steps.size(); ++i) EXPECT_GE(std::stod(steps[i][2]), 0.1 - 1e-9);
}

TEST(Cli, SameSeedGivesIdenticalArtifacts) {
  const auto pipeline = [](const std::string& dir) {
    std::vector<std::string> out;
    for (const char* sub : {"trim", "gen", "info", "screen"}) {
      const Invocation r = invoke({sub, "--config", kConfigs + "lateral_aileron.json", "--seed", "7", "--out", dir});
      EXPECT_EQ(r.status, 0) << sub << r.err;
      out.insert(out.end(), r.artifacts.begin(), r.artifacts.end());
    }
    return out;
  };
  const auto a = pipeline(fresh_dir("det_a"));
  const auto b = pipeline(fresh_dir("det_b"));
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(fs::path(a[i]).filename(), fs::path(b[i]).filename());
    EXPECT_EQ(slurp(a[i]), slurp(b[i]));
  }
}

TEST(Cli, SeedOverrideIsRecorded) {
  const std::string dir = fresh_dir("seed");
  json j = longitudinal_json();
  j["screen"] = {{"perturbation_pct", 60.0}, {"samples", 8}};
  const std::string cfg = write_config(dir, j);
  const auto recorded = [&](const std::string& seed) {
    const Invocation r = invoke({"screen", "--config", cfg, "--seed", seed, "--out", dir});
    EXPECT_EQ(r.status, 0) << r.err;
    return json::parse(slurp(find_artifact(r, ".json")))["seed"].get<std::uint64_t>();
  };
  EXPECT_EQ(recorded("1"), 1u);
  EXPECT_EQ(recorded("2"), 2u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).status, kExitValidation);
  EXPECT_EQ(invoke({"fly"}).status, kExitValidation);
  EXPECT_EQ(invoke({"trim", "--config", "/nonexistent/config.json"}).status, kExitValidation);
  EXPECT_EQ(invoke({"--help"}).status, kExitSuccess);

  const std::string dir = fresh_dir("exit");
  json j = longitudinal_json();
  j.erase("baseline");
  const Invocation no_baseline = invoke({"gen", "--config", write_config(dir, j), "--out", dir});
  EXPECT_EQ(no_baseline.status, kExitValidation);
  EXPECT_NE(no_baseline.err.find("/baseline"), std::string::npos);

  j = longitudinal_json();
  j["solver"]["max_outer_iterations"] = 1;
  const Invocation capped = invoke({"oed", "--config", write_config(dir, j), "--out", dir});
  EXPECT_EQ(capped.status, kExitNonConvergence);
  EXPECT_EQ(capped.artifacts.size(), 2u);  // artifacts are still written

  EXPECT_EQ(invoke({"compare", "--config", kConfigs + "longitudinal.json", "--out", dir}).status, kExitValidation);
  EXPECT_EQ(invoke({"info", "--config", kConfigs + "longitudinal.json", "--dt", "0.003", "--out", dir}).status,
            kExitValidation);
}
