#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffrplan/cli.hpp"
#include "ffrplan/config.hpp"
#include "ffrplan/errors.hpp"

using namespace ffr;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "ffr_cli_test";

std::string write_config(const char* name, const std::string& body) {
  fs::create_directories(kDir);
  const fs::path p = kDir / name;
  std::ofstream f(p);
  f << body;
  return p.string();
}

int run(std::vector<std::string> args) {
  std::vector<const char*> argv{"ffrplan"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kAnalyzeCfg = R"({
  "partition": {"zeta": 0.52, "omega": 0.7},
  "scheduler": ["rr"],
  "rate_model": [{"type": "cra"}],
  "load": {"mean_users": [4.0]},
  "sweep": {"omega_points": 5},
  "output_dir": "OUT"
})";

}  // namespace

TEST_CASE("config parsing defaults and validation") {
  const RunConfig cfg = parse_config("{}");
  CHECK(cfg.omega == doctest::Approx(0.7));
  CHECK(cfg.zeta == doctest::Approx(0.52));
  CHECK(cfg.radio.N_b == 100);
  CHECK(cfg.schedulers.size() == 1);
  CHECK(cfg.mean_users.size() == 1);
  CHECK(cfg.partition().N_E == 16);

  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"bogus_key": 1})"), doctest::Contains("bogus_key"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"load": {"bogus_sub": 1}})"),
                       doctest::Contains("bogus_sub"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"partition": {"zeta": 0.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"partition": {"zeta": 0.52, "edge_rbs": 16}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scheduler": []})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scheduler": "bogus"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"rate_model": {"type": "tbd"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"load": {"mean_users": -2}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"sweep": {"omega_points": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"partition": {"omega": 0.01}})"), ConfigError);

  // edge_rbs is an accepted alternative to zeta
  const RunConfig alt = parse_config(R"({"partition": {"omega": 0.8, "edge_rbs": 12}})");
  CHECK(alt.partition().N_E == 12);
  CHECK(alt.zeta == doctest::Approx(0.64));
}

TEST_CASE("canonical hash is stable and key-order independent") {
  const RunConfig a = parse_config(R"({"seed": 9, "partition": {"zeta": 0.52, "omega": 0.7}})");
  const RunConfig b = parse_config(R"({"partition": {"omega": 0.7, "zeta": 0.52}, "seed": 9})");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  const RunConfig c = parse_config(R"({"seed": 10})");
  CHECK(a.hash() != c.hash());
}

TEST_CASE("analyze writes the expected csv") {
  const fs::path out = kDir / "out_analyze";
  fs::remove_all(out);
  const std::string cfg = write_config("analyze.json", kAnalyzeCfg);
  const int rc = run({"analyze", "--config", cfg, "--out", out.string()});
  CHECK(rc == 0);

  const std::string csv = slurp(out / "analyze.csv");
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "M,omega,zeta,scheduler,rate_model,tau,tau_centre,tau_edge");
  int rows = 0;
  bool saw_omega_one = false;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.rfind("4,", 0) == 0);
    CHECK(line.find(",rr,cra,") != std::string::npos);
    if (line.find("4,1,") == 0) {
      saw_omega_one = true;
      // omega = 1: nobody in the edge region -> tau_edge must be zero
      const auto last = line.rfind(',');
      CHECK(line.substr(last + 1) == "0");
    }
  }
  CHECK(rows == 5);  // sweep omega_points
  CHECK(saw_omega_one);

  // re-running produces a byte-identical file
  const std::string before = slurp(out / "analyze.csv");
  CHECK(run({"analyze", "--config", cfg, "--out", out.string()}) == 0);
  CHECK(slurp(out / "analyze.csv") == before);
}

TEST_CASE("output directory precedence: --out beats the environment") {
  const std::string cfg = write_config("analyze_env.json", R"({
    "scheduler": "rr", "rate_model": {"type": "cra"}, "load": {"mean_users": 3.0}
  })");
  const fs::path env_dir = kDir / "out_env";
  const fs::path cli_dir = kDir / "out_cli";
  fs::remove_all(env_dir);
  fs::remove_all(cli_dir);

  setenv("FFR_OUT_DIR", env_dir.string().c_str(), 1);
  CHECK(run({"analyze", "--config", cfg}) == 0);
  CHECK(fs::exists(env_dir / "analyze.csv"));

  CHECK(run({"analyze", "--config", cfg, "--out", cli_dir.string()}) == 0);
  CHECK(fs::exists(cli_dir / "analyze.csv"));
  unsetenv("FFR_OUT_DIR");
}

TEST_CASE("exit codes") {
  CHECK(run({"analyze", "--config", (kDir / "nonexistent.json").string()}) == 2);
  const std::string bad = write_config("bad.json", R"({"wrong": true})");
  CHECK(run({"analyze", "--config", bad}) == 2);
  const std::string good = write_config("tiny.json", R"({"load": {"mean_users": 2.0}})");
  CHECK(run({"analyze", "--config", good, "--seed", "notanumber"}) == 2);
  CHECK(run({"bogus_subcommand"}) != 0);
  CHECK(run({}) != 0);  // a subcommand is required
}

TEST_CASE("optimize writes ledger and json, and the ledger appends") {
  const fs::path out = kDir / "out_opt";
  fs::remove_all(out);
  const std::string cfg = write_config("opt.json", R"({
    "scheduler": "rr",
    "rate_model": {"type": "cra"},
    "load": {"mean_users": 6.0},
    "design": {"type": "apd"}
  })");
  CHECK(run({"optimize", "--config", cfg, "--out", out.string()}) == 0);
  REQUIRE(fs::exists(out / "ledger.csv"));
  REQUIRE(fs::exists(out / "optimize.json"));

  const auto j = nlohmann::json::parse(slurp(out / "optimize.json"));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["design"] == "apd");
  CHECK(j[0]["scheduler"] == "rr");
  CHECK(j[0]["rate_model"] == "cra");
  CHECK(j[0]["M"].get<double>() == doctest::Approx(6.0));
  CHECK(j[0]["tau_star"].get<double>() > 0.0);
  CHECK(j[0]["report"]["provenance"] == "analytical");

  CHECK(run({"optimize", "--config", cfg, "--out", out.string()}) == 0);
  std::istringstream ledger(slurp(out / "ledger.csv"));
  int lines = 0;
  std::string l;
  while (std::getline(ledger, l)) ++lines;
  CHECK(lines == 3);  // header + two appended rows

  // design override on the command line
  CHECK(run({"optimize", "--config", cfg, "--out", out.string(), "--design", "qoscd", "--q",
             "0.1"}) == 0);
  const auto j2 = nlohmann::json::parse(slurp(out / "optimize.json"));
  CHECK(j2[0]["design"] == "qoscd");
  CHECK(j2[0]["q"].get<double>() == doctest::Approx(0.1));
  // invalid q rejected
  CHECK(run({"optimize", "--config", cfg, "--q", "1.7"}) == 2);
}

TEST_CASE("simulate writes comparison json and per-drop csv") {
  const fs::path out = kDir / "out_sim";
  fs::remove_all(out);
  const std::string cfg = write_config("sim.json", R"({
    "scheduler": "rr",
    "rate_model": [{"type": "cra"}, {"type": "dra"}],
    "load": {"mean_users": 3.0},
    "sim": {"drops": 8, "max_drops": 8, "slots": 10, "ci_target": 5.0},
    "seed": 21
  })");
  CHECK(run({"simulate", "--config", cfg, "--out", out.string()}) == 0);
  REQUIRE(fs::exists(out / "simulate.json"));
  REQUIRE(fs::exists(out / "drops_M3_rr.csv"));

  const auto j = nlohmann::json::parse(slurp(out / "simulate.json"));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  const auto& r = j[0];
  CHECK(r["M"].get<double>() == doctest::Approx(3.0));
  CHECK(r["scheduler"] == "rr");
  CHECK(r["seed"] == 21);
  CHECK(r["drops"] == 8);
  CHECK(r["config_hash"].get<std::string>().size() == 16);
  CHECK(r["conservation_ok"].get<bool>());
  for (const char* model : {"cra", "dra"}) {
    REQUIRE(r["models"].contains(model));
    const auto& m = r["models"][model];
    CHECK(m["analytical"]["provenance"] == "analytical");
    CHECK(m["simulated"]["provenance"] == "simulated");
    CHECK(m["relative_error"].contains("tau"));
    CHECK(m["relative_error"].contains("tau_centre"));
    CHECK(m["relative_error"].contains("tau_edge"));
    CHECK(m["simulated"].contains("tau_ci95_rel"));
    CHECK(m["simulated"].contains("jain_centre"));
  }

  const std::string drops = slurp(out / "drops_M3_rr.csv");
  std::istringstream in(drops);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "drop,tau_cra,tau_dra");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8);

  // seed override changes the per-drop trace
  CHECK(run({"simulate", "--config", cfg, "--out", out.string(), "--seed", "22"}) == 0);
  const auto j2 = nlohmann::json::parse(slurp(out / "simulate.json"));
  CHECK(j2[0]["seed"] == 22);
  CHECK(slurp(out / "drops_M3_rr.csv") != drops);
}
