#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using robtrade::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "robtrade");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("robtrade_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

json load(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::string text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("cli: usage errors map to exit code 2") {
  CHECK(cli({}).code == robtrade::cli::kExitConfig);
  CHECK(cli({"nonsense"}).code == robtrade::cli::kExitConfig);
  TempDir dir;
  CHECK(cli({"gen", "--n", "5", "--out", dir / "g"}).code == robtrade::cli::kExitConfig);
  CHECK(cli({"gen", "--n", "5", "--d", "x", "--out", dir / "g"}).code == robtrade::cli::kExitConfig);
  CHECK(cli({"gen", "--n", "5", "--d", "3", "--design", "cube", "--out", dir / "g"}).code ==
        robtrade::cli::kExitConfig);
  CHECK(cli({"curve", "--config", dir / "missing.cfg"}).code == robtrade::cli::kExitConfig);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cli: gen writes a CSV and a deterministic envelope") {
  TempDir dir;
  const std::vector<std::string> args = {"gen", "--design", "bernoulli", "--n", "6", "--d", "9",
                                         "--s", "2", "--seed", "4"};
  auto a = args, b = args;
  a.insert(a.end(), {"--out", dir / "a"});
  b.insert(b.end(), {"--out", dir / "b"});
  REQUIRE(cli(a).code == 0);
  REQUIRE(cli(b).code == 0);
  CHECK(text(dir / "a.csv") == text(dir / "b.csv"));
  auto ja = load(dir / "a.json"), jb = load(dir / "b.json");
  CHECK(ja.contains("created_at"));
  for (auto* j : {&ja, &jb}) {
    j->erase("created_at");
    (*j)["result"].erase("csv");
    (*j)["config"].erase("out");
  }
  CHECK(ja == jb);
  CHECK(ja["command"] == "gen");
  CHECK(ja["seed"] == 4);
}

TEST_CASE("cli: config file then flags") {
  TempDir dir;
  {
    std::ofstream cfg(dir / "gen.cfg");
    cfg << "# sizes\nn = 4\nd = 3\nseed = 1\n";
  }
  REQUIRE(cli({"gen", "--config", dir / "gen.cfg", "--d", "2", "--out", dir / "g"}).code == 0);
  const auto j = load(dir / "g.json");
  CHECK(j["config"]["n"] == "4");
  CHECK(j["config"]["d"] == "2");
  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "colour = red\n";
  }
  CHECK(cli({"gen", "--config", dir / "bad.cfg", "--out", dir / "h"}).code == robtrade::cli::kExitConfig);
}

TEST_CASE("cli: location ifa from a CSV") {
  TempDir dir;
  {
    std::ofstream csv(dir / "loc.csv");
    csv << "0,0\n0,0\n3,0\n";
  }
  const auto r = cli({"ifa", "--model", "location", "--data", dir / "loc.csv", "--epsilon", "0.01",
                      "--out", dir / "ifa"});
  REQUIRE(r.code == 0);
  const auto j = load(dir / "ifa.json");
  CHECK(j["result"]["ifa"][0].get<double>() == doctest::Approx(-1.0 / 3).epsilon(1e-9));
  CHECK(j["result"]["degenerate_samples"].empty());
  CHECK(fs::exists(dir / "ifa_sweep.csv"));
}

TEST_CASE("cli: non-stationary theta-hat maps to exit code 4") {
  TempDir dir;
  {
    std::ofstream csv(dir / "loc.csv");
    csv << "0,0\n0,0\n3,0\n";
    std::ofstream th(dir / "theta.json");
    th << "[5]\n";
  }
  const auto r = cli({"ifa", "--model", "location", "--data", dir / "loc.csv", "--theta",
                      dir / "theta.json", "--out", dir / "ifa"});
  CHECK(r.code == robtrade::cli::kExitStationarity);
}

TEST_CASE("cli: linreg-check rejects noisy data") {
  TempDir dir;
  const auto r = cli({"linreg-check", "--n", "6", "--d", "10", "--s", "2", "--noise_std", "0.1",
                      "--re_samples", "10", "--out", dir / "lr"});
  CHECK((r.code == robtrade::cli::kExitConfig || r.code == robtrade::cli::kExitPrecondition));
}

TEST_CASE("cli: curve with epsilon 0 has no spread") {
  TempDir dir;
  const auto r = cli({"curve", "--model", "linear", "--n", "20", "--d", "3", "--noise_std", "0.1",
                      "--epsilon", "0", "--xi_grid", "0.2,0.5,0.8", "--out", dir / "c"});
  REQUIRE(r.code == 0);
  const auto j = load(dir / "c.json")["result"];
  REQUIRE(j["points"].size() == 3);
  const double a0 = j["points"][0]["alpha"];
  for (const auto& p : j["points"]) {
    CHECK(p["converged"].get<bool>());
    CHECK(p["alpha"].get<double>() == doctest::Approx(a0).epsilon(1e-9));
    CHECK(p["beta"].get<double>() == doctest::Approx(a0).epsilon(1e-9));
  }
  CHECK(fs::exists(dir / "c.csv"));
  CHECK(fs::exists(dir / "c_frontier.gp"));
}
