#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hn/config.hpp"
#include "hn/error.hpp"
#include "hn/experiments.hpp"

using namespace hn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("hnsim-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HNSIM_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("config parsing") {
  Config cfg = Config::parse_text("a = 1\n# comment\nb = two # trailing\n");
  CHECK(cfg.get_int("a") == 1);
  CHECK(cfg.get_string("b") == "two");
  CHECK_THROWS_AS(Config::parse_text("oops\n"), ParameterError);
  CHECK_THROWS_AS(Config::parse_text("a = 1\na = 2\n"), ParameterError);

  SUBCASE("unknown keys are rejected and named") {
    Config c = Config::parse_text("experiment = build\nbogus_key = 3\n");
    c.get_string("experiment");
    try {
      c.reject_unknown();
      FAIL("expected rejection");
    } catch (const ParameterError& e) {
      CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
  }

  SUBCASE("malformed values name the key") {
    Config c = Config::parse_text("n = nope\n");
    try {
      c.get_uint("n");
      FAIL("expected rejection");
    } catch (const ParameterError& e) {
      CHECK(std::string(e.what()).find("'n'") != std::string::npos);
    }
  }
}

TEST_CASE("experiments rerun byte-identically") {
  struct Case {
    const char* name;
    const char* text;
  };
  const Case cases[] = {
      {"build", "experiment = build\nregion = torus\nside = 8\npoints = poisson\nlambda = 1.5\n"},
      {"degree", "experiment = degree\nside = 5\nlambda = 20\nseeds = 6\n"},
      {"height", "experiment = height\ntrials = 500\nn = 50\n"},
      {"route",
       "experiment = route\nregion = square\nside = 6\npoints = poisson\nlambda = 3\npairs = "
       "20\n"},
      {"hops", "experiment = hops\nside = 6\nlambda = 15\ninstances = 2\npairs = 300\n"},
      {"stretch",
       "experiment = stretch\nside = 1\nlambda = 220\ninstances = 3\ndistance = 0.1,0.3\n"},
      {"wsn",
       "experiment = wsn\nn = 16\nside = 100\nprotocols = hn-unlimited,leach\nseed = 3\n"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.name);
    TempDir d1(std::string(c.name) + "-a");
    TempDir d2(std::string(c.name) + "-b");
    Config cfg1 = Config::parse_text(c.text);
    Config cfg2 = Config::parse_text(c.text);
    const auto arts1 = run_experiment(cfg1, d1.path.string(), 2);
    const auto arts2 = run_experiment(cfg2, d2.path.string(), 1);
    REQUIRE(arts1.size() == arts2.size());
    for (std::size_t i = 0; i < arts1.size(); ++i) {
      CHECK(slurp(arts1[i]) == slurp(arts2[i]));
    }
  }
}

TEST_CASE("manifest round-trip reproduces the artifacts") {
  TempDir d1("manifest-a");
  TempDir d2("manifest-b");
  Config cfg = Config::parse_text("experiment = build\npoints = poisson\nlambda = 2\nseed = 5\n");
  const auto arts = run_experiment(cfg, d1.path.string(), 1);
  Config again = Config::parse_file((d1.path / "manifest.txt").string());
  const auto arts2 = run_experiment(again, d2.path.string(), 1);
  REQUIRE(arts.size() == arts2.size());
  for (std::size_t i = 0; i < arts.size(); ++i) {
    CHECK(slurp(arts[i]) == slurp(arts2[i]));
  }
}

TEST_CASE("wsn experiment emits the three figure CSVs with pinned headers") {
  TempDir dir("wsn-figs");
  Config cfg = Config::parse_text("experiment = wsn\nn = 12\nseed = 2\n");
  run_experiment(cfg, dir.path.string(), 2);
  CHECK(slurp(dir.path / "fig4a.csv").rfind("run,t_seconds,cum_effective\n", 0) == 0);
  CHECK(slurp(dir.path / "fig4b.csv").rfind("run,cum_energy_j,cum_effective\n", 0) == 0);
  CHECK(slurp(dir.path / "fig4c.csv").rfind("run,t_seconds,nodes_alive\n", 0) == 0);
  const std::string rounds = slurp(dir.path / "rounds.csv");
  CHECK(rounds.rfind("round,t_seconds,nodes_alive,raw_signals,effective_signals,cum_effective,"
                     "energy_j,cum_energy_j,protocol,aggregation\n",
                     0) == 0);
  CHECK(rounds.find("\r") == std::string::npos);  // LF endings only
}

TEST_CASE("dynamics experiment replays a trace") {
  TempDir dir("replay");
  const fs::path trace = dir.path / "trace.txt";
  {
    std::ofstream out(trace);
    out << "ADD 1.0 1.0 1\nADD 2.0 2.0 2\nWEIGHT 1 4\nREMOVE 0\n";
  }
  Config cfg = Config::parse_text("experiment = dynamics\npoints = uniform\nn = 5\ntrace = " +
                                  trace.string() + "\n");
  const auto arts = run_experiment(cfg, dir.path.string(), 1);
  const std::string deltas = slurp(dir.path / "deltas.csv");
  CHECK(deltas.rfind("event,kind,added_edges,removed_edges,reparented,affected\n", 0) == 0);
  CHECK(deltas.find("ADD") != std::string::npos);
  CHECK(deltas.find("REMOVE") != std::string::npos);
  const std::string graph = slurp(dir.path / "final_graph.txt");
  CHECK(graph.rfind("hn-graph v1\n", 0) == 0);
}

TEST_CASE("cli binary surface") {
  SUBCASE("missing config file fails with a nonzero exit") {
    CHECK(run_cli("run --config /nonexistent/nope.cfg") != 0);
  }
  SUBCASE("unknown verify suite fails") { CHECK(run_cli("verify no-such-suite") != 0); }
  SUBCASE("graph-dump produces a graph file") {
    TempDir dir("dump");
    const fs::path cfg = dir.path / "g.cfg";
    {
      std::ofstream out(cfg);
      out << "points = poisson\nlambda = 1\nseed = 4\n";
    }
    CHECK(run_cli("graph-dump --config " + cfg.string() + " --out " + dir.path.string()) == 0);
    CHECK(fs::exists(dir.path / "graph.txt"));
  }
  SUBCASE("the HNSIM_OUT_DIR override is honored") {
    TempDir dir("envout");
    const fs::path cfg = dir.path / "g.cfg";
    {
      std::ofstream out(cfg);
      out << "experiment = build\npoints = uniform\nn = 3\n";
    }
    const std::string cmd = "HNSIM_OUT_DIR=" + (dir.path / "envdir").string() + " " +
                            std::string(HNSIM_PATH) + " run --config " + cfg.string() +
                            " >/dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(dir.path / "envdir" / "graph.txt"));
  }
}

TEST_CASE("verify suite dispatch") {
  std::ostringstream sink;
  CHECK_THROWS_AS(run_verify_suite("bogus", sink), ParameterError);
  CHECK(run_verify_suite("energy-conservation", sink));
}
