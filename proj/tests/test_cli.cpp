#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "topo/cli.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = topo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Scratch file helper; files land in the test's temp directory.
std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream f(path);
  f << content;
  return path.string();
}

}  // namespace

TEST_CASE("count reproduces the small topology counts with residues") {
  auto res = run_cli({"count", "--builtin", "true", "--n", "0..5",
                      "--moduli", "5"});
  REQUIRE(res.exit_code == 0);
  json rows = json::parse(res.out);
  REQUIRE(rows.size() == 6);
  const std::vector<std::string> expected{"1", "1", "4", "29", "355", "6942"};
  for (int n = 0; n <= 5; ++n) {
    CHECK(rows[n]["n"] == n);
    CHECK(rows[n]["count"] == expected[n]);
  }
  CHECK(rows[5]["mod"]["5"] == 2);
  CHECK(rows[5]["mode"] == "hard-wired");
}

TEST_CASE("count output is byte-identical across worker counts") {
  auto one = run_cli({"--jobs", "1", "count", "--builtin", "t0", "--n", "0..4",
                      "--moduli", "2,3"});
  auto eight = run_cli({"--jobs", "8", "count", "--builtin", "t0", "--n",
                        "0..4", "--moduli", "2,3"});
  REQUIRE(one.exit_code == 0);
  REQUIRE(eight.exit_code == 0);
  CHECK(one.out == eight.out);
}

TEST_CASE("count formats: csv and plain") {
  auto csv = run_cli({"--format", "csv", "count", "--builtin", "true", "--n",
                      "2..3", "--moduli", "5"});
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.out == "n,count,mod5\n2,4,4\n3,29,4\n");

  auto plain = run_cli({"--format", "plain", "count", "--builtin", "true",
                        "--n", "3"});
  REQUIRE(plain.exit_code == 0);
  CHECK(plain.out == "n=3 count=29\n");
}

TEST_CASE("count honors formula text and free mode") {
  auto text = run_cli({"count", "--formula", "all point x. ex open U. x in U",
                       "--n", "2"});
  REQUIRE(text.exit_code == 0);
  CHECK(json::parse(text.out)[0]["count"] == "4");

  auto free_mode = run_cli({"count", "--builtin", "minimal_open_const(1)",
                            "--mode", "free", "--n", "1"});
  REQUIRE(free_mode.exit_code == 0);
  json row = json::parse(free_mode.out)[0];
  CHECK(row["mode"] == "free");
  CHECK(row["r"] == 1);
}

TEST_CASE("count --partitions exposes topological set partitions") {
  auto res = run_cli({"count", "--partitions", "open", "--n", "2", "--blocks",
                      "2"});
  REQUIRE(res.exit_code == 0);
  json rows = json::parse(res.out);
  CHECK(rows[0]["count"] == "1");  // only the discrete topology qualifies

  auto breakdown = run_cli({"count", "--partitions", "connected", "--n",
                            "0..3", "--breakdown"});
  REQUIRE(breakdown.exit_code == 0);
  json all = json::parse(breakdown.out);
  REQUIRE(all.size() == 4);
  CHECK(all[3]["breakdown"].size() == 5);  // B(3) partitions listed

  CHECK(run_cli({"count", "--partitions", "sideways", "--n", "2"}).exit_code ==
        2);
}

TEST_CASE("enumerate counts and emits structures") {
  auto count = run_cli({"enumerate", "--kind", "preorder", "--n", "2"});
  REQUIRE(count.exit_code == 0);
  CHECK(json::parse(count.out)["count"] == "4");

  auto emit = run_cli({"enumerate", "--kind", "t0-topology", "--n", "2",
                       "--emit"});
  REQUIRE(emit.exit_code == 0);
  std::istringstream lines(emit.out);
  std::string line;
  int parsed = 0;
  while (std::getline(lines, line)) {
    json j = json::parse(line);
    CHECK(j.contains("opens"));
    ++parsed;
  }
  CHECK(parsed == 3);

  CHECK(run_cli({"enumerate", "--kind", "nonsense", "--n", "2"}).exit_code == 2);
}

TEST_CASE("eval on a structure file") {
  std::string sierpinski =
      write_temp("topocount_sierpinski.json", R"({"n":2,"opens":[[],[1],[1,2]]})");
  auto res = run_cli({"eval", "--builtin", "t0", "--structure", sierpinski});
  REQUIRE(res.exit_code == 0);
  CHECK(res.out == "true\n");

  auto connected = run_cli({"eval", "--builtin", "connected", "--structure",
                            sierpinski});
  CHECK(connected.out == "true\n");

  // Free variables via --bind; U must be an open set.
  auto bound = run_cli({"eval", "--formula", "x in U", "--structure",
                        sierpinski, "--bind", "x=1", "--bind", "U=open:{1,2}"});
  REQUIRE(bound.exit_code == 0);
  CHECK(bound.out == "true\n");
  auto not_open = run_cli({"eval", "--formula", "x in U", "--structure",
                           sierpinski, "--bind", "x=1", "--bind",
                           "U=open:{2}"});
  CHECK(not_open.exit_code == 1);  // {2} is not open in the Sierpinski space

  // Preorder structures switch the dialect: <= becomes available.
  std::string chain =
      write_temp("topocount_chain.json", R"({"n":2,"below":[[1],[1,2]]})");
  auto leq = run_cli({"eval", "--formula", "all point x. all point y. "
                      "(x <= y | y <= x)", "--structure", chain});
  REQUIRE(leq.exit_code == 0);
  CHECK(leq.out == "true\n");

  CHECK(run_cli({"eval", "--builtin", "t0", "--structure",
                 "/nonexistent.json"}).exit_code == 1);
}

TEST_CASE("translate renders the compiled formula") {
  auto psi = run_cli({"translate", "--direction", "psi", "--builtin", "t0"});
  REQUIRE(psi.exit_code == 0);
  CHECK(psi.out.find("<=") != std::string::npos);   // guards use the preorder
  CHECK(psi.out.find("open") == std::string::npos); // no open-set binders left

  auto phi = run_cli({"translate", "--direction", "phi", "--formula",
                      "all point x. x <= x"});
  REQUIRE(phi.exit_code == 0);
  CHECK(phi.out.find("all open") != std::string::npos);
  CHECK(phi.out.find("<=") == std::string::npos);

  CHECK(run_cli({"translate", "--direction", "sideways", "--builtin", "t0"})
            .exit_code == 2);
}

TEST_CASE("analyze emits the full report") {
  std::string bell = write_temp("topocount_bell.json", R"({
    "label": "bell",
    "offset": 0,
    "values": ["1","1","2","5","15","52","203","877","4140","21147","115975",
               "678570","4213597","27644437","190899322","1382958545",
               "10480142147","82864869804","682076806159","5832742205057",
               "51724158235372","474869816156751","4506715738447323",
               "44152005855084346","445958869294805289",
               "4638590332229999353","49631246523618756274",
               "545717047936059989389","6160539404599934652455",
               "71339801938860275191172","846749014511809332450147",
               "10293358946226376485095653","128064670049908713818925644",
               "1629595892846007606764728147","21195039388640360462388656799",
               "281600203019560266563340426570",
               "3819714729894818339975525681317",
               "52868366208550447901945575624941",
               "746289892095625330523099540639146",
               "10738823330774692832768857986425209"]})");
  auto res = run_cli({"analyze", "--seq", bell, "--moduli", "2,3",
                      "--max-order", "6"});
  REQUIRE(res.exit_code == 0);
  json j = json::parse(res.out);
  CHECK(j["label"] == "bell");
  CHECK(j["length"] == 40);
  REQUIRE(j["moduli"].size() == 2);
  CHECK(j["moduli"][0]["period"]["period"] == 3);
  CHECK(j["moduli"][0]["verdict"] == "consistent-with-MC-finite");
  CHECK(j["moduli"][1]["period"]["period"] == 13);

  // Plain text input, one value per line, with chunk statistics.
  std::string lines = write_temp("topocount_seq.txt",
                                 "1\n2\n4\n8\n16\n32\n64\n128\n256\n512\n");
  auto geo = run_cli({"analyze", "--seq", lines, "--moduli", "3",
                      "--max-order", "2", "--chunks", "3,1"});
  REQUIRE(geo.exit_code == 0);
  json g = json::parse(geo.out);
  CHECK(g["integer_recurrence"]["order"] == 1);
  CHECK(g["integer_recurrence"]["coeffs"][0] == "2");
  CHECK(g["chunks"]["base"] == 3);
}

TEST_CASE("verify suites run and exit accordingly") {
  auto ok = run_cli({"verify", "--suite", "stirling-identity", "--n", "4"});
  REQUIRE(ok.exit_code == 0);
  CHECK(ok.out.find("suite stirling-identity: PASS") != std::string::npos);

  auto roundtrip = run_cli({"verify", "--suite", "alexandroff-roundtrip",
                            "--n", "3"});
  CHECK(roundtrip.exit_code == 0);

  CHECK(run_cli({"verify", "--suite", "made-up", "--n", "3"}).exit_code == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({"frobnicate"}).exit_code == 2);
  CHECK(run_cli({"count", "--n", "2", "--builtin", "true", "--badflag"})
            .exit_code == 2);
  CHECK(run_cli({"count", "--n", "2"}).exit_code == 2);  // no formula source
  CHECK(run_cli({"count", "--n", "oops", "--builtin", "true"}).exit_code == 2);
  CHECK(run_cli({"count", "--n", "2", "--formula", "x = ="}).exit_code == 2);
  CHECK(run_cli({"count", "--n", "2", "--builtin", "true", "--mode", "loose"})
            .exit_code == 2);
  CHECK(run_cli({}).exit_code == 2);
  CHECK(run_cli({"--help"}).exit_code == 0);
}

TEST_CASE("runtime failures exit with 1") {
  // Enumeration cap exceeded.
  CHECK(run_cli({"count", "--builtin", "true", "--n", "9"}).exit_code == 1);
}

TEST_CASE("the result cache short-circuits recomputation") {
  auto path = std::filesystem::temp_directory_path() / "topocount_cli_cache.jsonl";
  std::remove(path.string().c_str());
  auto first = run_cli({"--cache", path.string(), "count", "--builtin", "true",
                        "--n", "4"});
  REQUIRE(first.exit_code == 0);
  REQUIRE(std::filesystem::exists(path));
  auto second = run_cli({"--cache", path.string(), "count", "--builtin",
                         "true", "--n", "4", "--moduli", "7"});
  REQUIRE(second.exit_code == 0);
  json row = json::parse(second.out)[0];
  CHECK(row["count"] == "355");
  CHECK(row["mod"]["7"] == 355 % 7);
  std::remove(path.string().c_str());
}

TEST_CASE("config file and environment override") {
  std::string cfg = write_temp("topocount_cfg.json",
                               R"({"enum_cap": 3, "format": "plain"})");
  auto res = run_cli({"--config", cfg, "count", "--builtin", "true", "--n",
                      "4"});
  CHECK(res.exit_code == 1);  // enum cap from config now rejects n = 4

  auto ok = run_cli({"--config", cfg, "count", "--builtin", "true", "--n",
                     "3"});
  REQUIRE(ok.exit_code == 0);
  CHECK(ok.out == "n=3 count=29\n");  // plain format from config

  setenv("TOPOCOUNT_CONFIG", cfg.c_str(), 1);
  auto via_env = run_cli({"count", "--builtin", "true", "--n", "3"});
  unsetenv("TOPOCOUNT_CONFIG");
  REQUIRE(via_env.exit_code == 0);
  CHECK(via_env.out == "n=3 count=29\n");

  CHECK(run_cli({"--config", "/nonexistent.json", "count", "--builtin",
                 "true", "--n", "2"}).exit_code == 1);
}
