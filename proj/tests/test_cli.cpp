#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = arithreg::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "arithreg_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli count of three full sets") {
  const auto full = write("full5.txt", "0\n1\n2\n3\n4\n");
  const Run r = run({"count", "--group", "5", "--sets", full, full, full});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["result"]["value"] == 25.0);
  CHECK(j["result"]["brute_force"] == 25.0);
  CHECK(j["config"]["command"] == "count");
  CHECK(j["version"].is_string());
}

TEST_CASE("cli regularize-f2 on a hyperplane writes a trace") {
  std::string text;
  for (int x = 0; x < 32; ++x) {
    text += "0";
    for (int b = 4; b >= 0; --b) text += "," + std::to_string((x >> b) & 1);
    text += "\n";
  }
  const auto set = write("hyper.txt", text);
  const auto trace = (scratch() / "trace.json").string();
  const Run r = run({"regularize-f2", "--group", "2^6", "--set", set, "--eps", "0.1", "--trace", trace});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["result"]["iterations"].get<int>() >= 1);
  const json t = json::parse(slurp(trace));
  CHECK(t["dims"] == json::array({6, 5}));
  CHECK(t["witnesses"][0][0] == "100000");
}

TEST_CASE("cli tower reports the dimension sequence") {
  const Run r = run({"tower", "--n", "11", "--depth", "3", "--seed", "7"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["result"]["dims"] == json::array({0, 1, 2, 8}));
  CHECK(j["result"]["all_hold"] == true);
  for (const auto& c : j["result"]["level_checks"]) {
    CHECK(c.contains("escaping_fraction"));
    CHECK(c.contains("min_coefficient_ratio"));
  }
  const auto h = write("h.txt", "0,0,0,1,0,0,0,0,0,0,0\n0,0,0,0,1,0,0,0,0,0,0\n");
  const Run v = run({"tower", "--n", "11", "--depth", "3", "--seed", "7", "--verify", h, "--samples", "0"});
  REQUIRE(v.code == 0);
  std::size_t user = 0;
  const json vj = json::parse(v.out);
  for (const auto& c : vj["result"]["level_checks"]) user += c["subgroup"] == "user" ? 1 : 0;
  CHECK(user == 3);
}

TEST_CASE("cli reports are byte-identical across runs") {
  const auto set = write("a.txt", "1\n2\n5\n9\n11\n17\n20\n");
  const std::vector<std::vector<std::string>> cmds{
      {"tower", "--n", "7", "--depth", "2", "--seed", "3"},
      {"bhk", "--group", "21", "--set", set, "--eps", "0.1", "--regularity-path"},
      {"bhk", "--interval", "21", "--set", set, "--eps", "0.2"},
      {"sumfree", "--n", "21", "--set", set, "--eps", "0.05"},
      {"regularize", "--group", "21", "--sets", set, set, set, "--eps", "0.1", "--mode", "scaled", "--scale", "4"},
      {"remove", "--group", "21", "--sets", set, set, set, "--eps", "0.05"},
      {"bohr-check", "--group", "21", "--chars", "2", "--delta", "0.3", "--delta-prime", "0.001"}};
  for (const auto& c : cmds) {
    const Run a = run(c);
    const Run b = run(c);
    CHECK_MESSAGE(a.code == 0, c.front() << ": " << a.err);
    CHECK(a.out == b.out);
  }
  const auto out1 = (scratch() / "o1.csv").string();
  const auto out2 = (scratch() / "o2.csv").string();
  CHECK(run({"--out", out1, "--format", "csv", "tower", "--n", "7", "--depth", "2", "--seed", "3"}).code == 0);
  CHECK(run({"tower", "--n", "7", "--depth", "2", "--seed", "3", "--out", out2, "--format", "csv"}).code == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(out1).rfind("bound,cosets_checked", 0) == 0);
}

TEST_CASE("cli exit codes") {
  const auto set = write("b.txt", "1\n2\n");
  CHECK(run({}).code == 2);
  CHECK(run({"count", "--group", "5"}).code == 2);
  CHECK(run({"count", "--group", "5", "--sets", "/nonexistent/file"}).code == 2);
  CHECK(run({"count", "--group", "5x", "--sets", set, set}).code == 2);
  CHECK(run({"count", "--group", "5", "--sets", set, set, "--unknown"}).code == 2);
  CHECK(run({"regularize", "--group", "5", "--sets", set, "--eps", "1.5"}).code == 2);
  CHECK(run({"bhk", "--group", "10", "--set", set, "--eps", "0.1"}).code == 2);
  CHECK(run({"bhk", "--group", "11", "--interval", "11", "--set", set, "--eps", "0.1"}).code == 2);
  CHECK(run({"tower", "--n", "2", "--depth", "2"}).code == 2);
  CHECK(run({"tower", "--n", "30", "--depth", "1"}).code == 3);
  CHECK(run({"--help"}).code == 0);
  // Inequality outcomes are data: a failing bound still exits 0.
  const Run b = run({"bohr-check", "--group", "21", "--chars", "2", "--delta", "0.3", "--tau", "0.01"});
  CHECK(b.code == 0);
  CHECK(b.out.find("\"holds\": false") != std::string::npos);
}

TEST_CASE("cli selfcheck detects injected faults") {
  const Run ok = run({"selfcheck"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const Run sign = run({"selfcheck", "--mutate", "dft-sign"});
  CHECK(sign.code == 1);
  CHECK(sign.out.find("FAIL dft-parseval") != std::string::npos);
  const Run width = run({"selfcheck", "--mutate", "second-width"});
  CHECK(width.code == 1);
  CHECK(width.out.find("FAIL pair-nesting") != std::string::npos);
  CHECK(width.out.find("FAIL dft-parseval") == std::string::npos);
}
