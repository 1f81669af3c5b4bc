#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hallbridge/verify.hpp"

using namespace hallbridge;
using nlohmann::json;

namespace {

std::string data_path(const std::string& name) { return std::string(HB_DATA_DIR) + "/" + name; }

int run_cli(const std::string& args) {
  std::string cmd = std::string(HB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json strip_seconds(json j) {
  for (auto& c : j["checks"]) c.erase("seconds");
  return j;
}

}  // namespace

TEST_CASE("verify exits 0 on A2 and writes a well-formed report") {
  std::string out = "/tmp/hb_report_a2.json";
  int code = run_cli("verify " + data_path("a2_f2.json") + " --max-dim 2 --out " + out);
  CHECK(code == 0);
  json j = json::parse(read_file(out));
  CHECK(j["q"] == 2);
  CHECK(j["bound"] == 2);
  CHECK(j["gldim"] == 1);
  CHECK(j["checks"].is_array());
  bool saw_main = false;
  for (const auto& c : j["checks"]) {
    CHECK(c["failures"].empty());
    if (c["name"] == "main") saw_main = true;
  }
  CHECK(saw_main);
}

TEST_CASE("verify honors the checks subset") {
  std::string out = "/tmp/hb_report_subset.json";
  int code =
      run_cli("verify " + data_path("a2_f2.json") + " --max-dim 2 --checks phi,extiso --out " + out);
  CHECK(code == 0);
  json j = json::parse(read_file(out));
  std::set<std::string> names;
  for (const auto& c : j["checks"]) names.insert(c["name"].get<std::string>());
  CHECK(names == std::set<std::string>{"structural", "phi", "extiso"});
}

TEST_CASE("verify passes on the canonical (2,2,2) algebra") {
  std::string out = "/tmp/hb_canon.json";
  int code = run_cli("verify " + data_path("canonical222_f2.json") + " --max-dim 2 --out " + out);
  CHECK(code == 0);
  json j = json::parse(read_file(out));
  CHECK(j["gldim"] == 2);
  for (const auto& c : j["checks"]) CHECK(c["failures"].empty());
}

TEST_CASE("verify rejects bad inputs with exit 2") {
  CHECK(run_cli("verify " + data_path("loop_f2.json") + " --max-dim 2 --out /tmp/hb_loop.json") ==
        2);
  CHECK(run_cli("verify /nonexistent.json --max-dim 2") == 2);
  CHECK(run_cli("verify " + data_path("a2_f2.json") + " --max-dim 2 --checks nosuch --out "
                "/tmp/hb_bad.json") == 2);
}

TEST_CASE("verify reports are deterministic modulo timing") {
  std::string o1 = "/tmp/hb_det1.json", o2 = "/tmp/hb_det2.json";
  REQUIRE(run_cli("verify " + data_path("twocycle_f2.json") + " --max-dim 2 --out " + o1) == 0);
  REQUIRE(run_cli("verify " + data_path("twocycle_f2.json") + " --max-dim 2 --out " + o2) == 0);
  CHECK(strip_seconds(json::parse(read_file(o1))) == strip_seconds(json::parse(read_file(o2))));
}

TEST_CASE("verify with multiple workers matches a single-worker run") {
  std::string o1 = "/tmp/hb_w1.json", o4 = "/tmp/hb_w4.json";
  REQUIRE(run_cli("verify " + data_path("a2_f2.json") + " --max-dim 2 --workers 1 --out " + o1) ==
          0);
  REQUIRE(run_cli("verify " + data_path("a2_f2.json") + " --max-dim 2 --workers 4 --out " + o4) ==
          0);
  json j1 = strip_seconds(json::parse(read_file(o1)));
  json j4 = strip_seconds(json::parse(read_file(o4)));
  j1.erase("workers");
  j4.erase("workers");
  CHECK(j1 == j4);
}

TEST_CASE("hall table contains the [S1][S2] row") {
  std::string out = "/tmp/hb_table.json";
  REQUIRE(run_cli("table " + data_path("a2_f2.json") + " --max-dim 2 --which hall --out " + out) ==
          0);
  json j = json::parse(read_file(out));
  std::string s1id, s2id;
  for (const auto& c : j["classes"]) {
    if (c["dim_vector"] == json::array({1, 0})) s1id = c["id"];
    if (c["dim_vector"] == json::array({0, 1})) s2id = c["id"];
  }
  REQUIRE(!s1id.empty());
  REQUIRE(!s2id.empty());
  bool found = false;
  for (const auto& e : j["entries"]) {
    if (e["left"] == s1id && e["right"] == s2id) {
      found = true;
      CHECK(e["terms"].size() == 2);
      for (const auto& t : e["terms"]) {
        // both coefficients are t^{-1} = t/2
        CHECK(t["coeff"]["a_num"] == 0);
        CHECK(t["coeff"]["b_num"] == 1);
        CHECK(t["coeff"]["b_den"] == 2);
      }
    }
  }
  CHECK(found);
}

TEST_CASE("table at bound 0 has only the unit row") {
  std::string out = "/tmp/hb_table0.json";
  REQUIRE(run_cli("table " + data_path("a2_f2.json") + " --max-dim 0 --which hall --out " + out) ==
          0);
  json j = json::parse(read_file(out));
  CHECK(j["entries"].size() == 1);
}

TEST_CASE("dh table has rows for the E_A products") {
  std::string out = "/tmp/hb_dhtable.json";
  REQUIRE(run_cli("table " + data_path("a2_f2.json") + " --max-dim 1 --which dh --out " + out) ==
          0);
  json j = json::parse(read_file(out));
  CHECK(j["which"] == "dh");
  // 0, S1, S2 with pairwise sums <= 1: rows (0,0), (0,S1), (S1,0), (0,S2), (S2,0)
  CHECK(j["entries"].size() == 5);
  for (const auto& e : j["entries"])
    for (const auto& t : e["terms"]) {
      CHECK(t["key"].contains("alpha"));
      CHECK(t["key"].contains("beta"));
      CHECK(t["key"].contains("m"));
    }
}

TEST_CASE("enumerate lists the classes") {
  std::string out = "/tmp/hb_enum.json";
  REQUIRE(run_cli("enumerate " + data_path("a2_f2.json") + " --max-dim 1 --out " + out) == 0);
  json j = json::parse(read_file(out));
  CHECK(j["class_count"] == 3);
}

TEST_CASE("exit code mapping for mathematical failure") {
  // The verified theorems hold, so a genuine counterexample cannot be
  // produced from a valid input; check the mapping at the report level.
  VerifyReport rep;
  rep.checks.push_back({"main", 1, {"synthetic failure"}, 0.0});
  CHECK(!rep.passed());
  rep.checks.clear();
  rep.checks.push_back({"main", 1, {}, 0.0});
  CHECK(rep.passed());
}

TEST_CASE("run_verify maps budget exhaustion to exit 2") {
  VerifyOptions opts;
  opts.max_total_dim = 3;
  opts.budgets.search = 2;  // everything interesting blows this
  VerifyRun run = run_verify(read_file(data_path("a2_f2.json")), opts);
  CHECK(run.exit_code == 2);
}
