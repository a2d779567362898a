#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bnsl/cli.hpp"
#include "bnsl/network_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = bnsl::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bnsl_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("count-dags and enumerate") {
  auto r = run({"count-dags", "6"});
  CHECK(r.code == 0);
  CHECK(r.out == "3781503\n");
  CHECK(run({"count-dags", "10"}).out == "4175098976430598143\n");
  CHECK(run({"enumerate", "3"}).out == "25\n");
  CHECK(run({"enumerate", "7"}).code == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"count-dags"}).code == 2);
  CHECK(run({"compare"}).code == 2);
  const auto dir = fresh_dir("usage");
  CHECK(run({"--out", dir.string(), "random-net", "--nodes", "3"}).code == 0);
  const auto r = run({"sample", "--net", (dir / "network.json").string(), "--rows", "0"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("generate, sample, learn and score round trip") {
  const auto dir = fresh_dir("pipeline");
  const auto out = dir.string();
  REQUIRE(run({"--out", out, "--seed", "3", "random-net", "--nodes", "5", "--edges", "5"}).code == 0);
  REQUIRE(run({"--out", out, "--seed", "4", "sample", "--net", out + "/network.json", "--rows", "300"}).code == 0);
  const auto data = bnsl::load_dataset(dir / "data.csv");
  CHECK(data.num_rows() == 300);

  auto r = run({"--out", out, "learn-ccga", "--data", out + "/data.csv", "--generations", "5", "--population", "10"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("best_score ", 0) == 0);
  CHECK(fs::exists(dir / "ccga_structure.json"));
  CHECK(fs::exists(dir / "ccga_trace.csv"));

  r = run({"--out", out, "learn-k2", "--data", out + "/data.csv", "--ordering", "X0", "X1", "X2", "X3", "X4"});
  REQUIRE(r.code == 0);
  const auto k2_line = r.out.substr(std::string("best_score ").size(), r.out.find('\n') - 11);

  r = run({"score", "--structure", out + "/k2_structure.json", "--data", out + "/data.csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out == k2_line + "\n");

  CHECK(run({"--out", out, "learn-k2", "--data", out + "/data.csv", "--ordering", "X0", "nope"}).code != 0);
  CHECK(run({"score", "--structure", out + "/missing.json", "--data", out + "/data.csv"}).code == 2);
}

TEST_CASE("compare writes identical files for identical seeds") {
  const auto dir = fresh_dir("compare");
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"generator": {"nodes": 4, "edges": 3}, "sample_sizes": [100], "runs": 2, "seed": 5,
              "ga": {"generations": 4, "population_size": 8}, "record_wall_time": false})";
  }
  const auto a = dir / "a";
  const auto b = dir / "b";
  REQUIRE(run({"--config", (dir / "cfg.json").string(), "--out", a.string(), "compare"}).code == 0);
  REQUIRE(run({"--config", (dir / "cfg.json").string(), "--out", b.string(), "compare"}).code == 0);
  CHECK(slurp(a / "runs.csv") == slurp(b / "runs.csv"));
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));

  std::ofstream bad(dir / "bad.json");
  bad << R"({"generator": {"nodes": 4}, "ga": {"population_size": 3}})";
  bad.close();
  CHECK(run({"--config", (dir / "bad.json").string(), "compare"}).code == 2);
}
