#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "masscut/cli.hpp"
#include "masscut/instances.hpp"

using namespace masscut;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = MASSCUT_FIXTURES_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("bounds subcommand") {
  auto r = run({"bounds", "--h", "5", "--m", "2"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out == "15\n");

  r = run({"bounds", "--h", "2", "--m", "5", "--show-chain"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out == "8\nBase[MVZ]\n");

  r = run({"bounds", "--h", "6", "--m", "4", "--cap-factor", "4", "--show-chain"});
  CHECK(r.out == "60\nBase[Ramos h=5, m=8, d=60] -> L1\n");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"bounds", "--h", "5"}).code == cli::kUsage);
  CHECK(run({"bounds", "--h", "5", "--m", "2", "--bogus"}).code == cli::kUsage);
  CHECK(run({"bounds", "--h", "zero", "--m", "2"}).code == cli::kUsage);
  CHECK(run({"gen", "--kind", "spiral", "--d", "2", "--n", "4", "--m", "1", "-o", "x.json"}).code ==
        cli::kUsage);

  TempDir tmp("masscut_cli_usage");
  auto r = run({"solve", "--instance", (kFixtures / "truncated.json").string(), "--h", "1", "-o", tmp / "c.json"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("parse error") != std::string::npos);

  r = run({"verify", "--instance", (kFixtures / "symmetric_400_s3.json").string(), "--cuts",
           (kFixtures / "non_unit_normal.json").string(), "--tol", "0"});
  CHECK(r.code == cli::kUsage);

  r = run({"solve", "--instance", (kFixtures / "grid_1d_10.json").string(), "--h", "1", "--strategy", "lemma2",
           "--eps-schedule", "0.1,oops", "-o", tmp / "c.json"});
  CHECK(r.code == cli::kUsage);
  CHECK_FALSE(fs::exists(tmp / "c.json"));
}

TEST_CASE("help exits 0") {
  const auto r = run({"--help"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.find("bounds") != std::string::npos);
}

TEST_CASE("gen, solve, verify on the symmetric cloud") {
  TempDir tmp("masscut_cli_e2e");
  auto r = run({"gen", "--kind", "symmetric", "--d", "2", "--n", "400", "--m", "1", "--seed", "3", "-o",
                tmp / "sym.json"});
  REQUIRE(r.code == cli::kSuccess);
  CHECK(slurp(tmp / "sym.json") == slurp(kFixtures / "symmetric_400_s3.json"));

  r = run({"solve", "--instance", tmp / "sym.json", "--h", "2", "--strategy", "auto", "--seed", "1", "--tol", "0",
           "--restarts", "8", "-o", tmp / "cuts.json"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.find("pass yes") != std::string::npos);

  r = run({"verify", "--instance", tmp / "sym.json", "--cuts", tmp / "cuts.json", "--tol", "0"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.find("mass 0 imbalance 0\n") != std::string::npos);

  // oracle: count points per quadrant of the written cuts
  const auto inst = read_instance(tmp / "sym.json");
  const auto cuts = read_cuts(tmp / "cuts.json");
  std::array<int, 4> counts{};
  for (std::size_t i = 0; i < inst.masses[0].size(); ++i) {
    const auto p = inst.masses[0].point(i);
    int code = 0;
    for (std::size_t k = 0; k < 2; ++k) {
      const double s = cuts[k].normal()[0] * p[0] + cuts[k].normal()[1] * p[1] - cuts[k].offset();
      REQUIRE(s != 0.0);
      if (s > 0) code |= 1 << k;
    }
    ++counts[code];
  }
  CHECK(counts == std::array<int, 4>{100, 100, 100, 100});

  r = run({"verify", "--instance", tmp / "sym.json", "--cuts", (kFixtures / "axes_2d.json").string(), "--tol",
           "0"});
  CHECK(r.code == cli::kSuccess);
}

TEST_CASE("identical argv gives identical files") {
  TempDir tmp("masscut_cli_repro");
  const std::string inst = (kFixtures / "gaussian_2d_2x200_s1.json").string();
  for (const char* name : {"a.json", "b.json"}) {
    const auto r = run({"solve", "--instance", inst, "--h", "1", "--strategy", "auto", "--seed", "5", "--tol", "0",
                        "--restarts", "4", "-o", tmp / name});
    CHECK(r.code == cli::kSuccess);
  }
  CHECK(slurp(tmp / "a.json") == slurp(tmp / "b.json"));

  CHECK(run({"table", "--h-max", "3", "--m-max", "4", "--format", "csv", "-o", tmp / "t1.csv"}).code == 0);
  CHECK(run({"table", "--h-max", "3", "--m-max", "4", "--format", "csv", "-o", tmp / "t2.csv"}).code == 0);
  CHECK(slurp(tmp / "t1.csv") == slurp(tmp / "t2.csv"));
  CHECK(slurp(tmp / "t1.csv").rfind("h,m,value,chain\n1,1,1,", 0) == 0);
}

TEST_CASE("honest failure exits 1 and still writes cuts") {
  TempDir tmp("masscut_cli_fail");
  REQUIRE(run({"gen", "--kind", "grid", "--d", "1", "--n", "8", "--m", "1", "-o", tmp / "line.json"}).code == 0);
  auto r = run({"solve", "--instance", tmp / "line.json", "--h", "2", "--strategy", "direct", "--tol", "0",
                "--restarts", "4", "-o", tmp / "cuts.json"});
  CHECK(r.code == cli::kFailed);
  CHECK(r.out.find("converged no") != std::string::npos);
  REQUIRE(fs::exists(tmp / "cuts.json"));
  r = run({"verify", "--instance", tmp / "line.json", "--cuts", tmp / "cuts.json", "--tol", "0"});
  CHECK(r.code == cli::kFailed);
  CHECK(r.out.find("pass no") != std::string::npos);
}

TEST_CASE("trace output") {
  TempDir tmp("masscut_cli_trace");
  const auto r = run({"solve", "--instance", (kFixtures / "grid_1d_10.json").string(), "--h", "1", "--strategy",
                      "lemma2", "--tol", "0", "--ball-n", "1024", "--restarts", "4", "-o", tmp / "c.json",
                      "--trace"});
  CHECK(r.code == cli::kSuccess);
  const auto json = nlohmann::json::parse(r.out.substr(r.out.find('[')));
  REQUIRE(json.is_array());
  CHECK(json[0].at("strategy") == "lemma2");
  bool has_stage = false;
  for (const auto& s : json) has_stage = has_stage || s.at("strategy") == "lemma2-stage";
  CHECK(has_stage);
}
