#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "masscut/errors.hpp"
#include "masscut/instances.hpp"
#include "masscut/verifier.hpp"

using namespace masscut;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = MASSCUT_FIXTURES_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    instance_from_json(text);
  } catch (const ParseError& e) {
    return std::string("parse: ") + e.what();
  } catch (const SchemaError& e) {
    return std::string("schema: ") + e.what();
  }
  return "ok";
}

Arrangement axes() { return Arrangement({Hyperplane({1.0, 0.0}, 0.0), Hyperplane({0.0, 1.0}, 0.0)}); }

}  // namespace

TEST_CASE("gen_gaussian") {
  const auto a = gen_gaussian(2, 100, 1, 7);
  const auto b = gen_gaussian(2, 100, 1, 7);
  CHECK(a == b);
  CHECK(instance_to_json({2, a, {}}) == instance_to_json({2, b, {}}));
  CHECK(a[0].total() == 100.0);
  CHECK_FALSE(gen_gaussian(2, 100, 1, 8) == a);

  const std::vector<Point> centers{{5.0, -5.0}, {0.0, 0.0}};
  const auto c = gen_gaussian(2, 100, 2, 11, centers);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < 2; ++i) {
      double mean = 0.0;
      for (std::size_t p = 0; p < 100; ++p) mean += c[j].coord(p, i);
      CHECK(std::abs(mean / 100.0 - centers[j][i]) < 0.5);
    }
  }
}

TEST_CASE("gen_symmetric") {
  const Mass m = gen_symmetric(400, 3);
  CHECK(m.size() == 400);
  const auto t = orthant_measures(m, axes(), default_tau(std::vector<Mass>{m}));
  CHECK(t.boundary == 0.0);
  for (double e : t.entries) CHECK(e == 100.0);
  CHECK(verify(std::vector<Mass>{m}, axes(), 0.0, 0.0, default_tau(std::vector<Mass>{m})).pass);
  CHECK_THROWS_AS(gen_symmetric(10, 1), InvalidArgument);
  CHECK(gen_symmetric(40, 5) == gen_symmetric(40, 5));
}

TEST_CASE("gen_grid") {
  const auto g = gen_grid(1, 10, 1);
  REQUIRE(g.size() == 1);
  for (std::size_t i = 0; i < 10; ++i) CHECK(g[0].coord(i, 0) == static_cast<double>(i));
  const auto cube = gen_grid(3, 4, 2);
  CHECK(cube[0].total() == 64.0);
  CHECK(cube[1].total() == 64.0);
  CHECK(cube == gen_grid(3, 4, 2));
  CHECK_THROWS_AS(gen_grid(1, 1, 1), InvalidArgument);
}

TEST_CASE("round trips are bit-exact") {
  InstanceFile inst{2, gen_gaussian(2, 50, 3, 99), {{"generator", "gaussian"}, {"seed", 99}}};
  const auto back = instance_from_json(instance_to_json(inst));
  CHECK(back == inst);
  CHECK(instance_to_json(back) == instance_to_json(inst));

  const Arrangement arr({Hyperplane({0.6, 0.8}, 0.1), Hyperplane::normalized({1.0, 3.0}, -0.3)});
  CHECK(cuts_from_json(cuts_to_json(arr)) == arr);

  const auto dir = fs::temp_directory_path() / "masscut_instances_test";
  fs::create_directories(dir);
  write_instance(dir / "i.json", inst);
  CHECK(read_instance(dir / "i.json") == inst);
  write_cuts(dir / "c.json", arr);
  CHECK(read_cuts(dir / "c.json") == arr);
  fs::remove_all(dir);
}

TEST_CASE("field names") {
  const auto text = instance_to_json({1, {Mass(1, {{1.5}}, {2.0})}, {}});
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("dim") == 1);
  CHECK(j.at("masses")[0].at("points")[0][0] == 1.5);
  CHECK(j.at("masses")[0].at("weights")[0] == 2.0);
  CHECK(j.contains("metadata"));
  const auto c = nlohmann::json::parse(cuts_to_json(Arrangement({Hyperplane({1.0}, 2.0)})));
  CHECK(c.at("planes")[0].at("offset") == 2.0);
  CHECK(c.at("planes")[0].at("normal")[0] == 1.0);
}

TEST_CASE("malformed inputs") {
  CHECK(error_of(R"({"dim": 1, "masses": [{"points": [[0.0]], "weights": [1.0]}]})") == "ok");
  CHECK(error_of(R"({"dim": 1, "masses": [{"points": [[0.0]], )").rfind("parse: parse error at line 1", 0) == 0);
  CHECK(error_of(R"({"dim": 1, "masses": [{"points": [[0.0]]}]})").find("missing field 'weights'") !=
        std::string::npos);
  CHECK(error_of(R"({"masses": []})").find("missing field 'dim'") != std::string::npos);
  CHECK(error_of(R"({"dim": 2, "masses": [{"points": [[0.0]], "weights": [1.0]}]})").rfind("schema", 0) == 0);
  CHECK(error_of(R"({"dim": 1, "masses": [{"points": [[0.0]], "weights": [-1.0]}]})").rfind("schema", 0) == 0);
  CHECK(error_of(R"({"dim": 1, "masses": [{"points": [[0.0], [1.0]], "weights": [1.0]}]})").rfind("schema", 0) ==
        0);
  CHECK(error_of("[1, 2]").rfind("parse", 0) == 0);
  CHECK(error_of("").rfind("parse", 0) == 0);
}

TEST_CASE("cuts normals") {
  CHECK_THROWS_AS(cuts_from_json(R"({"dim": 2, "planes": [{"normal": [1.0, 1.0], "offset": 0.0}]})"), SchemaError);
  const auto near = cuts_from_json(R"({"dim": 1, "planes": [{"normal": [1.0000001], "offset": 0.5}]})");
  CHECK(near[0].normal()[0] == 1.0);
  CHECK_THROWS_AS(cuts_from_json(R"({"dim": 2, "planes": [{"normal": [1.0], "offset": 0.0}]})"), SchemaError);
}

TEST_CASE("fixtures") {
  const auto sym = read_instance(kFixtures / "symmetric_400_s3.json");
  REQUIRE(sym.masses.size() == 1);
  CHECK(sym.masses[0] == gen_symmetric(400, 3));
  const auto cuts = read_cuts(kFixtures / "axes_2d.json");
  CHECK(cuts == axes());
  CHECK(verify(sym.masses, cuts, 0.0, 0.0, default_tau(sym.masses)).pass);

  const auto grid = read_instance(kFixtures / "grid_1d_10.json");
  CHECK(grid.masses == gen_grid(1, 10, 1));

  for (const char* name : {"symmetric_400_s3.json", "grid_1d_10.json", "gaussian_2d_2x200_s1.json"}) {
    CAPTURE(name);
    const auto text = slurp(kFixtures / name);
    CHECK(instance_to_json(instance_from_json(text)) == text);
  }

  CHECK_THROWS_AS(read_instance(kFixtures / "truncated.json"), ParseError);
  CHECK_THROWS_AS(read_cuts(kFixtures / "non_unit_normal.json"), SchemaError);
  CHECK_THROWS_AS(read_instance(kFixtures / "does_not_exist.json"), ParseError);
}
