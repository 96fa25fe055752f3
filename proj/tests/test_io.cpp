#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "reeb/io.hpp"

using namespace reeb;
namespace fs = std::filesystem;

TEST_CASE("germ documents round-trip") {
  const Json doc = Json::parse(R"({"n": 2, "rho": [0, 0, 0, [1, 0.5], 0, [0, -2]]})");
  const GermDocument g = germ_from_json(doc);
  CHECK(g.germ.n == 2);
  CHECK(g.germ.rho[3] == Complex(1.0, 0.5));
  CHECK(g.germ.rho[5] == Complex(0.0, -2.0));
  CHECK(g.target_kind == "standard-sphere");
  const GermDocument back = germ_from_json(germ_to_json(g));
  CHECK(back.germ.rho.max_abs_diff(g.germ.rho, 16) == 0.0);
}

TEST_CASE("ellipsoid targets") {
  const Json doc = Json::parse(
      R"({"n": 2, "rho": [0, 0, 0, [0.05, 0]], "target": {"kind": "ellipsoid", "p": 2, "q": 3, "k": 2, "l": 3, "b": 1, "radius": 0.6}})");
  const GermDocument g = germ_from_json(doc);
  REQUIRE(g.ellipsoid.has_value());
  CHECK(g.ellipsoid->b() == 1);
  CHECK(g.ellipsoid->radius == 0.6);
  const GermDocument back = germ_from_json(germ_to_json(g));
  REQUIRE(back.ellipsoid.has_value());
  CHECK(back.ellipsoid->l == 3);

  Json bad = doc;
  bad["target"]["b"] = -1;
  CHECK_THROWS_AS(germ_from_json(bad), UsageError);
  bad = doc;
  bad["target"]["b"] = 2;
  CHECK_THROWS_AS(germ_from_json(bad), UsageError);
  bad = doc;
  bad["target"]["q"] = 4;
  CHECK_THROWS_AS(germ_from_json(bad), UsageError);
  bad = doc;
  bad["target"]["kind"] = "torus";
  CHECK_THROWS_AS(germ_from_json(bad), UsageError);
}

TEST_CASE("malformed documents are usage errors") {
  CHECK_THROWS_AS(germ_from_json(Json::array()), UsageError);
  CHECK_THROWS_AS(germ_from_json(Json::parse(R"({"rho": []})")), UsageError);
  CHECK_THROWS_AS(series_from_json(Json::parse(R"([[1, 2, 3]])")), UsageError);
  CHECK_THROWS_AS(congruence_from_json(Json::parse(R"({"center": [1, 0]})")), UsageError);
  CHECK_THROWS_AS(congruence_from_json(Json::parse(R"({"perturbation": {"L": 1.5}})")), UsageError);
}

TEST_CASE("congruence documents") {
  const CongruenceMap c = congruence_from_json(Json::parse(R"({"center": [1, 0, 0, 0, 0, 1]})"));
  CHECK(c.declared_L == 0.0);
  const CongruenceMap p = congruence_from_json(Json::parse(R"({"perturbation": {"L": 0.2}})"));
  CHECK(p.declared_L == 0.2);
  const CongruenceMap q = congruence_from_json(
      Json::parse(R"({"perturbation": {"L": 0.2, "coeffs": [1, 0, 0, 0, 1, 0, 0, 0, 1]}})"));
  CHECK(q.estimate_lipschitz(2000) <= 0.2 * 1.02);
}

TEST_CASE("files") {
  const fs::path dir = fs::temp_directory_path() / "reeb_io_test";
  fs::remove_all(dir);
  const fs::path f = dir / "nested" / "a.txt";
  write_file_atomic(f, "first");
  write_file_atomic(f, "second");
  std::ifstream in(f);
  std::string s;
  in >> s;
  CHECK(s == "second");
  CHECK_FALSE(fs::exists(dir / "nested" / "a.txt.tmp"));
  CHECK_THROWS_AS(read_json_file(dir / "missing.json"), UsageError);
  write_file_atomic(dir / "bad.json", "{not json");
  CHECK_THROWS_AS(read_json_file(dir / "bad.json"), UsageError);
  fs::remove_all(dir);
}

TEST_CASE("residual csv layout") {
  CrReport r;
  r.points = {Complex(0.1, 0.2)};
  r.residuals = {{1e-3, 2e-3, 3e-3}};
  const std::string csv = cr_residual_csv(r);
  CHECK(csv.rfind("z_re,z_im,res1,res2,res3\n", 0) == 0);
  CHECK(csv.find("0.001") != std::string::npos);
}
