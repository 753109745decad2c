#include <doctest.h>

#include "kobayashi/cli.hpp"
#include "kobayashi/errors.hpp"
#include "kobayashi/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace kobayashi;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "kobayashi");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& text) {
  fs::path dir = fs::temp_directory_path() / "kobayashi_cli_tests";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

const std::string& ball_path() {
  static const std::string p = write_file("ball.json", R"({"dim": 2, "variant": {"type": "ball", "radius": 1}})");
  return p;
}

const std::string& siegel_path() {
  static const std::string p = write_file("siegel2.json", R"({"dim": 2, "variant": {"type": "siegel"}})");
  return p;
}

}  // namespace

TEST_CASE("vector syntax") {
  CVector z = parse_vector("0.5,1:-2", 2);
  CHECK(z(0) == cd(0.5, 0.0));
  CHECK(z(1) == cd(1.0, -2.0));
  CVector w = parse_vector("i,3i", 2);
  CHECK(w(0) == cd(0.0, 1.0));
  CHECK(w(1) == cd(0.0, 3.0));
  CVector s = parse_vector("i*e1@r=2", 2);
  CHECK(std::abs(s(0) - cd(0.0, std::exp(2.0))) <= 1e-12);
  CHECK(s(1) == cd(0.0, 0.0));
  CVector t = parse_vector("e1+0.5*e2", 2);
  CHECK(t(0) == cd(1.0, 0.0));
  CHECK(t(1) == cd(0.5, 0.0));
  CHECK_THROWS_AS(parse_vector("1,2,3", 2), Error);
  CHECK_THROWS_AS(parse_vector("e3", 2), Error);
  CHECK_THROWS_AS(parse_vector("banana", 1), Error);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("domain documents round-trip") {
  std::vector<std::string> docs{
      R"({"dim": 2, "variant": {"type": "ball", "radius": 2, "center": [[0.5, 0], [0, -0.25]]}})",
      R"({"dim": 3, "variant": {"type": "siegel"}})",
      R"({"dim": 2, "variant": {"type": "power_epigraph", "exponents": [3]}})",
      R"({"dim": 2, "variant": {"type": "half_plane_product"}})",
      R"({"dim": 2, "variant": {"type": "ellipsoid", "semi_axes": [1, 2]}})",
      R"({"dim": 1, "variant": {"type": "unit_cube"}})",
      R"({"dim": 2, "variant": {"type": "polydisk"}})",
  };
  CVector probe(3);
  probe << cd(0.1, 0.6), cd(-0.2, 0.1), cd(0.05, 0.0);
  for (const auto& text : docs) {
    auto a = domain_from_json(Json::parse(text));
    auto b = domain_from_json(domain_to_json(*a));
    CVector z = probe.head(a->dim());
    CHECK_MESSAGE(a->margin(z) == b->margin(z), text);
    CHECK(a->describe() == b->describe());
  }
}

TEST_CASE("domain documents are strict") {
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"dim": 2, "variant": {"type": "blob"}})")), Error);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"dim": 2, "variant": {"type": "ball", "raduis": 1}})")), Error);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"dim": 2, "variant": {"type": "ball"}, "extra": 1})")), Error);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"dim": "two", "variant": {"type": "siegel"}})")), Error);
}

TEST_CASE("tolerance overrides") {
  Tolerances tol;
  apply_tolerance_overrides(Json::parse(R"({"theta_grid": 64, "boundary_tol": 1e-6})"), tol);
  CHECK(tol.theta_grid == 64);
  CHECK(tol.boundary_tol == 1e-6);
  CHECK_THROWS_AS(apply_tolerance_overrides(Json::parse(R"({"no_such_knob": 1})"), tol), Error);
  CHECK_THROWS_AS(apply_tolerance_overrides(Json::parse(R"({"theta_grid": "many"})"), tol), Error);
}

TEST_CASE("delta subcommand") {
  auto r = run({"delta", "--domain", ball_path(), "--point", "0,0"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["result"]["delta"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["header"]["tool"] == "kobayashi");
  CHECK(j["header"]["command"] == "delta");

  auto s = run({"delta", "--domain", siegel_path(), "--point", "i*e1@r=2", "--dir", "e2"});
  REQUIRE(s.code == 0);
  CHECK(Json::parse(s.out)["result"]["delta_dir"].get<double>() == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("bad input exits with code 2 and one diagnostic line") {
  auto bad = write_file("bad.json", R"({"dim": 2, "variant": {"type": "ball", "radius": -1}})");
  auto r = run({"delta", "--domain", bad, "--point", "0,0"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK(Json::parse(r.err)["error"] == "InvalidSpec");

  auto outside = run({"delta", "--domain", ball_path(), "--point", "2,0"});
  CHECK(outside.code == 2);
  CHECK(Json::parse(outside.err)["error"] == "NotInterior");

  CHECK(run({"delta", "--domain", ball_path()}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("numeric failures exit with code 3") {
  auto r = run({"lyapunov", "--model", "siegel", "--d", "2", "--v", "0,0"});
  CHECK(r.code == 3);
  CHECK(Json::parse(r.err)["error"] == "DegenerateRays");
}

TEST_CASE("lyapunov subcommand") {
  auto r = run({"lyapunov", "--model", "siegel", "--d", "2", "--v", "e2", "--trange", "2:8"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(Json::parse(r.out)["result"]["exponent"].get<double>() + 1.0) <= 0.05);

  auto csv = run({"lyapunov", "--d", "2", "--v", "e2", "--n", "8", "--format", "csv"});
  REQUIRE(csv.code == 0);
  std::istringstream lines(csv.out);
  std::string line;
  int comments = 0, rows = 0;
  while (std::getline(lines, line)) (line.rfind('#', 0) == 0 ? comments : rows)++;
  CHECK(comments == 4);
  CHECK(rows == 9);
  CHECK(csv.out.find("t,distance,path\n") != std::string::npos);
}

TEST_CASE("spc and hausdorff subcommands") {
  auto r = run({"spc", "--domain", ball_path(), "--samples", "16"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["result"]["all_consistent"] == true);

  auto b2 = write_file("ball2.json", R"({"dim": 2, "variant": {"type": "ball", "radius": 2}})");
  auto h = run({"hausdorff", "--a", ball_path(), "--b", b2, "--R", "10", "--samples", "512"});
  REQUIRE(h.code == 0);
  CHECK(Json::parse(h.out)["result"]["distance"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("remaining subcommands") {
  auto d = run({"dist", "--domain", siegel_path(), "--z1", "i,0", "--z2", "i*e1@r=2"});
  REQUIRE(d.code == 0);
  Json dj = Json::parse(d.out)["result"];
  CHECK(dj["lower"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dj["upper"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  auto b = run({"bergman", "--d", "2", "--z", "0.3,0", "--v", "e2"});
  REQUIRE(b.code == 0);
  CHECK(std::abs(Json::parse(b.out)["result"]["curvature"].get<double>() + 4.0 / 3.0) <= 1e-3);

  auto s = run({"squeeze", "--domain", ball_path(), "--point", "0.5,0"});
  REQUIRE(s.code == 0);
  CHECK(Json::parse(s.out)["result"]["lower_bound"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

  auto n = run({"rescale", "--domain", ball_path(), "--normalize-at", "0.9,0"});
  REQUIRE(n.code == 0);
  CHECK(Json::parse(n.out)["result"]["kd"]["passes"] == true);
}

TEST_CASE("configuration files") {
  auto cfg = write_file("cfg.json", R"({"tolerances": {"theta_grid": 128}, "seed": 7, "format": "json"})");
  auto r = run({"delta", "--domain", ball_path(), "--point", "0,0", "--config", cfg});
  REQUIRE(r.code == 0);
  Json h = Json::parse(r.out)["header"];
  CHECK(h["seed"] == 7);
  CHECK(h["tolerances"]["theta_grid"] == 128);

  auto plain = run({"delta", "--domain", ball_path(), "--point", "0,0"});
  CHECK(Json::parse(plain.out)["header"]["config_hash"] != h["config_hash"]);

  auto bad = write_file("badcfg.json", R"({"tolerance": {}})");
  CHECK(run({"delta", "--domain", ball_path(), "--point", "0,0", "--config", bad}).code == 2);
}

TEST_CASE("output files and determinism") {
  auto out = (fs::temp_directory_path() / "kobayashi_cli_tests" / "out.json").string();
  std::vector<std::string> args{"spc", "--domain", ball_path(), "--samples", "4", "--output", out};
  REQUIRE(run(args).code == 0);
  std::ifstream f1(out);
  std::string first((std::istreambuf_iterator<char>(f1)), {});
  REQUIRE(run(args).code == 0);
  std::ifstream f2(out);
  std::string second((std::istreambuf_iterator<char>(f2)), {});
  CHECK(!first.empty());
  CHECK(first == second);
  // the document survives a parse and re-serialisation unchanged
  CHECK(dump_json(Json::parse(first)) + "\n" == first);
}
