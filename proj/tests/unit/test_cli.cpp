#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "webflat_cli/app.hpp"
#include "webflat_cli/inputs.hpp"

using namespace webflat;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Run webflat_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "webflat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("webflat_test_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("family names") {
  CHECK(cli::family("fermat:3").foliations.at(0).degree() == 3);
  CHECK(cli::family("homog:4").foliations.at(0).is_homogeneous());
  CHECK(cli::family("ex3:1/2").foliations.size() == 2);
  auto l = cli::family("line:1,-1,0");
  REQUIRE(l.lines.size() == 1);
  CHECK(l.lines[0] == geo::LineInPlane(poly::GaussRat(1), poly::GaussRat(-1), poly::GaussRat(0)));
  CHECK(cli::family("rand:2:42").foliations.at(0).same_as(cli::family("rand:2:42").foliations.at(0)));
  CHECK_THROWS_AS(cli::family("fermat:x"), cli::InputError);
  CHECK_THROWS_AS(cli::family("fermat:1"), cli::InputError);
  CHECK_THROWS_AS(cli::family("ex3:-1"), cli::InputError);
  CHECK_THROWS_AS(cli::family("line:1,2"), cli::InputError);
  CHECK_THROWS_AS(cli::family("line:0,0,0"), cli::InputError);
  CHECK_THROWS_AS(cli::family("rand:2"), cli::InputError);
  CHECK_THROWS_AS(cli::family("torus:2"), cli::InputError);
}

TEST_CASE("web blocks") {
  auto W = cli::parse_web(
      "web {\n"
      "  line: 1,-1,0;\n"
      "  line: <1/2, i, 3>;\n"
      "  foliation: fermat:2;\n"
      "  foliation: vectorfield { A = x^3 - x; B = y^3 - y; };\n"
      "}");
  CHECK(W.lines.size() == 2);
  REQUIRE(W.foliations.size() == 2);
  CHECK(W.foliations[1].same_as(cli::family("fermat:3").foliations[0]));
  CHECK(W.dual_degree() == 7);
  CHECK_THROWS_AS(cli::parse_web("web { curve: x; }"), cli::InputError);
  CHECK_THROWS_AS(cli::parse_web("web { foliation: ex3:2; }"), cli::InputError);
  CHECK_THROWS_AS(cli::parse_web("web { foliation: foliation { a = y; b = x; }"), cli::InputError);

  auto file = scratch("web.txt", "# two members\nweb { line: 1,0,0; foliation: homog:3; }\n");
  auto R = cli::resolve(file.string());
  CHECK(R.lines.size() == 1);
  CHECK(R.foliations.size() == 1);
  std::filesystem::remove(file);
}

TEST_CASE("exit codes") {
  const std::vector<std::string> fast{"--samples", "20", "--probes", "2"};
  auto with = [&](std::vector<std::string> args) {
    args.insert(args.end(), fast.begin(), fast.end());
    return webflat_cli(args);
  };
  CHECK(with({"flatness", "fermat:2", "fermat:3"}).code == 0);
  CHECK(with({"flatness", "fermat:3", "fermat:5"}).code == 0);
  CHECK(with({"flatness", "ex3:2"}).code == 1);
  CHECK(with({"flatness", "rand:2:7", "line:1,2,3"}).code == 1);
  // A tolerance below the attainable noise leaves nothing to certify.
  CHECK(with({"flatness", "fermat:2", "fermat:3", "--flat-tol", "1e-40"}).code == 2);

  auto rep = with({"legendre", "fermat:2", "fermat:2"});
  CHECK(rep.code == 3);
  CHECK(rep.err.find("identically zero discriminant") != std::string::npos);
  CHECK(with({"flatness", "fermat:2", "fermat:2"}).code == 3);
  CHECK(with({"analyze", "fermat:2", "fermat:3"}).code == 3);
  CHECK(with({"analyze", "foliation { a = y^2 +; b = x; }"}).code == 3);
  CHECK(with({"flatness", "line:0,0,1", "fermat:2"}).code == 3);
  CHECK(webflat_cli({"flatness"}).code == 4);
  CHECK(webflat_cli({"flatness", "fermat:2", "--samples", "0"}).code == 4);
  CHECK(webflat_cli({"flatness", "fermat:2", "--format", "xml"}).code == 4);
  CHECK(webflat_cli({"frobnicate"}).code == 4);
  CHECK(webflat_cli({"--help"}).code == 0);
}

TEST_CASE("analyze and legendre reports") {
  auto a = webflat_cli({"analyze", "fermat:2"});
  REQUIRE(a.code == 0);
  auto r = a.doc()["result"];
  CHECK(r["degree"] == 2);
  CHECK(r["invariant_lines"].size() == 6);
  CHECK(r["singularities"]["radial_count"] == 4);
  CHECK(r["convexity"]["reduced"] == "yes");
  CHECK(a.doc()["schema"] == "webflat-report/1");

  auto h = webflat_cli({"analyze", "homog:3"}).doc()["result"];
  CHECK(h["convexity"]["convex"] == "yes");
  bool origin = false;
  for (const auto& s : h["singularities"]["points"]) {
    if (s["location"] == "(0, 0)") origin = s["nu"] == 3 && s["special"] == true;
  }
  CHECK(origin);

  auto g = webflat_cli({"analyze", "rand:2:42"}).doc()["result"];
  CHECK(g["convexity"]["convex"] == "no");
  CHECK(g["convexity"]["witness"] != "1");

  auto l = webflat_cli({"legendre", "fermat:2", "--samples", "50"});
  REQUIRE(l.code == 0);
  auto lr = l.doc()["result"];
  CHECK(lr["dual_web"] == "p^2*x^2 + 2*p*q*x - p*x^2 + q^2 - q");
  CHECK(lr["discriminant_resultant"]["expanded"] == "p^2*q + p*q^2 - p*q");
  CHECK(lr["cross_check"]["certified"] == true);
  auto six = webflat_cli({"legendre", "line:1,-1,0", "fermat:2", "fermat:3", "--samples", "20"}).doc()["result"];
  CHECK(six["degree"]["directions"] == 6);
}

TEST_CASE("flatness report is deterministic and follows the schema") {
  const std::vector<std::string> args{"flatness", "fermat:2", "fermat:3", "--samples", "12", "--probes", "2"};
  auto a = webflat_cli(args), b = webflat_cli(args);
  CHECK(a.out == b.out);
  auto r = a.doc()["result"];
  for (const char* key : {"status", "seed", "precision_bits", "thresholds", "samples", "probes"}) CHECK(r.contains(key));
  CHECK(r["status"] == "flat-consistent");
  CHECK(r["samples"].size() == 12);
  for (const char* key : {"p", "q", "K_re", "K_im", "scale", "reliable"}) CHECK(r["samples"][0].contains(key));
  for (const char* key : {"component", "distances", "K_magnitudes"}) CHECK(r["probes"][0].contains(key));
  CHECK(r["hypotheses"]["product_of_convex_reduced"]["all_passed"] == true);

  auto c = webflat_cli({"flatness", "fermat:2", "fermat:3", "--samples", "12", "--probes", "2", "--seed", "5"});
  CHECK(c.out != a.out);
  CHECK(c.doc()["result"]["status"] == "flat-consistent");
}

TEST_CASE("environment overrides and output files") {
  setenv("WEBFLAT_SAMPLES", "9", 1);
  auto e = webflat_cli({"flatness", "fermat:2", "fermat:3", "--probes", "1"});
  unsetenv("WEBFLAT_SAMPLES");
  CHECK(e.doc()["config"]["samples"] == 9);
  CHECK(e.doc()["result"]["samples"].size() == 9);

  // A flag beats the environment.
  setenv("WEBFLAT_SAMPLES", "9", 1);
  auto f = webflat_cli({"flatness", "fermat:2", "fermat:3", "--probes", "1", "--samples", "5"});
  unsetenv("WEBFLAT_SAMPLES");
  CHECK(f.doc()["config"]["samples"] == 5);

  auto path = std::filesystem::temp_directory_path() / "webflat_test_out.json";
  auto g = webflat_cli({"analyze", "homog:2", "--out", path.string()});
  CHECK(g.code == 0);
  CHECK(g.out.empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["result"]["degree"] == 2);
  std::filesystem::remove(path);
}
