#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "asymcorr/errors.hpp"
#include "asymcorr/pipeline.hpp"
#include "asymcorr/serialize.hpp"

using namespace asymcorr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("asymcorr_test_" + name);
  fs::remove_all(p);
  return p;
}

std::set<std::string> files_in(const fs::path& dir) {
  std::set<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out.insert(e.path().filename().string());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse_exact reads fractions and decimals exactly") {
  CHECK(parse_exact("7/2") == make_rational(7, 2));
  CHECK(parse_exact("3.5") == make_rational(7, 2));
  CHECK(parse_exact("-0.2") == make_rational(-1, 5));
  CHECK(parse_exact("1e3") == Rational(1000));
  CHECK(parse_exact("2.5e-2") == make_rational(1, 40));
  CHECK(parse_exact("42") == Rational(42));
  CHECK_THROWS_AS(parse_exact("abc"), Error);
  CHECK_THROWS_AS(parse_exact("."), Error);
}

TEST_CASE("config defaults and overrides") {
  RunConfig c = parse_config(R"({"fermat": {"d": 2, "c": [1, 1, 1]}})");
  CHECK(c.digits == 60);
  CHECK(c.series_order == 40);
  CHECK(c.lambda.re == make_rational(7, 2));
  CHECK(c.lambda.im == make_rational(1, 5));
  CHECK(c.stage == Stage::all);
  c = parse_config(R"({"fermat": {"d": 4, "c": [1, 1, 1]}, "stage": "pf", "digits": 72,
                       "tolerances": {"ode_local": 70, "quad": 50}, "u_arg": "3/2"})");
  CHECK(c.d == 4);
  CHECK(c.stage == Stage::pf);
  CHECK(c.ode_local_digits == 70);
  CHECK(c.quad_digits == 50);
  CHECK_FALSE(c.match_digits.has_value());
  CHECK(c.u_arg == make_rational(3, 2));
}

TEST_CASE("config errors") {
  auto code_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidInput;
  };
  CHECK(code_of("{not json") == ErrorCode::ConfigError);
  CHECK(code_of(R"({"fermat": {"d": 2, "c": [1, 1, 1]}, "bogus": 1})") == ErrorCode::ConfigError);
  CHECK(code_of(R"({"fermat": {"d": 2, "c": [1, 1, 1]}, "stage": "nope"})") == ErrorCode::ConfigError);
  CHECK(code_of(R"({"fermat": {"d": 2, "c": [1, 1, 1]}, "tolerances": {"x": 1}})") == ErrorCode::ConfigError);
  CHECK_THROWS_WITH_AS(parse_stage("sideways"), doctest::Contains("ConfigError"), Error);
  CHECK(to_string(parse_stage("birkhoff")) == "birkhoff");
}

TEST_CASE("crepant input without the flag raises CrepantInput") {
  RunConfig c = parse_config(R"({"fermat": {"d": 3, "c": [1, 1, 1]}, "stage": "series"})");
  CHECK_THROWS_WITH_AS(run(c, scratch("crepant")), doctest::Contains("CrepantInput"), Error);
}

TEST_CASE("inconsistent tolerances are rejected") {
  RunConfig c = parse_config(R"({"fermat": {"d": 2, "c": [1, 1, 1]}, "stage": "series",
                                 "tolerances": {"ode_local": 40, "quad": 50}})");
  CHECK_THROWS_WITH_AS(run(c, scratch("tol")), doctest::Contains("ConfigError"), Error);
}

TEST_CASE("emit_plotdata without Watson data raises MissingStage") {
  Report empty;
  CHECK_THROWS_WITH_AS(emit_plotdata(empty), doctest::Contains("MissingStage"), Error);
}

TEST_CASE("pf stage on the quartic writes operators and annihilation only") {
  RunConfig c = parse_config(R"({"name": "q", "fermat": {"d": 4, "c": [1, 1, 1]}, "stage": "pf",
                                 "truncation": {"pf": 20}})");
  fs::path out = scratch("pf");
  Report r = run(c, out);
  CHECK(r.passed());
  CHECK(files_in(out) == std::set<std::string>{"operators.json", "annihilation.json", "summary.json"});
  Json ops = Json::parse(slurp(out / "operators.json"));
  CHECK_FALSE(ops.empty());
  Json summary = Json::parse(slurp(out / "summary.json"));
  CHECK(summary["name"] == "q");
  CHECK(summary["stage"] == "pf");
  CHECK(summary["passed"] == true);
  CHECK(summary["checks"].size() == r.checks.size());
  for (const auto& ch : summary["checks"]) {
    CHECK(ch.contains("name"));
    CHECK(ch.contains("detail"));
  }
}

TEST_CASE("borel stage with two moduli gives two curve groups") {
  RunConfig c = parse_config(R"({"fermat": {"d": 2, "c": [1, 1, 1]}, "stage": "borel", "digits": 40,
                                 "truncation": {"series": 40, "radius_terms": 100},
                                 "u_arg": "31/20", "borel_watson": ["100", "200"]})");
  fs::path out = scratch("borel");
  Report r = run(c, out);
  CHECK(r.passed());
  REQUIRE(fs::exists(out / "plotdata.csv"));
  std::string text = emit_plotdata(r);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "curve,abs_u,n,log10_error,log10_next_term_bound");
  std::set<std::string> moduli;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string curve, abs_u;
    std::getline(ls, curve, ',');
    std::getline(ls, abs_u, ',');
    moduli.insert(abs_u);
  }
  CHECK(moduli == std::set<std::string>{"100", "200"});
  CHECK(slurp(out / "plotdata.csv") == text);
}

TEST_CASE("split group reports NotBig blocks as skipped") {
  RunConfig c = parse_config(R"({"fermat": {"d": 4, "c": [1, 1, 2]}, "group_generators": [["1/4", "3/4", "0"]],
                                 "allow_crepant": true, "stage": "birkhoff", "truncation": {"birkhoff": 2}})");
  Report r = run(c, scratch("split"));
  CHECK(r.passed());
  std::size_t not_big = 0;
  for (const std::string& s : r.skipped)
    if (s.find("NotBig") != std::string::npos) ++not_big;
  CHECK(not_big == 2);
}
