#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "malab/config.hpp"
#include "malab/errors.hpp"
#include "malab/run.hpp"

using namespace malab;
using nlohmann::json;

namespace {

std::string schema_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<accepted>";
}

std::string schema_message(const std::string& text) {
  try {
    parse_config(text);
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "<accepted>";
}

json linear_product() {
  return json::parse(R"({
    "factors": [{
      "phi": {"c": 1.5,
              "f": [{"n": 2, "terms": [{"exp": [1, 0], "coeff": 1}, {"exp": [0, 2], "coeff": [0.5, -0.25]}]}],
              "v": {"kind": "combination", "n": 2,
                    "terms": [{"weight": -1, "expr": {"kind": "log_one_plus",
                                                      "polys": [{"n": 2, "terms": [{"exp": [0, 1], "coeff": 1}]}]}},
                              {"weight": 0.5, "expr": {"kind": "real_poly", "n": 2,
                                                       "terms": [{"z": [1, 0], "zbar": [1, 0], "coeff": 1}]}}]}},
      "theta": {"kind": "constant", "matrix": [[1, [0.3, 0.2]], [[0.3, -0.2], 0.8]]},
      "eta": {"kind": "fubini_study", "n": 2},
      "m": 2,
      "cutoff": {"a": 0.25, "b": 4, "profile": "exponential"}
    }],
    "test_function": {"center": [0, 0], "radii": [1, 1]},
    "domain": {"kind": "polydisc", "center": [0, 0], "radii": [1, 1]},
    "oracle": 1.25
  })");
}

}  // namespace

TEST_CASE("minimal dirac_c1 config") {
  const RunConfig c = parse_config(R"({"mode": "pair", "scenario": "dirac_c1", "js": [14]})");
  CHECK(c.mode == Mode::pair);
  CHECK(c.scenario == std::optional<std::string>("dirac_c1"));
  CHECK(c.js == std::vector<double>{14.0});
  CHECK(c.schema_version == 1);
}

TEST_CASE("schema diagnostics") {
  const std::string arity = schema_message(
      R"({"mode": "converge", "scenario": "coord_planes_c2", "schedule": {"kind": "polynomial", "exponents": [1]}})");
  CHECK(arity.find("arity") != std::string::npos);
  CHECK(schema_path(R"({"mode": "pair", "scenario": "coord_planes_c2", "js": [4]})") == "js");

  json neg = {{"mode", "pair"}, {"product", linear_product()}, {"js", {3.0}}};
  neg["product"]["factors"][0]["phi"]["c"] = -1.0;
  CHECK(schema_message(neg.dump()).find("c must be positive") != std::string::npos);
  CHECK(schema_path(neg.dump()) == "product.factors[0].phi.c");

  CHECK(schema_path(R"({"mode": "pair", "scenario": "dirac_c1", "js": [1], "colour": 3})") == "colour");
  CHECK(schema_path(R"({"mode": "pair", "scenario": "dirac_c1", "quadrature": {"order": "8"}})") == "quadrature.order");
  CHECK(schema_path(R"({"mode": "pair", "scenario": "nope"})") == "scenario");
  CHECK(schema_path(R"({"mode": "dance", "scenario": "dirac_c1"})") == "mode");
  CHECK(schema_path(R"({"mode": "verify", "scenario": "dirac_c1"})") == "scenario");
  CHECK(schema_path(R"({"schema_version": 2, "mode": "verify"})") == "schema_version");
  CHECK(schema_path("{not json") == "$");
  json extra = {{"mode", "pair"}, {"product", linear_product()}, {"js", {3.0}}};
  extra["product"]["factors"][0]["phi"]["f"][0]["terms"][1]["exp"] = {0, 2, 1};
  CHECK(schema_path(extra.dump()) == "product.factors[0].phi.f[0].terms[1].exp");
}

TEST_CASE("config round trip") {
  const std::vector<std::string> texts = {
      R"({"mode": "converge", "scenario": "dirac_c1", "nu": {"start": 4, "stop": 14}})",
      R"({"mode": "oracle", "scenario": "cauchy_a", "scenario_options": {"a": 2}})",
      R"({"mode": "converge", "scenario": "noncomm_A",
          "schedule": {"kind": "table", "nus": [1, 2], "rows": [[2, 1], [5, 2]]}, "nu": [1, 2],
          "quadrature": {"order": 10, "workers": 2, "shell_refine": false}, "seed": 17,
          "output": {"csv": "a.csv", "json": "a.json"}})",
      R"({"mode": "verify"})",
  };
  for (const auto& t : texts) {
    const RunConfig c = parse_config(t);
    CHECK(parse_config(serialize_config(c)) == c);
  }
  const json inline_cfg = {{"mode", "converge"}, {"product", linear_product()}, {"nu", {1, 2}},
                               {"schedule", {{"kind", "polynomial"}, {"exponents", {1}}}}};
  const RunConfig c = parse_config(inline_cfg.dump());
  CHECK(parse_config(serialize_config(c)) == c);
  CHECK(serialize_config(parse_config(serialize_config(c))) == serialize_config(c));
}

TEST_CASE("converge on dirac_c1 gives one CSV row per nu") {
  const RunConfig c = parse_config(R"({"mode": "converge", "scenario": "dirac_c1",
                                        "nu": {"start": 4, "stop": 14}, "quadrature": {"workers": 1}})");
  const RunOutcome out = run(c);
  CHECK(out.exit_code == kExitOk);
  std::istringstream in(out.csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "nu,j_1,value,quad_error,converged,oracle,abs_dev");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 11);
  CHECK(last.rfind("14,14,", 0) == 0);
  CHECK(out.report["rows"].size() == 11);
  CHECK(out.report["engine_version"] == kEngineVersion);
  CHECK(out.report["deviation"].get<double>() <= 1e-3);
}

TEST_CASE("oracle mode for cauchy_a with a = 2") {
  const RunConfig c = parse_config(R"({"mode": "oracle", "scenario": "cauchy_a", "scenario_options": {"a": 2}})");
  const RunOutcome out = run(c);
  CHECK(out.exit_code == kExitOk);
  const Scenario s = resolve_scenario(c);
  const cplx d = s.psi.holomorphic_derivative(0, 1, Point{0.0});
  CHECK(out.report["oracle"]["value"].get<double>() == d.real());
  CHECK(out.text.find(format_double(d.real())) != std::string::npos);
}

TEST_CASE("pair mode with explicit js leaves nu empty and writes files atomically") {
  const auto dir = std::filesystem::temp_directory_path() / "malab_cli_test";
  std::filesystem::create_directories(dir);
  json cfg = {{"mode", "pair"},
              {"scenario", "lelong_mass_c1"},
              {"js", {6.0}},
              {"quadrature", {{"workers", 1}}},
              {"output", {{"csv", (dir / "out.csv").string()}, {"json", (dir / "out.json").string()}}}};
  const RunOutcome out = run(parse_config(cfg.dump()));
  CHECK(out.exit_code == kExitOk);
  std::ifstream csv(dir / "out.csv");
  std::stringstream buf;
  buf << csv.rdbuf();
  CHECK(buf.str() == out.csv);
  CHECK(out.csv.find("\n,6,") != std::string::npos);
  std::ifstream js(dir / "out.json");
  const json report = json::parse(js);
  CHECK(report["config"]["scenario"] == "lelong_mass_c1");
  CHECK(report.contains("wall_time_s"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("budget exhaustion exits with code 3") {
  const RunConfig c = parse_config(
      R"({"mode": "pair", "scenario": "coord_planes_c2", "js": [16, 4], "quadrature": {"max_evals": 100000, "workers": 1}})");
  CHECK(run(c).exit_code == kExitBudgetExhausted);
}

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
