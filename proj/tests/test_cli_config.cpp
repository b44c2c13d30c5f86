#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gfc/config.hpp"

using namespace gfc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

fs::path scratch_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gfc_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("a minimal config takes the documented defaults") {
  const auto c = parse_config_text(R"({"command": "delta-verify"})");
  CHECK(c.k_min == 4);
  CHECK(c.k_max == 10);
  CHECK(c.base == 2.0);
  CHECK(c.dimension == 1);
  CHECK(c.mollifier == "bump");
  CHECK(c.battery == "C0");
  CHECK(c.tol.finest == 1e-3);
  CHECK(c.tol.min_order == 0.5);
  CHECK(c.seed == 0);
}

TEST_CASE("solve configs take the operator's dimension") {
  CHECK(parse_config_text(R"({"command": "solve", "operator": "laplace_3d"})").dimension == 3);
  CHECK(field_of(R"({"command": "solve", "operator": "laplace_3d", "dimension": 2})") == "dimension");
}

TEST_CASE("nested sections parse") {
  const auto c = parse_config_text(R"({
    "schema": "gfc-config/1", "command": "solve", "operator": "ddx_1d",
    "ladder": {"k_min": 3, "k_max": 8, "base": 2.5},
    "input": {"profile": "bump", "params": {"radius": 0.5, "center": 0.25}},
    "tolerance": {"finest": 2e-3, "min_order": 0.9},
    "quadrature": {"order": 10, "refine": 2},
    "grid": {"radius": 1.5, "points_per_axis": 21, "jitter": 0.1},
    "weak": false, "standard_part": false,
    "output": {"dir": "out", "prefix": "run1"}, "seed": 42})");
  CHECK(c.k_min == 3);
  CHECK(c.base == 2.5);
  CHECK(c.params.at("radius") == 0.5);
  CHECK(c.params.at("center") == 0.25);
  CHECK(c.tol.min_order == 0.9);
  CHECK(c.quad_order == 10);
  CHECK(c.quad_refine == 2.0);
  CHECK(c.points_per_axis == 21);
  CHECK(c.jitter == 0.1);
  CHECK_FALSE(c.weak);
  CHECK(c.prefix == "run1");
  CHECK(c.seed == 42);
  // and round-trips through its own JSON form
  const auto again = parse_config(to_json(c));
  CHECK(to_json(again) == to_json(c));
}

TEST_CASE("invalid fields are named") {
  CHECK(field_of(R"({"command": "delta-verify", "ladder": {"base": 1}})") == "ladder.base");
  CHECK(field_of(R"({"command": "delta-verify", "ladder": {"k_min": 4, "k_max": 5}})") == "ladder.k_max");
  CHECK(field_of(R"({"command": "frobnicate"})") == "command");
  CHECK(field_of(R"({})") == "command");
  CHECK(field_of(R"({"command": "delta-verify", "mollifier": "box"})") == "mollifier");
  CHECK(field_of(R"({"command": "delta-verify", "mollifier": "sinc", "dimension": 2})") == "mollifier");
  CHECK(field_of(R"({"command": "solve", "operator": "wave"})") == "operator");
  CHECK(field_of(R"({"command": "solve", "input": {"profile": "spike"}})") == "input.profile");
  CHECK(field_of(R"({"command": "solve", "input": {"params": {"width": 2}}})") == "input.params.width");
  CHECK(field_of(R"({"command": "solve", "input": {"params": {"radius": -1}}})") == "input.params.radius");
  CHECK(field_of(R"({"command": "delta-verify", "tolerance": {"finest": 0}})") == "tolerance.finest");
  CHECK(field_of(R"({"command": "delta-verify", "quadrature": {"refine": 0.5}})") == "quadrature.refine");
  CHECK(field_of(R"({"command": "delta-verify", "grid": {"jitter": 0.7}})") == "grid.jitter");
  CHECK(field_of(R"({"command": "delta-verify", "seed": -3})") == "seed");
  CHECK(field_of(R"({"command": "delta-verify", "schema": "gfc-config/0"})") == "schema");
  CHECK(field_of(R"({"command": "fourier", "dimension": 2})") == "dimension");
  CHECK(field_of(R"({"command": "delta-verify", "output": {"prefix": "a/b"}})") == "output.prefix");
}

TEST_CASE("unknown keys are errors") {
  CHECK(field_of(R"({"command": "delta-verify", "tolerence": {}})") == "tolerence");
  CHECK(field_of(R"({"command": "delta-verify", "ladder": {"kmin": 2}})") == "ladder.kmin");
  CHECK(field_of("not json") == "<text>");
}

TEST_CASE("delta-verify writes a seven-level table") {
  const auto dir = scratch_dir("dv");
  auto c = parse_config_text(R"({"command": "delta-verify"})");
  c.out_dir = dir.string();
  const auto r = run_experiment(c);
  REQUIRE(r.status == 0);
  std::ifstream in(r.csv_path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 9);  // header, 7 levels, fit
  CHECK(lines[0] == "level_index,rho,residual,quadrature_error_estimate,fitted_order");
  CHECK(lines[1].rfind("0,0.0625,", 0) == 0);
  CHECK(lines[8].rfind("fit,,,,", 0) == 0);
  const auto j = nlohmann::json::parse(slurp(r.json_path));
  CHECK(j["schema"] == "gfc-report/1");
  CHECK(j["pass"] == true);
  CHECK(j["verdict"]["residuals"].size() == 7);
}

TEST_CASE("a failing verdict exits with 1") {
  const auto dir = scratch_dir("fail");
  // the order-1 kink rate cannot reach 1e-6
  auto c = parse_config_text(R"({"command": "delta-verify", "tolerance": {"finest": 1e-6}})");
  c.out_dir = dir.string();
  CHECK(run_experiment(c).status == 1);
}

TEST_CASE("runtime errors exit with 2") {
  auto c = parse_config_text(R"({"command": "delta-verify"})");
  c.base = 1.0;  // bypasses parsing; run_experiment validates again
  const auto r = run_experiment(c);
  CHECK(r.status == 2);
  CHECK(r.message.find("ladder.base") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs") {
  const auto a = scratch_dir("det_a"), b = scratch_dir("det_b");
  for (const char* text : {R"({"command": "delta-verify", "mollifier": "gaussian", "battery": "C1c"})",
                           R"({"command": "stpart", "input": {"profile": "analytic"}, "grid": {"points_per_axis": 11, "jitter": 0.3}, "seed": 9})"}) {
    auto c = parse_config_text(text);
    c.out_dir = a.string();
    const auto r1 = run_experiment(c);
    c.out_dir = b.string();
    const auto r2 = run_experiment(c);
    REQUIRE(r1.status == 0);
    REQUIRE(r2.status == 0);
    CHECK(slurp(r1.csv_path) == slurp(r2.csv_path));
    // the JSON embeds the config, whose output dir differs; compare the rest
    auto j1 = nlohmann::json::parse(slurp(r1.json_path)), j2 = nlohmann::json::parse(slurp(r2.json_path));
    j1["config"].erase("output");
    j2["config"].erase("output");
    CHECK(j1.dump() == j2.dump());
  }
}

TEST_CASE("a different seed moves the jittered grid") {
  const auto a = scratch_dir("seed_a"), b = scratch_dir("seed_b");
  auto c = parse_config_text(R"({"command": "stpart", "input": {"profile": "analytic"}, "grid": {"points_per_axis": 11, "jitter": 0.3}})");
  c.out_dir = a.string();
  c.seed = 1;
  const auto r1 = run_experiment(c);
  c.out_dir = b.string();
  c.seed = 2;
  const auto r2 = run_experiment(c);
  CHECK(slurp(r1.csv_path) != slurp(r2.csv_path));
}

TEST_CASE("floats carry 17 significant digits") {
  CHECK(fmt17(0.1) == "0.10000000000000001");
  CHECK(std::stod(fmt17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("battery listing round-trips through the parser") {
  const auto b = battery_json(make_battery(1, Regularity::c0));
  CHECK(b["version"] == "gfc-battery-1.0");
  REQUIRE(b["members"].size() == 15);
  int cinf = 0, c1 = 0, c0 = 0;
  for (const auto& m : b["members"]) {
    const auto r = m["regularity"].get<std::string>();
    cinf += r == "Cinf_c";
    c1 += r == "C1c";
    c0 += r == "C0";
    CHECK(m["derivative_bounds"].size() == static_cast<std::size_t>(m["weak_order"].get<int>() + 1));
  }
  CHECK(cinf == 8);
  CHECK(c1 == 4);
  CHECK(c0 == 3);
  const auto text = b.dump(2);
  CHECK(nlohmann::json::parse(text) == b);
  CHECK(battery_json(make_battery(1, Regularity::c0)).dump() == b.dump());
}

TEST_CASE("battery-list run writes only the JSON") {
  const auto dir = scratch_dir("bl");
  auto c = parse_config_text(R"({"command": "battery-list", "dimension": 2})");
  c.out_dir = dir.string();
  const auto r = run_experiment(c);
  REQUIRE(r.status == 0);
  CHECK(r.csv_path.empty());
  const auto j = nlohmann::json::parse(slurp(r.json_path));
  CHECK(j["battery"]["dimension"] == 2);
  CHECK(j["battery"]["members"].size() == 15);
}
