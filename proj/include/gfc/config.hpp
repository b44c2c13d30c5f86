#pragma once

// Experiment configuration (JSON, schema "gfc-config/1") and the runner.
// Every field is validated before any computation; unknown keys are errors.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfc/battery.hpp"
#include "gfc/delta.hpp"
#include "gfc/equivalence.hpp"
#include "gfc/fourier.hpp"
#include "gfc/inputs.hpp"
#include "gfc/kernels.hpp"
#include "gfc/report.hpp"
#include "gfc/solutions.hpp"

namespace gfc {

inline constexpr const char* kConfigSchema = "gfc-config/1";

/// A configuration problem, with the dotted path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::string command;  // delta-verify | solve | fourier | stpart | battery-list
  int k_min = 4, k_max = 10;
  double base = 2.0;
  std::size_t dimension = 1;
  std::string mollifier = "bump";
  std::string battery = "C0";
  std::string op = "laplace_1d";
  double transport_speed = 1.0;
  std::string profile = "bump";
  InputParams params;
  Tolerance tol{};
  int quad_order = 8;
  double quad_refine = 1.0;
  double grid_radius = 2.0;
  int points_per_axis = 41;
  double jitter = 0.0;
  std::vector<double> points{0.0};
  bool weak = true;
  bool standard_part = true;
  bool timings = false;
  std::string out_dir = ".";
  std::string prefix = "gfc";
  std::uint64_t seed = 0;
};

namespace config_detail {

inline const std::set<std::string> kCommands{"delta-verify", "solve", "fourier", "stpart", "battery-list"};

inline void only_keys(const nlohmann::json& j, const std::string& where, const std::set<std::string>& keys) {
  if (!j.is_object()) throw ConfigError(where.empty() ? "<root>" : where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key()))
      throw ConfigError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
}

template <class T>
T get(const nlohmann::json& j, const std::string& key, const std::string& path, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path, "wrong type");
  }
}

inline double number(const nlohmann::json& j, const std::string& key, const std::string& path, double def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number()) throw ConfigError(path, "expected a number");
  return j.at(key).get<double>();
}

inline int integer(const nlohmann::json& j, const std::string& key, const std::string& path, int def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.at(key).get<int>();
}

}  // namespace config_detail

/// Checks every field. Throws ConfigError naming the first bad one.
inline void validate(const ExperimentConfig& c) {
  using config_detail::kCommands;
  if (!kCommands.count(c.command)) throw ConfigError("command", "unknown command '" + c.command + "'");
  if (!(c.base >= 1.5 && c.base <= 16.0)) throw ConfigError("ladder.base", "must lie in [1.5, 16]");
  if (c.k_max - c.k_min < 2) throw ConfigError("ladder.k_max", "need at least 3 levels (k_max >= k_min + 2)");
  if (c.k_max - c.k_min > 40) throw ConfigError("ladder.k_max", "at most 41 levels");
  if (c.dimension < 1 || c.dimension > 3) throw ConfigError("dimension", "must be 1, 2 or 3");
  if (c.mollifier != "bump" && c.mollifier != "gaussian" && c.mollifier != "sinc")
    throw ConfigError("mollifier", "unknown kind '" + c.mollifier + "'");
  if (c.mollifier == "sinc" && c.dimension != 1) throw ConfigError("mollifier", "sinc is one-dimensional");
  if (c.battery != "C0" && c.battery != "C1c" && c.battery != "Cinf_c")
    throw ConfigError("battery", "unknown class '" + c.battery + "'");
  bool known_op = false;
  for (const auto& n : catalog_names()) known_op = known_op || n == c.op;
  if (!known_op) throw ConfigError("operator", "unknown operator '" + c.op + "'");
  if (!(c.transport_speed == c.transport_speed) || !std::isfinite(c.transport_speed))
    throw ConfigError("transport_speed", "must be finite");
  bool known_profile = false;
  for (const auto& n : input_profiles()) known_profile = known_profile || n == c.profile;
  if (!known_profile) throw ConfigError("input.profile", "unknown profile '" + c.profile + "'");
  for (const auto& [k, v] : c.params) {
    bool ok = false;
    for (const auto& a : input_parameters(c.profile)) ok = ok || a == k;
    if (!ok) throw ConfigError("input.params." + k, "not a parameter of '" + c.profile + "'");
    if (!std::isfinite(v)) throw ConfigError("input.params." + k, "must be finite");
  }
  if (c.params.count("radius") && !(c.params.at("radius") > 0.0))
    throw ConfigError("input.params.radius", "must be positive");
  if (!(c.tol.finest > 0.0)) throw ConfigError("tolerance.finest", "must be positive");
  if (!std::isfinite(c.tol.min_order)) throw ConfigError("tolerance.min_order", "must be finite");
  if (c.quad_order < 1 || c.quad_order > 64) throw ConfigError("quadrature.order", "must lie in 1..64");
  if (!(c.quad_refine >= 1.0)) throw ConfigError("quadrature.refine", "must be >= 1 (cells never below ceil(8/rho))");
  if (!(c.grid_radius > 0.0)) throw ConfigError("grid.radius", "must be positive");
  if (c.points_per_axis < 1 || c.points_per_axis > 401) throw ConfigError("grid.points_per_axis", "must lie in 1..401");
  if (!(c.jitter >= 0.0 && c.jitter < 0.5)) throw ConfigError("grid.jitter", "must lie in [0, 0.5)");
  if (c.points.empty()) throw ConfigError("points", "at least one evaluation point");
  if (c.prefix.empty() || c.prefix.find('/') != std::string::npos)
    throw ConfigError("output.prefix", "must be a plain file name");
  if (c.command == "solve" && catalog_dimension(c.op) != c.dimension)
    throw ConfigError("dimension", "differs from the operator's dimension");
  if (c.command == "fourier" && c.dimension != 1) throw ConfigError("dimension", "the Fourier demo is one-dimensional");
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using namespace config_detail;
  only_keys(j, "", {"schema", "command", "ladder", "dimension", "mollifier", "battery", "operator", "transport_speed",
                    "input", "tolerance", "quadrature", "grid", "points", "weak", "standard_part", "timings", "output",
                    "seed"});
  ExperimentConfig c;
  const auto schema = get<std::string>(j, "schema", "schema", kConfigSchema);
  if (schema != kConfigSchema) throw ConfigError("schema", "expected '" + std::string(kConfigSchema) + "'");
  if (!j.contains("command")) throw ConfigError("command", "missing");
  c.command = get<std::string>(j, "command", "command", "");
  if (j.contains("ladder")) {
    const auto& l = j.at("ladder");
    only_keys(l, "ladder", {"k_min", "k_max", "base"});
    c.k_min = integer(l, "k_min", "ladder.k_min", c.k_min);
    c.k_max = integer(l, "k_max", "ladder.k_max", c.k_max);
    c.base = number(l, "base", "ladder.base", c.base);
  }
  c.dimension = static_cast<std::size_t>(integer(j, "dimension", "dimension", 0));
  c.mollifier = get<std::string>(j, "mollifier", "mollifier", c.mollifier);
  c.battery = get<std::string>(j, "battery", "battery", c.battery);
  c.op = get<std::string>(j, "operator", "operator", c.op);
  c.transport_speed = number(j, "transport_speed", "transport_speed", c.transport_speed);
  if (c.dimension == 0) {
    // default: the operator's dimension for solves, 1 otherwise
    bool known = false;
    for (const auto& n : catalog_names()) known = known || n == c.op;
    c.dimension = (c.command == "solve" && known) ? catalog_dimension(c.op) : 1;
  }
  if (j.contains("input")) {
    const auto& in = j.at("input");
    only_keys(in, "input", {"profile", "params"});
    c.profile = get<std::string>(in, "profile", "input.profile", c.profile);
    if (in.contains("params")) {
      const auto& p = in.at("params");
      if (!p.is_object()) throw ConfigError("input.params", "expected an object");
      for (auto it = p.begin(); it != p.end(); ++it) {
        if (!it.value().is_number()) throw ConfigError("input.params." + it.key(), "expected a number");
        c.params[it.key()] = it.value().get<double>();
      }
    }
  }
  if (j.contains("tolerance")) {
    const auto& t = j.at("tolerance");
    only_keys(t, "tolerance", {"finest", "min_order"});
    c.tol.finest = number(t, "finest", "tolerance.finest", c.tol.finest);
    c.tol.min_order = number(t, "min_order", "tolerance.min_order", c.tol.min_order);
  } else if (c.command == "fourier") {
    c.tol = FourierOptions{}.tol;
  }
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    only_keys(q, "quadrature", {"order", "refine"});
    c.quad_order = integer(q, "order", "quadrature.order", c.quad_order);
    c.quad_refine = number(q, "refine", "quadrature.refine", c.quad_refine);
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    only_keys(g, "grid", {"radius", "points_per_axis", "jitter"});
    c.grid_radius = number(g, "radius", "grid.radius", c.grid_radius);
    c.points_per_axis = integer(g, "points_per_axis", "grid.points_per_axis", c.points_per_axis);
    c.jitter = number(g, "jitter", "grid.jitter", c.jitter);
  }
  if (j.contains("points")) {
    const auto& p = j.at("points");
    if (!p.is_array()) throw ConfigError("points", "expected an array of numbers");
    c.points.clear();
    for (const auto& v : p) {
      if (!v.is_number()) throw ConfigError("points", "expected an array of numbers");
      c.points.push_back(v.get<double>());
    }
  }
  c.weak = get<bool>(j, "weak", "weak", c.weak);
  c.standard_part = get<bool>(j, "standard_part", "standard_part", c.standard_part);
  c.timings = get<bool>(j, "timings", "timings", c.timings);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    only_keys(o, "output", {"dir", "prefix"});
    c.out_dir = get<std::string>(o, "dir", "output.dir", c.out_dir);
    c.prefix = get<std::string>(o, "prefix", "output.prefix", c.prefix);
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed", "expected a natural number");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  validate(c);
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<text>", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["schema"] = kConfigSchema;
  j["command"] = c.command;
  j["ladder"] = {{"k_min", c.k_min}, {"k_max", c.k_max}, {"base", c.base}};
  j["dimension"] = c.dimension;
  j["mollifier"] = c.mollifier;
  j["battery"] = c.battery;
  j["operator"] = c.op;
  j["transport_speed"] = c.transport_speed;
  j["input"] = {{"profile", c.profile}, {"params", c.params}};
  j["tolerance"] = {{"finest", c.tol.finest}, {"min_order", c.tol.min_order}};
  j["quadrature"] = {{"order", c.quad_order}, {"refine", c.quad_refine}};
  j["grid"] = {{"radius", c.grid_radius}, {"points_per_axis", c.points_per_axis}, {"jitter", c.jitter}};
  j["points"] = c.points;
  j["weak"] = c.weak;
  j["standard_part"] = c.standard_part;
  j["timings"] = c.timings;
  j["output"] = {{"dir", c.out_dir}, {"prefix", c.prefix}};
  j["seed"] = c.seed;
  return j;
}

// ---------------------------------------------------------------------------

struct RunResult {
  int status = 2;  // 0 all verdicts pass, 1 a verdict failed, 2 configuration or runtime error
  std::string csv_path, json_path;
  nlohmann::json summary;
  std::string message;
};

namespace config_detail {

inline ScaleLadder ladder_of(const ExperimentConfig& c) { return make_ladder(c.k_min, c.k_max, c.base); }

inline QuadratureSpec quad_of(const ExperimentConfig& c, const ScaleLadder& ladder) {
  auto q = QuadratureSpec::for_ladder(ladder, QuadRule::gauss_legendre, c.quad_order);
  return c.quad_refine > 1.0 ? q.refined(c.quad_refine) : q;
}

}  // namespace config_detail

/// Runs one experiment and writes <dir>/<prefix>.csv and <dir>/<prefix>.json.
/// The battery listing writes only the JSON file.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
  using namespace config_detail;
  RunResult r;
  try {
    validate(cfg);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (!fs::is_directory(cfg.out_dir)) throw ConfigError("output.dir", "cannot create '" + cfg.out_dir + "'");
    r.csv_path = (fs::path(cfg.out_dir) / (cfg.prefix + ".csv")).string();
    r.json_path = (fs::path(cfg.out_dir) / (cfg.prefix + ".json")).string();

    nlohmann::json s;
    s["schema"] = kReportSchema;
    s["config"] = to_json(cfg);
    bool pass = true;

    if (cfg.command == "battery-list") {
      s["battery"] = battery_json(make_battery(cfg.dimension, parse_regularity(cfg.battery)));
      r.csv_path.clear();
    } else {
      const ScaleLadder ladder = ladder_of(cfg);
      const QuadratureSpec quad = quad_of(cfg, ladder);
      if (cfg.command == "delta-verify") {
        const auto psi = make_mollifier(cfg.mollifier, cfg.dimension);
        const SmoothFamily delta = cfg.mollifier == "bump" ? model_delta(psi, ladder) : scaled_delta(psi, ladder);
        const auto v = verify_delta(delta, make_battery(cfg.dimension, parse_regularity(cfg.battery)), quad, cfg.tol);
        write_verdict_csv(r.csv_path, v);
        s["delta"] = delta.label();
        s["verdict"] = to_json(v);
        pass = v.pass;
      } else if (cfg.command == "solve") {
        const std::size_t d = catalog_dimension(cfg.op);
        const SmoothFamily f = make_input(cfg.profile, d, cfg.params, ladder);
        SolveOptions so;
        so.tol = cfg.tol;
        so.radius = cfg.grid_radius;
        so.points_per_axis = cfg.points_per_axis;
        so.seed = cfg.seed;
        so.jitter = cfg.jitter;
        so.weak = cfg.weak;
        so.standard_part = cfg.standard_part;
        so.timings = cfg.timings;
        so.transport_speed = cfg.transport_speed;
        const auto rep = solve_convolution(cfg.op, f, ladder, quad, so);
        write_solve_csv(r.csv_path, rep);
        s["solve"] = to_json(rep);
        pass = rep.strong_residuals.pass && (!rep.weak_residuals || rep.weak_residuals->pass);
      } else if (cfg.command == "fourier") {
        const SmoothFamily f = make_input(cfg.profile, 1, cfg.params, ladder);
        FourierOptions fo;
        fo.points = cfg.points;
        fo.tol = cfg.tol;
        const auto t = fourier_inversion_demo(f, ladder, fo);
        write_fourier_csv(r.csv_path, t);
        s["fourier"] = to_json(t);
        pass = t.verdict.pass;
      } else {  // stpart
        const SmoothFamily f = make_input(cfg.profile, cfg.dimension, cfg.params, ladder);
        const Grid g = ball_grid(cfg.dimension, cfg.grid_radius, cfg.points_per_axis, cfg.seed, cfg.jitter);
        const auto sp = standard_part(f, g, 1);
        write_stpart_csv(r.csv_path, sp);
        s["standard_part"] = to_json(sp);
        for (const auto& ic : sp.interchange) pass = pass && ic.pass;
      }
    }
    s["pass"] = pass;
    write_json(r.json_path, s);
    r.summary = std::move(s);
    r.status = pass ? 0 : 1;
  } catch (const ConfigError& e) {
    r.status = 2;
    r.message = std::string("configuration error: ") + e.what();
  } catch (const Error& e) {
    r.status = 2;
    r.message = std::string("error: ") + e.what();
  }
  return r;
}

}  // namespace gfc
