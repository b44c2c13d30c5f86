// gfcalc: run one configured experiment.
//
//   gfcalc delta-verify --config run.json
//   gfcalc solve --operator laplace_1d --profile bump --out results
//   gfcalc battery-list --json
//
// Flags override the config file. Exit status: 0 all verdicts pass,
// 1 a verdict failed, 2 configuration or runtime error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gfc/config.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<int> k_min, k_max, dimension, order, points_per_axis;
  std::optional<double> base, finest, min_order, radius, refine, transport_speed;
  std::optional<std::string> mollifier, battery, op, profile, out_dir, prefix;
  std::vector<std::string> params;  // key=value
  std::vector<double> points;
  std::optional<std::uint64_t> seed;
  bool no_weak = false, no_stpart = false, timings = false, json = false;
};

void add_flags(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config, "JSON configuration file");
  sub->add_option("--k-min", o.k_min, "coarsest level exponent");
  sub->add_option("--k-max", o.k_max, "finest level exponent");
  sub->add_option("--base", o.base, "ladder ratio");
  sub->add_option("--dimension", o.dimension);
  sub->add_option("--mollifier", o.mollifier, "bump | gaussian | sinc");
  sub->add_option("--battery", o.battery, "C0 | C1c | Cinf_c");
  sub->add_option("--operator", o.op);
  sub->add_option("--transport-speed", o.transport_speed);
  sub->add_option("--profile", o.profile, "input profile");
  sub->add_option("--param", o.params, "input parameter, key=value");
  sub->add_option("--tol", o.finest, "residual allowed at the finest level");
  sub->add_option("--min-order", o.min_order);
  sub->add_option("--quad-order", o.order);
  sub->add_option("--refine", o.refine, "uniform quadrature refinement factor");
  sub->add_option("--grid-radius", o.radius);
  sub->add_option("--points-per-axis", o.points_per_axis);
  sub->add_option("--point", o.points, "evaluation point (fourier)");
  sub->add_option("--out", o.out_dir, "output directory");
  sub->add_option("--prefix", o.prefix, "output file prefix");
  sub->add_option("--seed", o.seed);
  sub->add_flag("--no-weak", o.no_weak, "skip the weak residual");
  sub->add_flag("--no-standard-part", o.no_stpart);
  sub->add_flag("--timings", o.timings, "record wall-clock timings in the summary");
}

// the config as JSON, then flags on top, then the usual parse and validation
gfc::ExperimentConfig build(const std::string& command, const Overrides& o) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw gfc::ConfigError("--config", "cannot read '" + o.config + "'");
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw gfc::ConfigError("--config", std::string("not valid JSON: ") + e.what());
    }
    if (j.contains("command") && j["command"] != command)
      throw gfc::ConfigError("command", "config is for '" + j["command"].get<std::string>() + "'");
  }
  j["command"] = command;
  if (o.k_min) j["ladder"]["k_min"] = *o.k_min;
  if (o.k_max) j["ladder"]["k_max"] = *o.k_max;
  if (o.base) j["ladder"]["base"] = *o.base;
  if (o.dimension) j["dimension"] = *o.dimension;
  if (o.mollifier) j["mollifier"] = *o.mollifier;
  if (o.battery) j["battery"] = *o.battery;
  if (o.op) j["operator"] = *o.op;
  if (o.transport_speed) j["transport_speed"] = *o.transport_speed;
  if (o.profile) j["input"]["profile"] = *o.profile;
  for (const auto& kv : o.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw gfc::ConfigError("--param", "expected key=value, got '" + kv + "'");
    try {
      j["input"]["params"][kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw gfc::ConfigError("input.params." + kv.substr(0, eq), "not a number");
    }
  }
  if (o.finest) j["tolerance"]["finest"] = *o.finest;
  if (o.min_order) j["tolerance"]["min_order"] = *o.min_order;
  if (o.order) j["quadrature"]["order"] = *o.order;
  if (o.refine) j["quadrature"]["refine"] = *o.refine;
  if (o.radius) j["grid"]["radius"] = *o.radius;
  if (o.points_per_axis) j["grid"]["points_per_axis"] = *o.points_per_axis;
  if (!o.points.empty()) j["points"] = o.points;
  if (o.out_dir) j["output"]["dir"] = *o.out_dir;
  if (o.prefix) j["output"]["prefix"] = *o.prefix;
  if (o.seed) j["seed"] = *o.seed;
  if (o.no_weak) j["weak"] = false;
  if (o.no_stpart) j["standard_part"] = false;
  if (o.timings) j["timings"] = true;
  return gfc::parse_config(j);
}

void print_battery(const nlohmann::json& b) {
  std::printf("battery %s, dimension %d, class %s\n", b["version"].get<std::string>().c_str(), b["dimension"].get<int>(),
              b["class"].get<std::string>().c_str());
  std::printf("%-24s %-7s %-8s %s\n", "label", "class", "radius", "sup |d^j phi|, j = 0..");
  for (const auto& m : b["members"]) {
    std::string bounds;
    for (const auto& v : m["derivative_bounds"]) bounds += " " + gfc::fmt17(v.get<double>());
    std::printf("%-24s %-7s %-8g%s\n", m["label"].get<std::string>().c_str(), m["regularity"].get<std::string>().c_str(),
                m["support_radius"].get<double>(), bounds.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale-ladder verification of delta families, fundamental solutions and Fourier inversion"};
  app.require_subcommand(1);
  Overrides o;
  for (const char* name : {"delta-verify", "solve", "fourier", "stpart", "battery-list"}) {
    auto* sub = app.add_subcommand(name);
    add_flags(sub, o);
    if (std::string(name) == "battery-list") sub->add_flag("--json", o.json, "print the JSON dump");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  gfc::ExperimentConfig cfg;
  try {
    cfg = build(command, o);
  } catch (const gfc::ConfigError& e) {
    std::cerr << "gfcalc: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const gfc::Error& e) {
    std::cerr << "gfcalc: " << e.what() << '\n';
    return 2;
  }
  if (command == "battery-list" && !o.out_dir) {
    // listing only; nothing written
    try {
      const auto b = gfc::battery_json(gfc::make_battery(cfg.dimension, gfc::parse_regularity(cfg.battery)));
      if (o.json)
        std::cout << b.dump(2) << '\n';
      else
        print_battery(b);
      return 0;
    } catch (const gfc::Error& e) {
      std::cerr << "gfcalc: " << e.what() << '\n';
      return 2;
    }
  }

  const auto r = gfc::run_experiment(cfg);
  if (r.status == 2) {
    std::cerr << "gfcalc: " << r.message << '\n';
    return 2;
  }
  if (!r.csv_path.empty()) std::cout << "wrote " << r.csv_path << '\n';
  std::cout << "wrote " << r.json_path << '\n';
  std::cout << (r.status == 0 ? "PASS" : "FAIL") << '\n';
  return r.status;
}
