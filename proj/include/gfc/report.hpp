#pragma once

// CSV tables and JSON summaries. Every float in a CSV is printed with 17
// significant digits; JSON numbers use the shortest exact round-trip form.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfc/battery.hpp"
#include "gfc/equivalence.hpp"
#include "gfc/fourier.hpp"
#include "gfc/solutions.hpp"
#include "gfc/verdict.hpp"

namespace gfc {

inline constexpr const char* kReportSchema = "gfc-report/1";

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline nlohmann::json to_json(const ApproxVerdict& v) {
  nlohmann::json j;
  j["pass"] = v.pass;
  j["fitted_order"] = v.fitted_order;
  j["finest_residual"] = v.residuals.empty() ? 0.0 : v.finest();
  j["tolerance_at_finest"] = v.tolerance_at_finest;
  j["min_order"] = v.min_order;
  j["witness"] = v.witness;
  j["rho"] = v.rho;
  j["residuals"] = v.residuals;
  j["quadrature_error"] = v.quadrature_error;
  auto members = nlohmann::json::array();
  for (const auto& m : v.members)
    members.push_back({{"label", m.label},
                       {"fitted_order", m.fitted_order},
                       {"finest_residual", m.residuals.empty() ? 0.0 : m.residuals.back()}});
  j["members"] = members;
  return j;
}

inline nlohmann::json to_json(const StandardFunctionSample& s) {
  nlohmann::json j;
  j["cauchy_gap"] = s.cauchy_gap;
  j["points"] = s.grid.size();
  auto ic = nlohmann::json::array();
  for (const auto& c : s.interchange)
    ic.push_back({{"axis", c.axis}, {"max_gap", c.max_gap}, {"bound", c.bound}, {"pass", c.pass}});
  j["interchange"] = ic;
  auto ds = nlohmann::json::array();
  for (const auto& d : s.derivative_samples) ds.push_back({{"alpha", d.alpha.to_string()}, {"cauchy_gap", d.cauchy_gap}});
  j["derivatives"] = ds;
  return j;
}

inline nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j;
  j["operator"] = r.name;
  j["input"] = r.u.label();
  j["strong"] = to_json(r.strong_residuals);
  j["weak"] = r.weak_residuals ? to_json(*r.weak_residuals) : nlohmann::json(nullptr);
  if (r.entry_verdict) j["fundamental_solution"] = to_json(*r.entry_verdict);
  if (r.standard_part) {
    j["standard_part"] = to_json(*r.standard_part);
    j["standard_part_strong_residual"] = *r.standard_part_strong_residual;
  } else {
    j["standard_part"] = nullptr;
    if (!r.standard_part_note.empty()) j["standard_part_note"] = r.standard_part_note;
  }
  if (!r.timings.empty()) j["timings_s"] = r.timings;
  return j;
}

inline nlohmann::json to_json(const FourierTable& t) {
  nlohmann::json j;
  j["points"] = t.points;
  j["exact"] = t.exact;
  j["verdict"] = to_json(t.verdict);
  j["max_path_gap"] = t.max_path_gap;
  j["max_imaginary_part"] = t.max_imag;
  auto rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"lambda", r.lambda},
                    {"error", r.error},
                    {"sinc_error", r.sinc_error},
                    {"path_gap", r.path_gap},
                    {"imaginary_part", r.imag_max}});
  j["rows"] = rows;
  return j;
}

inline nlohmann::json battery_json(const TestBattery& b) {
  nlohmann::json j;
  j["version"] = std::string(kBatteryVersion);
  j["dimension"] = b.dim;
  j["class"] = std::string(to_string(b.regularity));
  auto ms = nlohmann::json::array();
  for (const auto& m : b.members)
    ms.push_back({{"label", m.phi.label()},
                  {"regularity", std::string(to_string(m.regularity))},
                  {"support_center", std::vector<double>(m.phi.support_center().begin(),
                                                         m.phi.support_center().begin() + b.dim)},
                  {"support_radius", m.phi.support_radius(0)},
                  {"weak_order", m.weak_order},
                  {"derivative_bounds", sampled_sup_norms(m)}});
  j["members"] = ms;
  return j;
}

// ---- CSV ------------------------------------------------------------------

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    require(out_.good(), ErrorKind::io, "cannot write '" + path + "'");
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  void close() {
    out_.flush();
    require(out_.good(), ErrorKind::io, "write failed");
  }

 private:
  std::ofstream out_;
};

/// level_index, rho, residual, quadrature_error_estimate, fitted_order;
/// the last row carries the fit.
inline void write_verdict_csv(const std::string& path, const ApproxVerdict& v) {
  CsvWriter w(path);
  w.row({"level_index", "rho", "residual", "quadrature_error_estimate", "fitted_order"});
  for (std::size_t l = 0; l < v.rho.size(); ++l)
    w.row({std::to_string(l), fmt17(v.rho[l]), fmt17(v.residuals[l]),
           fmt17(l < v.quadrature_error.size() ? v.quadrature_error[l] : 0.0), ""});
  w.row({"fit", "", "", "", fmt17(v.fitted_order)});
  w.close();
}

inline void write_solve_csv(const std::string& path, const SolveReport& r) {
  CsvWriter w(path);
  w.row({"level_index", "rho", "strong_residual", "weak_residual", "quadrature_error_estimate", "fitted_order_strong",
         "fitted_order_weak"});
  const auto& s = r.strong_residuals;
  for (std::size_t l = 0; l < s.rho.size(); ++l) {
    std::string wr, we;
    if (r.weak_residuals) {
      wr = fmt17(r.weak_residuals->residuals[l]);
      we = fmt17(r.weak_residuals->quadrature_error[l]);
    }
    w.row({std::to_string(l), fmt17(s.rho[l]), fmt17(s.residuals[l]), wr, we, "", ""});
  }
  w.row({"fit", "", "", "", "", fmt17(s.fitted_order), r.weak_residuals ? fmt17(r.weak_residuals->fitted_order) : ""});
  w.close();
}

/// The path gap stands in for the quadrature error: both paths compute the
/// same number by unrelated quadratures.
inline void write_fourier_csv(const std::string& path, const FourierTable& t) {
  CsvWriter w(path);
  w.row({"level_index", "rho", "lambda", "residual", "quadrature_error_estimate", "sinc_residual", "imaginary_part",
         "fitted_order"});
  for (std::size_t l = 0; l < t.rows.size(); ++l) {
    const auto& r = t.rows[l];
    w.row({std::to_string(l), fmt17(1.0 / r.lambda), fmt17(r.lambda), fmt17(r.error), fmt17(r.path_gap),
           fmt17(r.sinc_error), fmt17(r.imag_max), ""});
  }
  w.row({"fit", "", "", "", "", "", "", fmt17(t.verdict.fitted_order)});
  w.close();
}

inline void write_stpart_csv(const std::string& path, const StandardFunctionSample& s) {
  CsvWriter w(path);
  std::vector<std::string> head{"point_index"};
  for (std::size_t i = 0; i < s.grid.dim; ++i) head.push_back("x" + std::to_string(i + 1));
  head.push_back("st_value");
  for (const auto& d : s.derivative_samples) {
    std::string a;
    for (std::size_t i = 0; i < d.alpha.dim(); ++i) a += std::to_string(d.alpha[i]);
    head.push_back("st_d" + a);
  }
  w.row(head);
  for (std::size_t p = 0; p < s.grid.size(); ++p) {
    std::vector<std::string> row{std::to_string(p)};
    for (double x : s.grid.point(p)) row.push_back(fmt17(x));
    row.push_back(fmt17(s.values[p]));
    for (const auto& d : s.derivative_samples) row.push_back(fmt17(d.values[p]));
    w.row(row);
  }
  w.close();
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::io, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  out.flush();
  require(out.good(), ErrorKind::io, "write failed for '" + path + "'");
}

}  // namespace gfc
