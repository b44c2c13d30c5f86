#pragma once

// Catalog entries with their attached verification, the convolution solver
// u = E_ρ ⋆ f, and the weak and strong residual checks.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gfc/battery.hpp"
#include "gfc/calculus.hpp"
#include "gfc/equivalence.hpp"
#include "gfc/kernels.hpp"
#include "gfc/verdict.hpp"

namespace gfc {

struct FundamentalSolutionEntry {
  std::string name;
  PDOperator op;
  std::function<double(std::span<const double>)> classical_kernel;
  std::string singularity;
  SmoothFamily mollified;  // E_ρ = E_cl ⋆ δ_ρ
  SmoothFamily image;      // P(∂)E_ρ, restricted to its certified support
  ApproxVerdict verdict;   // verify_delta(image) on the order-0 battery
  bool verified = false;
  std::string note;
};

struct FundamentalSolutionOptions {
  bool verify = true;
  Tolerance tol{};
  double transport_speed = 1.0;
};

namespace solution_detail {

inline std::string singularity_of(std::string_view name) {
  if (name == "ddx_1d") return "jump at x = 0";
  if (name == "laplace_1d") return "kink at x = 0";
  if (name == "laplace_2d") return "logarithmic point singularity at 0";
  if (name == "laplace_3d") return "1/|x| point singularity at 0";
  if (name == "heat_1p1") return "jump across t = 0, unbounded at the origin";
  return "measure on the ray {x = ct, t >= 0}";
}

inline std::string note_of(std::string_view name) {
  if (name == "ddx_1d") return "Heaviside H(x); E_rho is the antiderivative of delta_rho from -rho";
  if (name == "laplace_1d") return "|x|/2; representative chosen symmetric (no affine part)";
  if (name == "laplace_2d") return "(1/2pi) log|x|; shell formula with tabulated bump moments";
  if (name == "laplace_3d") return "-1/(4pi|x|); shell formula with tabulated bump moments";
  if (name == "heat_1p1") return "causal heat kernel H(t)(4pi t)^{-1/2} exp(-x^2/4t), coordinates (t,x)";
  return "causal characteristic measure H(t) delta(x - ct), coordinates (t,x)";
}

/// The shell formula against polar quadrature centred on the singularity.
inline void cross_check_shell(const SmoothFamily& E, std::string_view name, const ScaleLadder& ladder,
                              const Mollifier& psi) {
  const std::size_t d = catalog_dimension(name);
  const DilatedProfile D(psi, ladder.rho(0));
  const auto ecl = classical_kernel(name);
  for (double frac : {0.0, 0.35, 0.9, 1.6}) {
    std::array<double, kMaxDim> p{};
    p[0] = frac * D.rho * 0.8;
    p[1] = frac * D.rho * 0.6;
    std::span<const double> ps(p.data(), d);
    const double tab = E(0, ps);
    if (frac * D.rho >= D.rho) {
      // outside the bump the mean-value property gives E_cl itself
      const double cl = ecl(ps);
      require(std::abs(cl - tab) <= 1e-12 * std::max(1.0, std::abs(cl)), ErrorKind::singular_quadrature,
              std::string(name) + ": mollified kernel differs from the classical one outside the bump");
      continue;
    }
    const auto [hi, lo] = kernel_detail::polar_singular_mollify(ecl, D, ps);
    const double scale = std::max(1.0, std::abs(hi));
    require(std::abs(hi - lo) <= 1e-8 * scale, ErrorKind::singular_quadrature,
            "polar quadrature near the singularity of " + std::string(name) + " did not settle (" +
                std::to_string(std::abs(hi - lo)) + ")");
    require(std::abs(hi - tab) <= 1e-7 * scale, ErrorKind::singular_quadrature,
            std::string(name) + ": shell formula and singular quadrature disagree at r = " +
                std::to_string(frac) + " rho (" + std::to_string(tab) + " vs " + std::to_string(hi) + ")");
  }
}

}  // namespace solution_detail

/// Builds E_ρ for a catalog operator and verifies P(∂)E_ρ as an order-0 delta
/// against the C⁰ battery. Verification failure raises verification_failed.
inline FundamentalSolutionEntry fundamental_solution(std::string_view name, const ScaleLadder& ladder,
                                                     const Mollifier& psi, const QuadratureSpec& quad,
                                                     const FundamentalSolutionOptions& opt = {}) {
  const std::size_t d = catalog_dimension(name);
  const PDOperator P = pdo_catalog(name, opt.transport_speed);
  SmoothFamily E = mollified_kernel(name, ladder, psi, opt.transport_speed);
  if (name == "laplace_2d" || name == "laplace_3d") solution_detail::cross_check_shell(E, name, ladder, psi);

  // P(∂)E_ρ = δ_ρ vanishes outside the ball of radius ρ·width; checked, then used
  const double w = psi.width();
  SmoothFamily image = with_certified_support(
      apply_pdo(P, E).relabeled("P[" + E.label() + "]"), Point{},
      [ladder, w](std::size_t k) { return ladder.rho(k) * w; }, 1e-4);

  FundamentalSolutionEntry e{std::string(name), P, classical_kernel(name), solution_detail::singularity_of(name),
                             E, image, ApproxVerdict{}, false, solution_detail::note_of(name)};
  if (opt.verify) {
    QuadratureSpec q = quad;
    q.polar_centred = true;  // the image is compact about the origin; its kinks are not
    e.verdict = verify_delta(image, make_battery(d, Regularity::c0), q, opt.tol);
    e.verified = true;
    if (!e.verdict.pass) {
      std::string res;
      for (double r : e.verdict.residuals) res += " " + std::to_string(r);
      fail(ErrorKind::verification_failed, "P(d)E for " + std::string(name) +
                                               " is not an order-0 delta: residuals" + res + ", fitted order " +
                                               std::to_string(e.verdict.fitted_order) + ", worst member " +
                                               e.verdict.witness);
    }
  }
  return e;
}

// ---------------------------------------------------------------------------

/// max over the grid of |P(∂)u_ℓ − f_ℓ| at every level.
inline ApproxVerdict strong_check(const PDOperator& P, const SmoothFamily& u, const SmoothFamily& f, const Grid& grid,
                                  const CompareOptions& opt = {}) {
  return approx_ck(apply_pdo(P, u), f, 0, grid, opt);
}

/// max over the battery of |∫u_ℓ P(−∂)φ − ∫f_ℓ φ|; derivatives never touch u.
/// Members whose weak order is below P's order are skipped.
inline ApproxVerdict weak_residual(const PDOperator& P, const SmoothFamily& u, const SmoothFamily& f,
                                   const TestBattery& battery, const QuadratureSpec& quad, const Tolerance& tol = {}) {
  require(u.dim() == P.dimension() && f.dim() == P.dimension() && battery.dim == P.dimension(),
          ErrorKind::dimension_mismatch, "weak_residual: dimensions differ");
  const PDOperator Pstar = formal_adjoint(P);
  std::vector<SmoothFamily> adj, plain;
  std::vector<std::string> labels;
  for (const auto& m : battery.members) {
    if (m.weak_order < P.order()) continue;
    adj.push_back(apply_pdo(Pstar, weak_view(m)));
    plain.push_back(m.phi);
    labels.push_back(m.phi.label());
  }
  require(!adj.empty(), ErrorKind::battery_class_mismatch, "weak_residual: no battery member carries the operator");
  const auto pu = pair_many(u, adj, quad);
  const auto pf = pair_many(f, plain, quad);
  const std::size_t L = quad.levels;
  std::vector<double> res(L, 0.0), err(L, 0.0);
  std::vector<MemberResiduals> members;
  for (std::size_t m = 0; m < adj.size(); ++m) {
    MemberResiduals mr{labels[m], std::vector<double>(L), 0.0};
    for (std::size_t l = 0; l < L; ++l) {
      mr.residuals[l] = std::abs(pu[m][l].value - pf[m][l].value);
      res[l] = std::max(res[l], mr.residuals[l]);
      err[l] = std::max(err[l], pu[m][l].error + pf[m][l].error + pu[m][l].tail + pf[m][l].tail);
    }
    members.push_back(std::move(mr));
  }
  std::vector<double> rho;
  if (u.ladder())
    rho = u.ladder()->levels();
  else if (f.ladder())
    rho = f.ladder()->levels();
  else
    for (std::size_t l = 0; l < L; ++l) rho.push_back(quad.reference_scale(l));
  std::size_t worst = 0;
  for (std::size_t m = 0; m < members.size(); ++m) {
    members[m].fitted_order = fit_order(rho, members[m].residuals);
    if (members[m].residuals.back() > members[worst].residuals.back()) worst = m;
  }
  auto v = make_verdict(rho, std::move(res), std::move(err), tol, members[worst].label);
  v.members = std::move(members);
  return v;
}

// ---------------------------------------------------------------------------

struct SolveOptions {
  Tolerance tol{};
  double radius = 2.0;          // strong-check sampling ball
  int points_per_axis = 41;
  std::uint64_t seed = 0;
  double jitter = 0.0;
  bool weak = true;             // pairing a non-compact u over the battery hull is costly for d >= 2
  bool standard_part = true;
  bool timings = false;
  double transport_speed = 1.0;
  bool verify_entry = true;
};

struct SolveReport {
  std::string name;
  SmoothFamily u;
  std::optional<ApproxVerdict> weak_residuals;
  ApproxVerdict strong_residuals;
  std::optional<StandardFunctionSample> standard_part;
  std::optional<double> standard_part_strong_residual;  // max |P(∂)(st u) − st f| on the grid
  std::string standard_part_note;                       // why it is absent, when it is
  std::optional<ApproxVerdict> entry_verdict;
  std::map<std::string, double> timings;                // seconds; only filled on request
};

/// u = E_ρ ⋆ f with residual checks. f must have uniformly bounded support.
inline SolveReport solve_convolution(std::string_view name, const SmoothFamily& f, const ScaleLadder& ladder,
                                     const QuadratureSpec& quad, const SolveOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  auto lap = [&](SolveReport& r, const std::string& what) {
    if (!opt.timings) return;
    const auto t1 = clock::now();
    r.timings[what] = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
  };
  const std::size_t d = catalog_dimension(name);
  require(f.dim() == d, ErrorKind::dimension_mismatch, "solve: input dimension differs from the operator's");
  require(f.s_compact(), ErrorKind::support_violation,
          "solve: input '" + f.label() + "' must have uniformly bounded support");
  if (f.ladder()) require(*f.ladder() == ladder, ErrorKind::invalid_argument, "solve: input ladder differs");

  const Mollifier psi = make_mollifier(MollifierKind::bump, d);
  FundamentalSolutionOptions fo;
  fo.tol = opt.tol;
  fo.transport_speed = opt.transport_speed;
  fo.verify = opt.verify_entry;
  auto entry = fundamental_solution(name, ladder, psi, quad, fo);

  SolveReport r{std::string(name), convolve(entry.mollified, f, quad), std::nullopt, ApproxVerdict{}, std::nullopt,
                std::nullopt, {}, std::nullopt, {}};
  if (entry.verified) r.entry_verdict = entry.verdict;
  lap(r, "entry");

  const Grid grid = ball_grid(d, opt.radius, opt.points_per_axis, opt.seed, opt.jitter);
  CompareOptions co;
  co.tol = opt.tol;
  co.ladder = ladder;
  r.strong_residuals = strong_check(entry.op, r.u, f, grid, co);
  lap(r, "strong");

  if (opt.weak) {
    r.weak_residuals = weak_residual(entry.op, r.u, f, make_battery(d, Regularity::c0), quad, opt.tol);
    lap(r, "weak");
  }

  if (opt.standard_part) {
    try {
      StandardPartOptions so;
      so.interchange = false;
      auto sp = standard_part(r.u, grid, entry.op.order(), so);
      const auto sf = standard_part(f, grid, 0, so);
      double worst = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double pu = 0.0;
        for (const auto& [alpha, c] : entry.op.terms()) {
          if (alpha.order() == 0) {
            pu += c * sp.values[i];
            continue;
          }
          for (const auto& ds : sp.derivative_samples)
            if (ds.alpha == alpha) pu += c * ds.values[i];
        }
        worst = std::max(worst, std::abs(pu - sf.values[i]));
      }
      r.standard_part = std::move(sp);
      r.standard_part_strong_residual = worst;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::divergent_family) throw;
      r.standard_part_note = e.what();
    }
    lap(r, "standard_part");
  }
  return r;
}

}  // namespace gfc
