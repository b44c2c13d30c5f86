// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "corpus.hpp"
#include "support.hpp"

using namespace gfc;
using namespace gfc_test;

namespace {

const ScaleLadder kLadder = default_ladder();
const QuadratureSpec kQuad = QuadratureSpec::for_ladder(kLadder);

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

int failures = 0;

// budget <= 0 means no runtime bound
void run(int id, const char* title, double budget, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget <= 0.0 || secs < budget;
  const bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("%s %2d %s: %s; %.1f s", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  if (budget > 0.0) std::printf(" (budget %.0f s)", budget);
  std::printf("\n");
  std::fflush(stdout);
}

Mollifier bump_psi(std::size_t d) { return make_mollifier(MollifierKind::bump, d); }

SolveReport solve_1d(const char* name) {
  return solve_convolution(name, make_input("bump", 1, {}, kLadder), kLadder, kQuad);
}

double oracle_gap(const SolveReport& r, double (*oracle)(double)) {
  const Grid& g = r.standard_part->grid;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(r.standard_part->values[i] - oracle(g.point(i)[0])));
  return worst;
}

}  // namespace

int main() {
  run(1, "model delta against cos", 5.0, [] {
    const auto p = pair(model_delta(bump_psi(1), kLadder), cos_family(), kQuad);
    std::vector<double> res;
    for (const auto& l : p) res.push_back(std::abs(l.value - 1.0));
    const double order = fit_order(kLadder.levels(), res);
    return Outcome{res.back() <= 1e-4 && order >= 1.9, fmt("finest %.2e, order %.3f", res.back(), order)};
  });

  run(2, "Gaussian delta on the C0 battery", 10.0, [] {
    const auto v = verify_delta(scaled_delta(make_mollifier(MollifierKind::gaussian, 1), kLadder),
                                make_battery(1, Regularity::c0), kQuad);
    return Outcome{v.pass && v.finest() <= 1e-3, fmt("finest %.2e, order %.3f", v.finest(), v.fitted_order)};
  });

  run(3, "Dirichlet kernel on the C1 battery", 30.0, [] {
    const auto v = verify_delta(scaled_delta(make_mollifier(MollifierKind::sinc, 1), kLadder),
                                make_battery(1, Regularity::c1), kQuad);
    return Outcome{v.pass && v.fitted_order >= 0.8,
                   fmt("finest %.2e, order %.3f, lambda up to %g", v.finest(), v.fitted_order, 1.0 / kLadder.rho(6))};
  });

  run(4, "fundamental solutions", 60.0, [] {
    bool ok = true;
    std::string d;
    double smooth_order = kInf;
    for (const auto& name : catalog_names()) {
      const auto e = fundamental_solution(name, kLadder, bump_psi(catalog_dimension(name)), kQuad);
      ok = ok && e.verified && e.verdict.pass;
      d += fmt("%s %.1e/%.2f ", name.c_str(), e.verdict.finest(), e.verdict.fitted_order);
      if (name == "laplace_1d") {
        const auto b = make_battery(1, Regularity::c0);
        for (std::size_t m = 0; m < b.members.size(); ++m)
          if (b.members[m].regularity != Regularity::c0)
            smooth_order = std::min(smooth_order, order_above_floor(kLadder.levels(), e.verdict.members[m].residuals));
      }
    }
    ok = ok && smooth_order >= 1.9;
    return Outcome{ok, d + fmt("; laplace_1d smooth members %.3f", smooth_order)};
  });

  std::optional<SolveReport> ddx, lap;
  run(5, "convolution solves", 120.0, [&] {
    ddx = solve_1d("ddx_1d");
    lap = solve_1d("laplace_1d");
    bool ok = true;
    std::string d;
    for (auto [name, r, oracle] : {std::tuple{"ddx_1d", &*ddx, &antiderivative_oracle},
                                   std::tuple{"laplace_1d", &*lap, &laplace_oracle}}) {
      const auto& s = r->strong_residuals;
      const double gap = oracle_gap(*r, oracle);
      ok = ok && s.pass && s.finest() <= 1e-3 && s.fitted_order >= 0.9 && gap <= 1e-3;
      d += fmt("%s strong %.1e/%.2f oracle %.1e ", name, s.finest(), s.fitted_order, gap);
    }
    return Outcome{ok, d};
  });

  run(6, "weak residuals of the solves", 0.0, [&] {
    if (!ddx || !lap) return Outcome{false, "solves did not complete"};
    bool ok = true;
    std::string d;
    for (auto [name, r] : {std::pair{"ddx_1d", &*ddx}, std::pair{"laplace_1d", &*lap}}) {
      if (!r->weak_residuals) return Outcome{false, "no weak residuals"};
      const auto& w = *r->weak_residuals;
      ok = ok && w.pass && w.fitted_order >= r->strong_residuals.fitted_order - 0.2;
      d += fmt("%s weak %.2f strong %.2f ", name, w.fitted_order, r->strong_residuals.fitted_order);
    }
    return Outcome{ok, d};
  });

  run(7, "consistency corpus", 0.0, [] {
    const auto b = make_battery(1, Regularity::cinf);
    CompareOptions co;
    co.ladder = kLadder;
    int agree = 0, total = 0;
    std::string wrong;
    for (const auto& e : consistency_corpus(kLadder, kQuad)) {
      ++total;
      const bool c0 = approx_ck(e.f, e.candidate, 0, 2.0, co).pass;
      const bool dp = approx_dprime(e.f, zero_family(1), b, kQuad).pass;
      const bool concl = approx_ck(e.f, zero_family(1), 0, 2.0, co).pass;
      if ((c0 && dp) == e.member && concl == e.member)
        ++agree;
      else
        wrong += " " + e.name;
    }
    return Outcome{agree == total, fmt("%d/%d agree", agree, total) + wrong};
  });

  run(8, "standard part and derivative interchange", 0.0, [] {
    double gap = 0.0;
    bool ok = true;
    for (std::size_t d : {1u, 2u}) {
      const auto s = standard_part(make_input("analytic", d, {}, kLadder), ball_grid(d, 1.0, d == 1 ? 21 : 9), 1);
      ok = ok && s.interchange.size() == d;
      for (const auto& ic : s.interchange) gap = std::max(gap, ic.max_gap);
    }
    return Outcome{ok && gap <= 1e-5, fmt("max gap %.2e", gap)};
  });

  run(9, "Fourier inversion", 60.0, [] {
    FourierOptions fo;
    fo.points = {0.0};
    const auto t = fourier_inversion_demo(make_input("quartic", 1, {}, kLadder), kLadder, fo);
    double gap = 0.0;
    for (const auto& r : t.rows) gap = std::max(gap, r.path_gap);
    return Outcome{gap <= 1e-6 && t.verdict.fitted_order >= 0.8,
                   fmt("path gap %.2e, order %.3f", gap, t.verdict.fitted_order)};
  });

  run(10, "integration by parts", 0.0, [] {
    const auto f = bump_family(1, 0.2, 1.3);
    const auto quad = QuadratureSpec::for_ladder(make_ladder(4, 6, 2.0));
    const std::vector<PDOperator> ops{
        PDOperator::identity(1), PDOperator(1, {{MultiIndex{1}, 1.0}}), PDOperator(1, {{MultiIndex{2}, 1.0}}),
        PDOperator(1, {{MultiIndex{0}, 0.5}, {MultiIndex{1}, -2.0}, {MultiIndex{2}, 1.5}})};
    double worst = 0.0;
    int checked = 0;
    for (const auto& m : make_battery(1, Regularity::c0).members) {
      const SmoothFamily phi = weak_view(m);
      for (const auto& P : ops) {
        if (P.order() > m.weak_order) continue;
        const auto lhs = pair(apply_pdo(P, f), phi, quad);
        const auto rhs = pair(f, apply_pdo(formal_adjoint(P), phi), quad);
        for (std::size_t k = 0; k < lhs.size(); ++k) worst = std::max(worst, std::abs(lhs[k].value - rhs[k].value));
        ++checked;
      }
    }
    return Outcome{worst <= 1e-8, fmt("%d member/operator pairs, worst gap %.2e", checked, worst)};
  });

  return failures;
}
