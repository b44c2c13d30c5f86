#include <catch_amalgamated.hpp>

#include <cmath>

#include "corpus.hpp"
#include "support.hpp"

using namespace gfc;
using namespace gfc_test;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ScaleLadder kLadder = default_ladder();
const QuadratureSpec kQuad = QuadratureSpec::for_ladder(kLadder);

SmoothFamily delta1(double width = 1.0) {
  return model_delta(Mollifier(MollifierKind::bump, 1, width), kLadder);
}

CompareOptions with_ladder() {
  CompareOptions co;
  co.ladder = kLadder;
  return co;
}

bool kind_is(ErrorKind k, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == k;
  }
  return false;
}

}  // namespace

TEST_CASE("approx_ck is reflexive") {
  const auto f = bump_family(1);
  const auto v = approx_ck(f, f, 2, 1.5, with_ladder());
  for (double r : v.residuals) CHECK(r == 0.0);
  CHECK(v.pass);
}

TEST_CASE("smoothing converges to the smoothed function in C0 at second order") {
  const auto v = bump_family(1);
  const auto f = convolve(v, delta1(), kQuad);
  const auto res = approx_ck(f, v, 0, 2.0);
  CHECK(res.pass);
  CHECK(res.fitted_order >= 1.9);
  // and in C2: derivatives move to the bump
  const auto res2 = approx_ck(f, v, 2, 2.0);
  CHECK(res2.pass);
  CHECK(res2.fitted_order >= 1.9);
}

TEST_CASE("the model delta is not C0-close to zero") {
  const auto v = approx_ck(delta1(), zero_family(1), 0, 1.0);
  CHECK_FALSE(v.pass);
  CHECK_THAT(v.fitted_order, WithinAbs(-1.0, 1e-9));
}

TEST_CASE("approx_ck refuses orders beyond the smoothness") {
  CHECK(kind_is(ErrorKind::smoothness_exceeded,
                [] { approx_ck(quartic_family(), zero_family(1), 2, 1.0, with_ladder()); }));
}

TEST_CASE("ball grid with jitter is reproducible") {
  const auto a = ball_grid(2, 1.0, 11, 7, 0.3), b = ball_grid(2, 1.0, 11, 7, 0.3), c = ball_grid(2, 1.0, 11, 8, 0.3);
  CHECK(a.coords == b.coords);
  CHECK(a.coords != c.coords);
  for (std::size_t i = 0; i < ball_grid(3, 2.0, 9).size(); ++i) {
    auto p = ball_grid(3, 2.0, 9).point(i);
    CHECK(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= 4.0 + 1e-9);
  }
}

TEST_CASE("model deltas of different widths are D'-equivalent") {
  const auto b = make_battery(1, Regularity::cinf);
  const auto v = approx_dprime(delta1(1.0), delta1(0.5), b, kQuad);
  CHECK(v.pass);
  // each side against φ(0) independently
  for (double w : {1.0, 0.5}) CHECK(verify_delta(delta1(w), b, kQuad).pass);
}

TEST_CASE("the model delta is not D'-equivalent to zero") {
  const auto b = make_battery(1, Regularity::cinf);
  const auto v = approx_dprime(delta1(), zero_family(1), b, kQuad);
  CHECK_FALSE(v.pass);
  double peak = 0.0;
  for (const auto& m : b.members) peak = std::max(peak, std::abs(m.value_at_origin));
  CHECK_THAT(peak, WithinAbs(1.0, 1e-12));
  CHECK_THAT(v.finest(), WithinAbs(peak, 1e-6));
}

TEST_CASE("approx_dprime is reflexive") {
  const auto b = make_battery(1, Regularity::cinf);
  const auto f = convolve(bump_family(1), delta1(), kQuad);
  const auto v = approx_dprime(f, f, b, kQuad);
  for (double r : v.residuals) CHECK(r == 0.0);
  CHECK(v.pass);
}

TEST_CASE("delta families against their batteries") {
  const auto c0 = make_battery(1, Regularity::c0);
  const auto bump = verify_delta(delta1(), c0, kQuad);
  CHECK(bump.pass);
  const auto gauss = verify_delta(scaled_delta(make_mollifier(MollifierKind::gaussian, 1), kLadder), c0, kQuad);
  CHECK(gauss.pass);
  CHECK(gauss.fitted_order >= 0.9);

  const auto sinc = scaled_delta(make_mollifier(MollifierKind::sinc, 1), kLadder);
  const auto v = verify_delta(sinc, make_battery(1, Regularity::c1), kQuad);
  CHECK(v.pass);
  CHECK(v.fitted_order >= 0.8);
  CHECK(kind_is(ErrorKind::battery_class_mismatch, [&] { verify_delta(sinc, c0, kQuad); }));
}

TEST_CASE("Dirichlet kernel residual against the quartic member matches the reference") {
  // quartic_r1 is (1 - x²)² on [-1, 1]
  const auto b = make_battery(1, Regularity::c1);
  const auto sinc = scaled_delta(make_mollifier(MollifierKind::sinc, 1), kLadder);
  const auto v = verify_delta(sinc, b, kQuad);
  const MemberResiduals* q = nullptr;
  for (const auto& m : v.members)
    if (m.label == "quartic_r1") q = &m;
  REQUIRE(q != nullptr);
  for (std::size_t k = 0; k < kLadder.size(); ++k)
    CHECK_THAT(q->residuals[k], WithinAbs(std::abs(kDirichletQuartic[k] - 1.0), 1e-10));
}

TEST_CASE("D' membership") {
  const auto b = make_battery(1, Regularity::cinf);
  CHECK(dprime_membership(delta1(), b, kQuad).pass);
  CHECK(dprime_membership(bump_family(1, 0.3, 0.6), b, kQuad, kLadder).pass);
  const auto grow = level_scaled(bump_family(1, 0.0, 0.5), kLadder, [](double r) { return 1.0 / r; }, "bump/rho");
  const auto v = dprime_membership(grow, b, kQuad);
  CHECK_FALSE(v.pass);
  CHECK_THAT(v.worst_slope, WithinAbs(1.0, 1e-9));
}

TEST_CASE("derivatives of D' members stay in D'") {
  const auto b = make_battery(1, Regularity::cinf);
  for (const auto& f : {delta1(), convolve(bump_family(1), delta1(), kQuad)}) {
    REQUIRE(dprime_membership(f, b, kQuad).pass);
    for (int order : {1, 2}) CHECK(dprime_membership_derivative(f, MultiIndex{order}, b, kQuad).pass);
  }
  // the pairing identity behind it, at one level: ∫ δ' φ = -φ'(0)
  const auto d1 = dprime_membership_derivative(delta1(), MultiIndex{1}, b, kQuad);
  for (std::size_t m = 0; m < b.members.size(); ++m) {
    const double x0 = 0.0;
    const double dphi0 = b.members[m].phi.partial(0, std::span<const double>(&x0, 1), MultiIndex{1});
    CHECK_THAT(d1.pairings[m].residuals.back(), WithinAbs(std::abs(dphi0), 1e-4));
  }
}

TEST_CASE("standard part of a smoothed bump is the bump") {
  const auto v = bump_family(1);
  const auto f = convolve(v, delta1(), kQuad);
  const Grid g = ball_grid(1, 1.5, 31);
  const auto s = standard_part(f, g, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(s.values[i] - v(0, g.point(i))));
  CHECK(worst <= s.cauchy_gap);
  CHECK(s.cauchy_gap < 1e-5);
  REQUIRE(s.interchange.size() == 1);
  CHECK(s.interchange[0].pass);
}

TEST_CASE("standard part of a constant") {
  const auto s = standard_part(constant_family(2, -0.5), ball_grid(2, 1.0, 5), 1, {0.1, 1e-3, false});
  for (double x : s.values) CHECK(x == -0.5);
  CHECK(s.cauchy_gap == 0.0);
}

TEST_CASE("standard part of the model delta diverges") {
  const Grid g = points_grid(1, {{0.0}});
  CHECK(kind_is(ErrorKind::divergent_family, [&] { standard_part(delta1(), g, 0); }));
}

TEST_CASE("derivative interchange for analytic families") {
  for (std::size_t d : {1u, 2u}) {
    const auto f = make_input("analytic", d, {}, kLadder);
    const auto s = standard_part(f, ball_grid(d, 1.0, d == 1 ? 21 : 9), 1);
    REQUIRE(s.interchange.size() == d);
    for (const auto& ic : s.interchange) {
      CHECK(ic.pass);
      CHECK(ic.max_gap <= 1e-5);
    }
  }
}

TEST_CASE("modulus of a Lipschitz profile") {
  StandardOptions o;
  o.label = "sin";
  const auto f = standard_family(1, Sin{}, o);
  const std::vector<double> radii{0.5, 0.25, 0.125, 0.0625, 0.03125};
  const auto t = s_modulus(f, ball_grid(1, 2.0, 17), radii);
  for (std::size_t i = 0; i < radii.size(); ++i) CHECK(t.modulus.back()[i] <= radii[i] + 1e-15);
  CHECK_THAT(t.verdict.fitted_order, WithinAbs(1.0, 0.05));
}

TEST_CASE("the model delta is not S-continuous") {
  const auto t = s_modulus(delta1(), points_grid(1, {{0.0}}), kLadder.levels());
  std::vector<double> diag;
  for (std::size_t l = 0; l < kLadder.size(); ++l) diag.push_back(t.modulus[l][l]);
  CHECK_THAT(fit_order(kLadder.levels(), diag), WithinAbs(-1.0, 1e-6));
}

TEST_CASE("a family with bounded gradient is S-continuous") {
  const auto f = make_input("analytic", 1, {}, kLadder);
  const std::vector<double> radii{0.1, 0.01, 0.001, 1e-4};
  const auto t = s_modulus(f, ball_grid(1, 1.5, 13), radii);
  for (const auto& row : t.modulus)
    for (std::size_t i = 0; i < radii.size(); ++i) CHECK(row[i] <= 4.0 * radii[i]);
  CHECK(t.verdict.pass);
}

TEST_CASE("consistency: C0-close and D'-close to zero forces C0-close to zero") {
  const auto b = make_battery(1, Regularity::cinf);
  const auto corpus = consistency_corpus(kLadder, kQuad);
  REQUIRE(corpus.size() == 10);
  for (const auto& e : corpus) {
    INFO(e.name);
    const bool c0 = approx_ck(e.f, e.candidate, 0, 2.0, with_ladder()).pass;
    const bool dp = approx_dprime(e.f, zero_family(1), b, kQuad).pass;
    const bool concl = approx_ck(e.f, zero_family(1), 0, 2.0, with_ladder()).pass;
    CHECK((c0 && dp) == e.member);
    if (c0 && dp) CHECK(concl);
    if (!e.member) CHECK_FALSE(concl);
  }
}

TEST_CASE("C0-close families are D' members") {
  const auto b = make_battery(1, Regularity::cinf);
  for (const auto& e : consistency_corpus(kLadder, kQuad)) {
    if (!approx_ck(e.f, e.candidate, 0, 2.0, with_ladder()).pass) continue;
    INFO(e.name);
    CHECK(dprime_membership(e.f, b, kQuad, kLadder).pass);
  }
}

TEST_CASE("a D' limit is unique on the grid") {
  const auto b = make_battery(1, Regularity::cinf);
  const auto v = bump_family(1);
  const auto f = convolve(v, delta1(), kQuad);
  const std::vector<SmoothFamily> candidates{v, linear_combination(1.0, v, 1e-4, quartic_family()),
                                             linear_combination(1.0, v, 0.05, bump_family(1, 0.5, 0.5)), cos_family()};
  std::vector<std::size_t> passing;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (approx_dprime(f, candidates[i], b, kQuad).pass) passing.push_back(i);
  REQUIRE_FALSE(passing.empty());
  CHECK(passing.front() == 0);
  const Grid g = ball_grid(1, 1.5, 31);
  for (std::size_t i : passing)
    for (std::size_t j : passing)
      for (std::size_t p = 0; p < g.size(); ++p)
        CHECK(std::abs(candidates[i](kLadder.size() - 1, g.point(p)) - candidates[j](kLadder.size() - 1, g.point(p))) <=
              2e-3);
}
