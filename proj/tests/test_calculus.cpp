#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "support.hpp"

using namespace gfc;
using namespace gfc_test;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ScaleLadder kLadder = default_ladder();
const QuadratureSpec kQuad = QuadratureSpec::for_ladder(kLadder);
// GL8 on 8 cells per ρ leaves ~2e-9 on the bump mass; order 12 on the same cells for 1e-9 claims
const QuadratureSpec kFine = QuadratureSpec::for_ladder(kLadder, QuadRule::gauss_legendre, 12);

SmoothFamily delta1() { return model_delta(make_mollifier(MollifierKind::bump, 1), kLadder); }

}  // namespace

TEST_CASE("model delta pairs to one against the constant") {
  const auto p = pair(delta1(), constant_family(1, 1.0), kFine);
  REQUIRE(p.size() == kLadder.size());
  for (const auto& l : p) CHECK_THAT(l.value, WithinAbs(1.0, 1e-9));
}

TEST_CASE("model delta against cos converges at second order") {
  const auto delta = delta1();
  const auto p = pair(delta, cos_family(), kFine);
  // brute-force oracle: tanh-sinh over the support of δ_k
  boost::math::quadrature::tanh_sinh<double> ts;
  std::vector<double> res;
  for (std::size_t k = 0; k < kLadder.size(); ++k) {
    const double r = kLadder.rho(k);
    const double ref = ts.integrate([&](double x) { return eval1(delta, k, x) * std::cos(x); }, -r, r);
    CHECK_THAT(p[k].value, WithinAbs(ref, 1e-10));
    res.push_back(std::abs(p[k].value - 1.0));
  }
  CHECK(fit_order(kLadder.levels(), res) >= 1.9);
}

TEST_CASE("Dirichlet kernel against the quartic matches the reference integral") {
  const auto sinc = scaled_delta(make_mollifier(MollifierKind::sinc, 1), kLadder);
  const auto p = pair(sinc, quartic_family(), kQuad);
  for (std::size_t k = 0; k < kLadder.size(); ++k) CHECK_THAT(p[k].value, WithinAbs(kDirichletQuartic[k], 1e-10));
  // λ = 2^8
  CHECK(std::abs(p[4].value - 1.0) < 1.0 / 256.0);
}

TEST_CASE("pairing is linear") {
  const auto f = bump_family(1, 0.2, 1.3), g = cos_family();
  const auto phi = bump_family(1);
  const auto lhs = pair(linear_combination(2.5, f, -0.75, g), phi, kQuad);
  const auto pf = pair(f, phi, kQuad), pg = pair(g, phi, kQuad);
  for (std::size_t k = 0; k < kLadder.size(); ++k)
    CHECK_THAT(lhs[k].value, WithinAbs(2.5 * pf[k].value - 0.75 * pg[k].value, 1e-14));
}

TEST_CASE("refining the quadrature moves a pairing by less than its error estimate") {
  const auto delta = delta1();
  for (const auto& phi : {cos_family(), quartic_family(), bump_family(1, 0.5)}) {
    const auto a = pair(delta, phi, kQuad);
    const auto b = pair(delta, phi, kQuad.refined(2.0));
    for (std::size_t k = 0; k < kLadder.size(); ++k)
      CHECK(std::abs(a[k].value - b[k].value) <= std::max(a[k].error, 1e-15));
  }
}

TEST_CASE("quadrature below eight cells per feature is rejected") {
  auto q = kQuad;
  q.cells_per_unit = constant_level(4.0);
  CHECK_THROWS_MATCHES(q.validate_level(6), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::resolution_too_coarse;
                       }));
}

TEST_CASE("convolving a constant with a delta gives the constant") {
  const auto u = convolve(constant_family(1, 3.25), delta1(), kFine);
  for (std::size_t k : {0u, 3u, 6u})
    for (double x : {-1.7, 0.0, 0.4, 5.0}) CHECK_THAT(eval1(u, k, x), WithinAbs(3.25, 1e-9));
}

TEST_CASE("bump convolved with a symmetric model delta approaches the bump at second order") {
  const auto f = bump_family(1);
  const auto u = convolve(f, delta1(), kQuad);
  const Grid g = ball_grid(1, 1.2, 25);
  CompareOptions co;
  co.tol = {1e-4, 1.9};
  const auto v = approx_ck(u, f, 0, g, co);
  CHECK(v.pass);
  CHECK(v.fitted_order >= 1.9);
}

TEST_CASE("convolution commutes") {
  const auto f = bump_family(1, 0.3, 0.8), g = quartic_family();
  const auto a = convolve(f, g, kQuad), b = convolve(g, f, kQuad);
  for (std::size_t k : {0u, 6u})
    for (double x : {0.0, 0.45, -0.9}) CHECK_THAT(eval1(a, k, x), WithinAbs(eval1(b, k, x), 1e-9));
}

TEST_CASE("derivative of a convolution falls on the compact factor") {
  const auto f = bump_family(1, 0.1, 0.9), g = cos_family();
  const auto lhs = derivative(convolve(f, g, kQuad), MultiIndex{1});
  const auto rhs = convolve(derivative(f, MultiIndex{1}), g, kQuad);
  for (double x : {-0.6, 0.0, 0.35, 1.4}) {
    CHECK_THAT(eval1(lhs, 0, x), WithinAbs(eval1(rhs, 0, x), 1e-10));
    // ∫ f(y) cos(x - y) dy differentiated by hand
    boost::math::quadrature::tanh_sinh<double> ts;
    const double ref =
        ts.integrate([&](double y) { return -bump1((y - 0.1) / 0.9) * std::sin(x - y); }, -0.8, 1.0);
    CHECK_THAT(eval1(lhs, 0, x), WithinAbs(ref, 1e-10));
  }
}

TEST_CASE("derivative of the even model delta vanishes at the origin") {
  const auto d1 = derivative(delta1(), MultiIndex{1});
  for (std::size_t k = 0; k < kLadder.size(); ++k) CHECK(eval1(d1, k, 0.0) == 0.0);
}

TEST_CASE("second derivative of the Gaussian delta matches the closed form") {
  const auto g = scaled_delta(make_mollifier(MollifierKind::gaussian, 1), kLadder);
  const auto d2 = derivative(g, MultiIndex{2});
  double worst = 0.0;
  for (std::size_t k : {0u, 2u}) {
    const double r = kLadder.rho(k);
    for (int i = 0; i <= 600; ++i) {
      const double x = -3.0 + 0.01 * i;
      const double u = x / r;
      // ρ^{-1}(2π)^{-1/2} e^{-u²/2} differentiated twice in x
      const double ref = (u * u - 1.0) * std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * r * r * r);
      worst = std::max(worst, std::abs(eval1(d2, k, x) - ref) / std::max(1.0, std::abs(ref)));
    }
  }
  CHECK(worst <= 1e-8);

  const auto gs = gauss_family(1);
  const auto gs2 = derivative(gs, MultiIndex{2});
  for (int i = 0; i <= 600; ++i) {
    const double x = -3.0 + 0.01 * i;
    CHECK_THAT(eval1(gs2, 0, x), WithinAbs((4.0 * x * x - 2.0) * std::exp(-x * x), 1e-8));
  }
}

TEST_CASE("the zero multi-index returns the family itself") {
  const auto f = bump_family(2, 0.2, 1.0);
  const auto g = derivative(f, MultiIndex{0, 0});
  const std::array<double, 2> x{0.3, -0.1};
  CHECK(g(0, std::span<const double>(x)) == f(0, std::span<const double>(x)));
}

TEST_CASE("derivatives beyond the declared smoothness are refused") {
  CHECK_THROWS_AS(derivative(quartic_family(), MultiIndex{2}), Error);
  CHECK_THROWS_AS(apply_pdo(pdo_catalog("laplace_1d"), quartic_family()), Error);
}

TEST_CASE("d/dx of the smoothed Heaviside is the model delta") {
  const auto psi = make_mollifier(MollifierKind::bump, 1);
  const auto H = mollified_kernel("ddx_1d", kLadder, psi);
  const auto dH = apply_pdo(pdo_catalog("ddx_1d"), H);
  const auto delta = delta1();
  for (std::size_t k = 0; k < kLadder.size(); ++k) {
    const double r = kLadder.rho(k);
    for (int i = -30; i <= 30; ++i) {
      const double x = 1.1 * r * i / 30.0;
      CHECK_THAT(eval1(dH, k, x), WithinAbs(eval1(delta, k, x), 1e-8 * std::max(1.0, eval1(delta, k, 0.0))));
    }
  }
}

TEST_CASE("identity operator leaves the family unchanged") {
  const auto f = bump_family(1, 0.1, 0.7);
  const auto g = apply_pdo(PDOperator::identity(1), f);
  for (double x : {-0.5, 0.0, 0.33}) CHECK(eval1(g, 0, x) == eval1(f, 0, x));
}

TEST_CASE("Laplacian of a radial Gaussian") {
  for (std::size_t d : {2u, 3u}) {
    std::vector<std::pair<MultiIndex, double>> terms;
    for (std::size_t i = 0; i < d; ++i) terms.emplace_back(MultiIndex::unit(d, i, 2), 1.0);
    const auto lap = apply_pdo(PDOperator(d, terms), gauss_family(d));
    for (double r : {0.0, 0.3, 0.9, 1.7}) {
      std::array<double, 3> x{r * 0.6, r * 0.8, 0.0};
      // Δ e^{-r²} = (4r² - 2d) e^{-r²}
      const double ref = (4.0 * r * r - 2.0 * static_cast<double>(d)) * std::exp(-r * r);
      CHECK_THAT(lap(0, std::span<const double>(x.data(), d)), WithinAbs(ref, 1e-12));
    }
  }
}

TEST_CASE("formal adjoint") {
  const PDOperator dx(1, {{MultiIndex{1}, 1.0}});
  CHECK(formal_adjoint(dx) == PDOperator(1, {{MultiIndex{1}, -1.0}}));
  const auto lap = pdo_catalog("laplace_3d");
  CHECK(formal_adjoint(lap) == lap);
  const auto heat = pdo_catalog("heat_1p1");
  CHECK(formal_adjoint(formal_adjoint(heat)) == heat);
  CHECK(formal_adjoint(heat).coefficient(MultiIndex{1, 0}) == -1.0);
  CHECK(formal_adjoint(heat).coefficient(MultiIndex{0, 2}) == -1.0);
}

TEST_CASE("operator catalog") {
  const auto dx = pdo_catalog("ddx_1d");
  CHECK(dx.order() == 1);
  CHECK(dx.terms().size() == 1);
  CHECK(dx.coefficient(MultiIndex{1}) == 1.0);
  const auto heat = pdo_catalog("heat_1p1");
  CHECK(heat.order() == 2);
  CHECK(heat.coefficient(MultiIndex{1, 0}) == 1.0);
  CHECK(heat.coefficient(MultiIndex{0, 2}) == -1.0);
  const auto l2 = pdo_catalog("laplace_2d");
  CHECK(l2.terms().size() == 2);
  CHECK(l2.coefficient(MultiIndex{2, 0}) == 1.0);
  CHECK(l2.coefficient(MultiIndex{0, 2}) == 1.0);
  CHECK(pdo_catalog("transport_1p1", 2.5).coefficient(MultiIndex{0, 1}) == 2.5);
  CHECK_THROWS_AS(pdo_catalog("wave_1p1"), Error);
}

TEST_CASE("integration by parts against the 1-D battery") {
  // pair(P f, φ) = pair(f, P(-∂) φ), each member carrying derivatives up to its weak order
  const auto f = bump_family(1, 0.2, 1.3);
  const auto quad = QuadratureSpec::for_ladder(make_ladder(4, 6, 2.0));
  const std::vector<PDOperator> ops{
      PDOperator::identity(1), PDOperator(1, {{MultiIndex{1}, 1.0}}), PDOperator(1, {{MultiIndex{2}, 1.0}}),
      PDOperator(1, {{MultiIndex{0}, 0.5}, {MultiIndex{1}, -2.0}, {MultiIndex{2}, 1.5}})};
  const auto battery = make_battery(1, Regularity::c0);
  for (const auto& m : battery.members) {
    const SmoothFamily phi = weak_view(m);  // piecewise derivatives, breakpoints at the kinks
    for (const auto& P : ops) {
      if (P.order() > m.weak_order) continue;
      const auto lhs = pair(apply_pdo(P, f), phi, quad);
      const auto rhs = pair(f, apply_pdo(formal_adjoint(P), phi), quad);
      for (std::size_t k = 0; k < lhs.size(); ++k) {
        INFO(m.phi.label() << " " << P.to_string());
        CHECK(std::abs(lhs[k].value - rhs[k].value) <= 1e-8);
      }
    }
  }
}
