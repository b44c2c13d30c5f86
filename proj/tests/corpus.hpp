#pragma once

// Families for the consistency theorem: members are C0-close to a standard
// function and D'-close to 0; controls break one of the two hypotheses.

#include <string>
#include <vector>

#include "support.hpp"

namespace gfc_test {

// sin(x/ρ)·bump(x): pairs to 0 against smooth φ, but has no C0 limit
struct OscBump {
  double rho = 1.0;
  template <class T>
  T operator()(std::span<const T> x) const {
    const T s = x[0] * x[0];
    if (primal(s) >= 1.0) return lift<T>(0.0);
    return sin(x[0] * (1.0 / rho)) * exp(lift<T>(-1.0) / (lift<T>(1.0) - s));
  }
};

struct Sin {
  template <class T>
  T operator()(std::span<const T> x) const {
    return sin(x[0]);
  }
};

struct CorpusEntry {
  std::string name;
  SmoothFamily f;
  SmoothFamily candidate;  // standard g for the C0 hypothesis
  bool member = true;      // both hypotheses hold by construction
};

inline std::vector<CorpusEntry> consistency_corpus(const ScaleLadder& L, const QuadratureSpec& quad) {
  const auto bump = bump_family(1);
  const auto zero = zero_family(1);
  const auto delta = model_delta(make_mollifier(MollifierKind::bump, 1), L);
  StandardOptions so;
  so.label = "sin";
  const auto sinf = standard_family(1, Sin{}, so);
  auto scaled = [&](const SmoothFamily& f, double p, const std::string& label) {
    return level_scaled(f, L, [p](double r) { return std::pow(r, p); }, label);
  };

  FamilyParts osc;
  osc.dim = 1;
  osc.ladder = L;
  osc.eval = analytic_evaluator([L](std::size_t k) { return OscBump{L.rho(k)}; });
  osc.support_radius = constant_level(1.0);
  osc.breakpoints = {{-1.0, 1.0}};
  osc.features.push_back({Point{}, [L](std::size_t k) { return L.rho(k); }, true});
  osc.label = "sin(x/rho)*bump";

  std::vector<CorpusEntry> c;
  c.push_back({"rho*bump", scaled(bump, 1.0, "rho*bump"), zero, true});
  c.push_back({"rho^2*bump", scaled(bump, 2.0, "rho^2*bump"), zero, true});
  c.push_back({"rho*sin", scaled(sinf, 1.0, "rho*sin"), zero, true});
  c.push_back({"rho^1.5*delta*bump", scaled(convolve(bump, delta, quad), 1.5, "rho^1.5*(bump*delta)"), zero, true});
  c.push_back({"bump*delta-bump", convolve(bump, delta, quad) - bump, zero, true});
  c.push_back({"zero", zero, zero, true});
  c.push_back({"sin(x/rho)*bump", SmoothFamily(osc), zero, false});
  c.push_back({"model_delta", delta, zero, false});
  c.push_back({"bump/rho", scaled(bump, -1.0, "bump/rho"), zero, false});
  c.push_back({"bump", bump, bump, false});
  return c;
}

}  // namespace gfc_test
