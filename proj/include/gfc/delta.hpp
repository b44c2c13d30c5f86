#pragma once

#include <cmath>
#include <span>
#include <string>

#include "gfc/mollifier.hpp"
#include "gfc/scale_ladder.hpp"
#include "gfc/smooth_family.hpp"

namespace gfc {

/// x ↦ ρ^{-d} ψ(x/ρ), the profile shared by every delta family.
struct DilatedProfile {
  Mollifier psi;
  double rho;
  double amplitude;  // ρ^{-d}

  DilatedProfile(Mollifier m, double r)
      : psi(std::move(m)), rho(r), amplitude(std::pow(r, -static_cast<double>(psi.dimension()))) {}

  template <class T>
  T operator()(std::span<const T> x) const {
    std::array<T, kMaxDim> y{};
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / rho;
    return amplitude * psi(std::span<const T>(y.data(), x.size()));
  }
};

namespace detail {

inline SmoothFamily dilated_family(const Mollifier& psi, const ScaleLadder& ladder, std::string label) {
  FamilyParts p;
  p.dim = psi.dimension();
  p.ladder = ladder;
  p.eval = analytic_evaluator([psi, ladder](std::size_t k) { return DilatedProfile(psi, ladder.rho(k)); });
  const double reach = psi.support_radius();
  p.support_radius = [ladder, reach](std::size_t k) { return ladder.rho(k) * reach; };
  p.label = std::move(label);
  const double w = psi.width();
  switch (psi.kind()) {
    case MollifierKind::bump:
      p.features.push_back({Point{}, [ladder, w](std::size_t k) { return ladder.rho(k) * w; }, false});
      break;
    case MollifierKind::gaussian:
      p.features.push_back({Point{}, [ladder, w](std::size_t k) { return 3.0 * ladder.rho(k) * w; }, false});
      break;
    case MollifierKind::sinc:
      p.features.push_back({Point{}, [ladder, w](std::size_t k) { return ladder.rho(k) * w; }, true});
      break;
  }
  p.radial = true;
  const double d = static_cast<double>(psi.dimension());
  p.envelope = [psi, ladder, d](std::size_t k, double r) {
    const double rho = ladder.rho(k);
    return std::pow(rho, -d) * psi.envelope(r / rho);
  };
  return SmoothFamily(std::move(p));
}

}  // namespace detail

/// Model delta family δ_k(x) = ρ_k^{-d} ψ(x/ρ_k) for a compactly supported bump ψ.
inline SmoothFamily model_delta(const Mollifier& psi, const ScaleLadder& ladder) {
  require(psi.kind() == MollifierKind::bump, ErrorKind::invalid_argument,
          "model_delta needs a compactly supported profile; use scaled_delta for gaussian or sinc");
  auto f = detail::dilated_family(psi, ladder, "model_delta(bump,d=" + std::to_string(psi.dimension()) + ")");
  FamilyParts p = f.parts();
  p.tags.insert("model-delta");
  p.tags.insert("order-0-candidate");
  return SmoothFamily(std::move(p));
}

/// Same scaling law for non-compact profiles: the Gaussian (order-0 candidate)
/// and the 1-D Dirichlet kernel sin(λx)/(πx), λ_k = 1/ρ_k (C¹-delta candidate).
inline SmoothFamily scaled_delta(const Mollifier& psi, const ScaleLadder& ladder) {
  require(psi.kind() != MollifierKind::bump, ErrorKind::invalid_argument,
          "scaled_delta is for gaussian or sinc profiles; use model_delta for the bump");
  auto f = detail::dilated_family(psi, ladder,
                                  "scaled_delta(" + std::string(to_string(psi.kind())) + ",d=" +
                                      std::to_string(psi.dimension()) + ")");
  FamilyParts p = f.parts();
  p.tags.insert(psi.kind() == MollifierKind::gaussian ? "order-0-candidate" : "c1-delta-candidate");
  return SmoothFamily(std::move(p));
}

}  // namespace gfc
