#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "errors.hpp"
#include "grid.hpp"
#include "twisted.hpp"

namespace twistlab {

/// eta = r + i t.
struct ComplexTime {
  double r = 0.0;
  double t = 0.0;

  std::complex<double> value() const { return {r, t}; }
  /// t reduced to [-pi, pi]; identical for t and t + 2 pi k whenever both
  /// reductions are exact.
  double reduced_t() const { return std::remainder(t, 2.0 * std::numbers::pi); }
  /// omega = e^{-2 eta}.
  std::complex<double> omega() const { return std::polar(std::exp(-2.0 * r), -2.0 * reduced_t()); }
  /// e^{-eta lambda} with the imaginary part taken from the reduced time.
  std::complex<double> multiplier(double lambda) const { return std::polar(std::exp(-r * lambda), -reduced_t() * lambda); }
};

/// K_eta(zeta) = (2 pi)^{-n} e^{-n eta} (1 - omega)^{-n} exp(-((1 + omega)/(1 - omega)) |zeta|^2 / 4).
inline cplx mehler_kernel(const ComplexTime& eta, std::span<const cplx> zeta) {
  const int n = static_cast<int>(zeta.size());
  const cplx w = eta.omega();
  const cplx one_minus = 1.0 - w;
  if (std::abs(one_minus) <= 1e-12) throw singular_time_error("mehler_kernel: |1 - omega| <= 1e-12");
  double r2 = 0.0;
  for (auto z : zeta) r2 += std::norm(z);
  const cplx pref = std::pow(2.0 * std::numbers::pi, -n) * eta.multiplier(n) * std::pow(one_minus, -n);
  return pref * std::exp(-(1.0 + w) / one_minus * (0.25 * r2));
}

/// Coefficient (mu, nu) times e^{-eta (2|nu| + n)}.
inline SpectralCoeffs evolve_spectral(SpectralCoeffs c, const ComplexTime& eta) {
  for (std::size_t i = 0; i < c.truncation.size(); ++i)
    c.coeffs(static_cast<Eigen::Index>(i)) *= eta.multiplier(c.truncation[i].eigenvalue());
  return c;
}

/// e^{-eta L} f as a twisted convolution with the Mehler kernel.
inline Field evolve_kernel(const Field& f, const ComplexTime& eta, ConvolutionPath path = ConvolutionPath::direct) {
  mehler_kernel(eta, std::vector<cplx>(f.grid.n, cplx(0.0)));  // rejects singular eta up front
  return twisted_convolve_with(f, [&](const std::vector<cplx>& z) { return mehler_kernel(eta, z); }, path);
}

/// e^{-i t L} u in coefficient space.
inline SpectralCoeffs propagate(const SpectralCoeffs& u, double t) { return evolve_spectral(u, ComplexTime{0.0, t}); }

/// e^{-i t L} u for a sampled field, through the truncation's coefficients.
inline Field propagate(const Field& u, double t, const SpectralBasis& basis) {
  return basis.inverse(propagate(basis.forward(u), t));
}

inline Field propagate(const Field& u, double t, const Truncation& tr) { return propagate(u, t, SpectralBasis(tr, u.grid)); }

}  // namespace twistlab
