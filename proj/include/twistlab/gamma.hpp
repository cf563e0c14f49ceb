#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace twistlab {

/// Complex Gamma function, Lanczos approximation (g = 7, 9 terms) with
/// reflection for Re z < 1/2. Relative accuracy about 1e-15 away from poles.
inline std::complex<double> complex_gamma(std::complex<double> z) {
  using cd = std::complex<double>;
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
  static constexpr std::array<double, 9> c{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                           771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                           -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  cd x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  cd t = z + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

/// 1 / Gamma(z), exactly zero at the poles z = 0, -1, -2, ...
inline std::complex<double> complex_rgamma(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) return 0.0;
  return 1.0 / complex_gamma(z);
}

}  // namespace twistlab
