#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "gamma.hpp"
#include "semigroup.hpp"

namespace twistlab {

struct ProbeConfig {
  std::complex<double> z{-0.5, 0.0};
  double tau = 1e-4;
  long long k_cut = 0;  // 0: cutoff with e^{-tau k_cut} < 1e-16, below double resolution of the sum
  std::vector<double> t_samples;

  long long cutoff() const {
    return k_cut > 0 ? k_cut : static_cast<long long>(std::ceil(std::log(1e16) / tau)) + 1;
  }
  void validate() const {
    if (!(z.real() > -1.0 && z.real() <= 0.0)) throw std::invalid_argument("ProbeConfig: Re z must lie in (-1, 0]");
    if (!(tau > 0.0)) throw std::invalid_argument("ProbeConfig: tau must be positive");
    if (!(std::exp(-tau * static_cast<double>(cutoff())) < 1e-10))
      throw std::invalid_argument("ProbeConfig: k_cut too small, e^{-tau k_cut} >= 1e-10");
    for (double t : t_samples)
      if (t == 0.0) throw std::invalid_argument("ProbeConfig: t samples must avoid 0");
  }
};

/// sum_{k=1}^{k_cut} k^z e^{-(tau + i t) k}, ascending k, compensated summation.
/// The k = 0 term is dropped (0_+^z = 0).
inline std::complex<double> abel_sum(const ProbeConfig& cfg, double t) {
  cfg.validate();
  const long long K = cfg.cutoff();
  double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0;
  auto kahan = [](double& s, double& c, double x) {
    double y = x - c;
    double u = s + y;
    c = (u - s) - y;
    s = u;
  };
  for (long long k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    const double lk = std::log(kd);
    // k^z e^{-(tau + it) k} = exp(Re z log k - tau k) * e^{i (Im z log k - t k)}
    const double mag = std::exp(cfg.z.real() * lk - cfg.tau * kd);
    const double ang = cfg.z.imag() * lk - std::fmod(t * kd, 2.0 * std::numbers::pi);
    kahan(sr, cr, mag * std::cos(ang));
    kahan(si, ci, mag * std::sin(ang));
  }
  return {sr, si};
}

/// Gamma(z + 1) (tau + i t)^{-z-1}, principal branch.
inline std::complex<double> singular_term(std::complex<double> z, double t, double tau) {
  if (tau == 0.0 && t == 0.0) throw std::domain_error("singular_term: (tau, t) = (0, 0) is branch-ambiguous");
  if (tau < 0.0) throw std::invalid_argument("singular_term: tau must be >= 0");
  return complex_gamma(z + 1.0) * std::pow(std::complex<double>(tau, t), -z - 1.0);
}

struct RemainderSample {
  double t;
  std::complex<double> abel;
  std::complex<double> singular;
  std::complex<double> remainder;
};

struct RemainderProfile {
  std::vector<RemainderSample> samples;
  double sup_abs = 0.0;
  /// max |second divided difference| of the remainder over consecutive samples.
  double max_second_difference = 0.0;
};

inline RemainderProfile remainder_profile(const ProbeConfig& cfg) {
  cfg.validate();
  RemainderProfile out;
  for (double t : cfg.t_samples) {
    auto a = abel_sum(cfg, t);
    auto s = singular_term(cfg.z, t, cfg.tau);
    out.samples.push_back({t, a, s, a - s});
    out.sup_abs = std::max(out.sup_abs, std::abs(a - s));
  }
  const auto& v = out.samples;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double h1 = v[i].t - v[i - 1].t, h2 = v[i + 1].t - v[i].t;
    auto dd = 2.0 * ((v[i + 1].remainder - v[i].remainder) / h2 - (v[i].remainder - v[i - 1].remainder) / h1) / (h1 + h2);
    out.max_second_difference = std::max(out.max_second_difference, std::abs(dd));
  }
  return out;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need matching samples");
  double mx = 0, my = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / m;
    my += std::log(y[i]) / m;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// |H(u, w, t)| with H = t^{-z-1} sum_k e^{-it(2k+n)} phi_k(u - w), the series
/// summed in closed form as (2 pi)^n K_{tau + it}(u - w).
inline double h_kernel_modulus(std::complex<double> z, std::span<const cplx> u, std::span<const cplx> w, double t,
                               double tau = 1e-8) {
  if (u.size() != w.size()) throw dimension_error("h_kernel_rate: points of different dimension");
  std::vector<cplx> d(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) d[j] = u[j] - w[j];
  const double n = static_cast<double>(u.size());
  const cplx k = std::pow(2.0 * std::numbers::pi, n) * mehler_kernel(ComplexTime{tau, t}, d);
  return std::abs(std::pow(cplx(t), -z - 1.0) * k);
}

/// Fitted log-log slope of |H| against t over t_samples in (0, 0.5].
inline double h_kernel_rate(std::complex<double> z, std::span<const cplx> u, std::span<const cplx> w,
                            std::span<const double> t_samples, double tau = 1e-8) {
  if (t_samples.size() < 4) throw std::invalid_argument("h_kernel_rate: degenerate fit, fewer than 4 samples");
  std::vector<double> mod;
  for (double t : t_samples) {
    if (!(t > 0.0 && t <= 0.5)) throw std::invalid_argument("h_kernel_rate: t samples must lie in (0, 0.5]");
    mod.push_back(h_kernel_modulus(z, u, w, t, tau));
  }
  return loglog_slope(t_samples, mod);
}

/// Geometrically spaced samples over [lo, hi].
inline std::vector<double> geometric_samples(double lo, double hi, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = lo * std::pow(hi / lo, count == 1 ? 0.0 : double(i) / (count - 1));
  return t;
}

}  // namespace twistlab
