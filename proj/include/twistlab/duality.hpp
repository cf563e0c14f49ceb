#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "grid.hpp"
#include "schatten.hpp"
#include "semigroup.hpp"
#include "strichartz.hpp"

namespace twistlab {

/// Complex Gaussian noise at every (time, space) node, smoothed per time
/// slice by e^{-smoothing L} (kernel path), then scaled to unit L^2_{t,z}.
inline TimeField random_weight(const TimeGrid& tg, const GridSpec& grid, std::uint64_t seed, double smoothing = 0.2) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  TimeField W = TimeField::zeros(tg, grid);
  for (int j = 0; j < tg.count; ++j) {
    Field noise = Field::zeros(grid);
    for (Eigen::Index i = 0; i < noise.values.size(); ++i) noise.values(i) = {gauss(rng), gauss(rng)};
    W.values.col(j) = evolve_kernel(noise, ComplexTime{smoothing, 0.0}, ConvolutionPath::phase_factored).values;
  }
  const double nrm = mixed_norm(W, 2.0, 2.0, TimeMeasure::normalized);
  if (nrm > 0.0) W.values /= nrm;
  return W;
}

/// Exponents of the two equivalent forms:
///   ||W A A^* conj W||_{G^alpha} <= C ||W||^2 in L_t^{2q/(2-q)} L_z^{2p/(2-p)},
///   ||sum n_j |A f_j|^2|| in L_t^{q'/2} L_z^{p'/2} <= C' ||n||_{alpha'}.
/// p, q in (1, 2); alpha = 1 pairs with alpha' = inf.
struct DualityExponents {
  double p = 4.0 / 3.0;
  double q = 4.0 / 3.0;
  double alpha = 4.0;

  /// Diagonal endpoint p = q = 2(n+1)/(n+2), alpha = 2(n+1).
  static DualityExponents diagonal(int n) {
    const double pq = 2.0 * (n + 1) / (n + 2.0);
    return {pq, pq, 2.0 * (n + 1)};
  }
  double weight_time() const { return 2.0 * q / (2.0 - q); }
  double weight_space() const { return 2.0 * p / (2.0 - p); }
  double density_time() const { return 0.5 * q / (q - 1.0); }
  double density_space() const { return 0.5 * p / (p - 1.0); }
  double alpha_dual() const { return alpha == 1.0 ? inf : alpha / (alpha - 1.0); }
  void validate() const {
    if (!(p > 1.0 && p < 2.0 && q > 1.0 && q < 2.0))
      throw std::invalid_argument("duality_check: p and q must lie in (1, 2)");
    if (!(alpha >= 1.0) || std::isinf(alpha)) throw std::invalid_argument("duality_check: alpha must lie in [1, inf)");
  }
};

struct DualityReport {
  std::vector<double> schatten_ratios;  // Schatten-form LHS / ||W||^2
  std::vector<double> density_ratios;   // density-form LHS / ||n||_{alpha'}
  double c_schatten = 0.0;              // max of schatten_ratios
  double c_density = 0.0;               // max of density_ratios
  double constant_ratio = 0.0;          // max(c_s / c_d, c_d / c_s)
  double dispersion_schatten = 0.0;     // max / min
  double dispersion_density = 0.0;
  int skipped = 0;                      // zero W or zero n samples
  int pairing_violations = 0;           // paired inequalities broken beyond 1e-8 relative
  bool finite = true;
};

namespace detail {

/// sum_i n_i |e^{-itL} v_i|^2 on time x space nodes, from A's columns.
inline TimeField density_from_matrix(const PropagationMatrix& P, const Eigen::MatrixXcd& V, const Eigen::VectorXcd& n) {
  if (V.rows() != P.A.cols() || V.cols() != n.size())
    throw dimension_error("duality_check: system shape differs from A or from the coefficient count");
  const Eigen::VectorXd sw = row_weights(P.time, P.grid);
  Eigen::MatrixXcd AV = P.A * V;
  Eigen::VectorXcd rho = AV.cwiseAbs2().cast<cplx>() * n;
  rho = rho.cwiseQuotient(sw.cwiseAbs2().cast<cplx>());
  TimeField out = TimeField::zeros(P.time, P.grid);
  Eigen::Map<Eigen::VectorXcd>(out.values.data(), out.values.size()) = rho;
  return out;
}

inline double seq_norm(const Eigen::VectorXcd& n, double s) {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n.size());
  return weighted_lp(n, w, s);
}

/// Hoelder-extremal weight for a nonnegative density:
/// |W|^2 = rho^{b-1} ||rho(t)||_b^{a-b}, a = q'/2, b = p'/2.
inline TimeField extremal_weight(const TimeField& rho, const DualityExponents& ex) {
  const double a = ex.density_time(), b = ex.density_space();
  const Eigen::VectorXd wz = rho.grid.weights();
  TimeField W = TimeField::zeros(rho.time, rho.grid);
  for (int j = 0; j < rho.time.count; ++j) {
    Eigen::VectorXd r = rho.values.col(j).real().cwiseMax(0.0);
    const double nb = weighted_lp(r.cast<cplx>(), wz, b);
    if (nb == 0.0) continue;
    for (Eigen::Index i = 0; i < r.size(); ++i)
      W.values(i, j) = std::sqrt(std::pow(r(i), b - 1.0) * std::pow(nb, a - b));
  }
  return W;
}

}  // namespace detail

/// Left and right sides of one inequality form on one sample.
struct FormValue {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return lhs / rhs; }
};

/// ||W A A^* conj W||_{G^alpha} against ||W||^2 in L_t^{2q/(2-q)} L_z^{2p/(2-p)}.
inline FormValue schatten_form(const TimeField& W, const PropagationMatrix& P, const DualityExponents& ex) {
  const double w = spacetime_norm(W, ex.weight_time(), ex.weight_space());
  return {sandwich_schatten(W, P, ex.alpha).norm, w * w};
}

/// ||sum n_j |A f_j|^2|| in L_t^{q'/2} L_z^{p'/2} against ||n||_{alpha'};
/// the f_j are the columns of `coeffs` in A's truncation.
inline FormValue density_form(const PropagationMatrix& P, const Eigen::MatrixXcd& coeffs, const Eigen::VectorXcd& n,
                              const DualityExponents& ex) {
  const TimeField rho = detail::density_from_matrix(P, coeffs, n);
  return {spacetime_norm(rho, ex.density_time(), ex.density_space()), detail::seq_norm(n, ex.alpha_dual())};
}

/// Both forms on sampled W and sampled systems (real n_j >= 0; others are skipped). Every W is paired
/// with the system built from the eigenvectors of A^* |W|^2 A (n_i = lambda_i^{alpha-1}),
/// every system with its Hoelder-extremal weight, so each sample feeds both
/// constants.
inline DualityReport duality_check(const PropagationMatrix& P,
                                   const std::vector<std::pair<OrthonormalSystem, CoefficientVector>>& systems,
                                   const std::vector<TimeField>& Ws, const DualityExponents& ex) {
  ex.validate();
  DualityReport rep;
  const double ad = ex.alpha_dual();

  auto schatten_ratio = [&](const TimeField& W) { return schatten_form(W, P, ex).ratio(); };

  for (const auto& W : Ws) {
    if (W.values.cwiseAbs().maxCoeff() == 0.0) {
      ++rep.skipped;
      continue;
    }
    const double r5 = schatten_ratio(W);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sandwich_gram(W, P));
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    Eigen::VectorXcd n(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) n(i) = lam(i) > 0.0 ? std::pow(lam(i), ex.alpha - 1.0) : 0.0;
    const double r6 = density_form(P, es.eigenvectors(), n, ex).ratio();
    if (r6 < r5 * (1.0 - 1e-8)) ++rep.pairing_violations;
    rep.schatten_ratios.push_back(r5);
    rep.density_ratios.push_back(r6);
  }

  for (const auto& [sys, nj] : systems) {
    if (!(sys.truncation == P.truncation)) throw dimension_error("duality_check: system truncation differs from A");
    const Eigen::VectorXcd& n = nj.values;
    if (n.cwiseAbs().maxCoeff() == 0.0 || (n.real().array() < 0.0).any() || n.imag().cwiseAbs().maxCoeff() != 0.0) {
      ++rep.skipped;
      continue;
    }
    const TimeField rho = detail::density_from_matrix(P, sys.coeffs, n);
    const double r6 = spacetime_norm(rho, ex.density_time(), ex.density_space()) / detail::seq_norm(n, ad);
    const TimeField W = detail::extremal_weight(rho, ex);
    const double r5 = schatten_ratio(W);
    if (r6 > r5 * (1.0 + 1e-8)) ++rep.pairing_violations;
    rep.schatten_ratios.push_back(r5);
    rep.density_ratios.push_back(r6);
  }

  auto summarize = [&](const std::vector<double>& v, double& cmax, double& disp) {
    if (v.empty()) return;
    cmax = *std::max_element(v.begin(), v.end());
    const double cmin = *std::min_element(v.begin(), v.end());
    disp = cmin > 0.0 ? cmax / cmin : std::numeric_limits<double>::infinity();
    for (double x : v) rep.finite = rep.finite && std::isfinite(x) && x > 0.0;
  };
  summarize(rep.schatten_ratios, rep.c_schatten, rep.dispersion_schatten);
  summarize(rep.density_ratios, rep.c_density, rep.dispersion_density);
  if (rep.c_schatten > 0.0 && rep.c_density > 0.0)
    rep.constant_ratio = std::max(rep.c_schatten / rep.c_density, rep.c_density / rep.c_schatten);
  else
    rep.finite = false;
  return rep;
}

}  // namespace twistlab
