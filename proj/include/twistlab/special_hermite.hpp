#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "errors.hpp"
#include "grid.hpp"
#include "hermite.hpp"
#include "multi_index.hpp"

namespace twistlab {

/// Gauss-Hermite nodes per coordinate used by default for modes up to k_max.
inline int default_quad_order(int k_max) { return 2 * k_max + 20; }

/// Beyond |zeta|^2/4 > 700 every special Hermite value is below e^{-700}
/// times a polynomial and is returned as exactly 0.
inline constexpr double negligible_quarter_radius_sq = 700.0;

/// Evaluates special Hermite functions
///   Phi_{mu nu}(x + iy) = (2 pi)^{-n/2} int e^{i x.xi} Phi_mu(xi + y/2) Phi_nu(xi - y/2) dxi.
///
/// The integral factorizes over coordinates. In one coordinate, shifting
/// the contour to xi = s + i x / 2 gives
///   Phi_{ab}(x + iy) = (2 pi)^{-1/2} e^{-|zeta|^2/4}
///                      int e^{-s^2} p_a(s + ix/2 + y/2) p_b(s + ix/2 - y/2) ds,
/// where h_k = p_k e^{-(.)^2/2}. The remaining integrand is e^{-s^2} times a
/// polynomial of degree a + b, which the Gauss-Hermite rule integrates
/// exactly once order > (a + b) / 2.
class SpecialHermiteEvaluator {
 public:
  explicit SpecialHermiteEvaluator(int k_max, int quad_order = -1)
      : k_max_(k_max), rule_(GaussHermiteRule::make(quad_order < 0 ? default_quad_order(k_max) : quad_order)) {
    if (k_max < 0) throw std::invalid_argument("SpecialHermiteEvaluator: negative k_max");
    if (rule_.order() < default_quad_order(k_max))
      throw quadrature_order_error("special Hermite quadrature order " + std::to_string(rule_.order()) +
                                   " is below the required 2*k_max + 20 = " +
                                   std::to_string(default_quad_order(k_max)));
  }

  int k_max() const { return k_max_; }
  int quad_order() const { return rule_.order(); }

  /// One-coordinate values Phi_{ab}(zeta) for a, b <= k_max (row a, column b).
  Eigen::MatrixXcd table_1d(cplx zeta) const {
    const int K = k_max_ + 1;
    const double x = zeta.real(), y = zeta.imag();
    const double quarter_r2 = 0.25 * (x * x + y * y);
    if (quarter_r2 > negligible_quarter_radius_sq) return Eigen::MatrixXcd::Zero(K, K);

    const int Q = rule_.order();
    Eigen::MatrixXcd left(K, Q), right(K, Q);
    std::vector<cplx> buf(static_cast<std::size_t>(K));
    for (int q = 0; q < Q; ++q) {
      const double s = rule_.nodes[q];
      hermite_polynomial_parts<cplx>(cplx(s + 0.5 * y, 0.5 * x), buf);
      for (int a = 0; a < K; ++a) left(a, q) = buf[a] * rule_.weights[q];
      hermite_polynomial_parts<cplx>(cplx(s - 0.5 * y, 0.5 * x), buf);
      for (int b = 0; b < K; ++b) right(b, q) = buf[b];
    }
    const double scale = std::exp(-quarter_r2) / std::sqrt(2.0 * std::numbers::pi);
    return scale * (left * right.transpose());
  }

  cplx operator()(const MultiIndexPair& pair, std::span<const cplx> zeta) const {
    if (static_cast<int>(zeta.size()) != pair.dim())
      throw dimension_error("special_hermite: point dimension differs from multi-index length");
    if (pair.mu.max_entry() > k_max_ || pair.nu.max_entry() > k_max_)
      throw quadrature_order_error("special_hermite: mode exceeds evaluator k_max");
    cplx v = 1.0;
    for (int j = 0; j < pair.dim(); ++j) v *= table_1d(zeta[j])(pair.mu[j], pair.nu[j]);
    return v;
  }

 private:
  int k_max_;
  GaussHermiteRule rule_;
};

/// Phi_{mu nu}(zeta) with an explicit quadrature order per coordinate.
/// Requires quad_order >= 2 max(|mu|, |nu|) + 20.
inline cplx special_hermite(const MultiIndexPair& pair, std::span<const cplx> zeta, int quad_order) {
  int k = std::max(pair.mu.order(), pair.nu.order());
  if (quad_order < default_quad_order(k))
    throw quadrature_order_error("special_hermite: quadrature order " + std::to_string(quad_order) +
                                 " below 2 max(|mu|,|nu|) + 20 = " + std::to_string(default_quad_order(k)));
  return SpecialHermiteEvaluator(k, quad_order)(pair, zeta);
}

inline cplx special_hermite(const MultiIndexPair& pair, std::span<const cplx> zeta) {
  return special_hermite(pair, zeta, default_quad_order(std::max(pair.mu.order(), pair.nu.order())));
}

/// phi_k(zeta) = (2 pi)^{n/2} sum_{|nu| = k} Phi_{nu nu}(zeta), n = zeta.size().
inline cplx phi_k(int k, std::span<const cplx> zeta) {
  if (k < 0) throw std::invalid_argument("phi_k: negative degree");
  const int n = static_cast<int>(zeta.size());
  if (n < 1) throw dimension_error("phi_k: empty point");
  SpecialHermiteEvaluator eval(k);
  std::vector<Eigen::MatrixXcd> tables;
  for (int j = 0; j < n; ++j) tables.push_back(eval.table_1d(zeta[j]));
  cplx sum = 0.0;
  for (const auto& nu : multi_indices_of_order(n, k)) {
    cplx term = 1.0;
    for (int j = 0; j < n; ++j) term *= tables[j](nu[j], nu[j]);
    sum += term;
  }
  return std::pow(2.0 * std::numbers::pi, 0.5 * n) * sum;
}

/// Laguerre form L_k^{n-1}(|zeta|^2/2) e^{-|zeta|^2/4} of phi_k.
///
/// Faster than the defining sum; used only where a caller asks for it
/// explicitly, and cross-checked against phi_k in the tests.
inline double phi_k_laguerre(int k, std::span<const cplx> zeta) {
  const int n = static_cast<int>(zeta.size());
  double r2 = 0.0;
  for (auto z : zeta) r2 += std::norm(z);
  const double x = 0.5 * r2, alpha = n - 1;
  double prev = 1.0, cur = 1.0 + alpha - x;
  if (k == 0) cur = 1.0;
  for (int j = 1; j < k; ++j) {
    double next = ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1);
    prev = cur;
    cur = next;
  }
  return cur * std::exp(-0.25 * r2);
}

/// Matrix of basis samples: entry (node, i) = Phi_{tr[i]}(node).
inline Eigen::MatrixXcd sample_basis(const Truncation& tr, const GridSpec& grid) {
  if (tr.dim() != grid.n) throw dimension_error("sample_basis: truncation and grid dimensions differ");
  SpecialHermiteEvaluator eval(tr.k_max());
  const int M = grid.points;
  // One-coordinate tables on the M x M plane, indexed by (ix, iy).
  std::vector<Eigen::MatrixXcd> plane(static_cast<std::size_t>(M) * M);
  for (int ix = 0; ix < M; ++ix)
    for (int iy = 0; iy < M; ++iy) plane[ix * M + iy] = eval.table_1d({grid.node(ix), grid.node(iy)});

  Eigen::MatrixXcd out(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(tr.size()));
  std::vector<const Eigen::MatrixXcd*> tabs(grid.n);
  for (std::size_t node = 0; node < grid.size(); ++node) {
    for (int j = 0; j < grid.n; ++j)
      tabs[j] = &plane[grid.axis_index(node, 2 * j) * M + grid.axis_index(node, 2 * j + 1)];
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const auto& p = tr[i];
      cplx v = 1.0;
      for (int j = 0; j < grid.n; ++j) v *= (*tabs[j])(p.mu[j], p.nu[j]);
      out(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return out;
}

/// Samples of a single Phi_{mu nu} on a grid.
inline Field sample_special_hermite(const MultiIndexPair& pair, const GridSpec& grid) {
  int k = std::max(pair.mu.max_entry(), pair.nu.max_entry());
  SpecialHermiteEvaluator eval(k);
  return Field::sample(grid, [&](const std::vector<cplx>& z) { return eval(pair, z); });
}

}  // namespace twistlab
