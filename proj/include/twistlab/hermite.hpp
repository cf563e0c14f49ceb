#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "multi_index.hpp"

namespace twistlab {

/// Polynomial parts p_k of the normalized Hermite functions,
/// h_k(a) = p_k(a) e^{-a^2/2}, for k = 0..out.size()-1.
///
/// The p_k are orthonormal for the weight e^{-a^2}. Evaluated with
///   p_{k+1} = a sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1},
/// which is valid for complex a as well.
template <class T>
void hermite_polynomial_parts(T a, std::span<T> out) {
  if (out.empty()) return;
  out[0] = T(std::pow(std::numbers::pi, -0.25));
  if (out.size() == 1) return;
  out[1] = a * std::sqrt(2.0) * out[0];
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    double kk = static_cast<double>(k);
    out[k + 1] = a * std::sqrt(2.0 / (kk + 1.0)) * out[k] - std::sqrt(kk / (kk + 1.0)) * out[k - 1];
  }
}

/// h_0(x), ..., h_{k_max}(x) via the normalized recurrence with the
/// Gaussian folded into the seed (no factorials, no overflow).
inline std::vector<double> hermite_1d_all(int k_max, double x) {
  if (k_max < 0) throw std::invalid_argument("hermite_1d_all: negative degree");
  std::vector<double> h(static_cast<std::size_t>(k_max) + 1);
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (k_max >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int k = 1; k < k_max; ++k)
    h[k + 1] = x * std::sqrt(2.0 / (k + 1)) * h[k] - std::sqrt(double(k) / (k + 1)) * h[k - 1];
  return h;
}

/// Normalized Hermite function h_k(x).
inline double hermite_1d(int k, double x) { return hermite_1d_all(k, x).back(); }

/// Phi_alpha(x) = prod_j h_{alpha_j}(x_j).
inline double hermite_tensor(const MultiIndex& alpha, std::span<const double> x) {
  if (static_cast<int>(x.size()) != alpha.dim())
    throw dimension_error("hermite_tensor: point dimension differs from multi-index length");
  double v = 1.0;
  for (int j = 0; j < alpha.dim(); ++j) v *= hermite_1d(alpha[j], x[j]);
  return v;
}

/// Gauss-Hermite rule for weight e^{-s^2}: exact for polynomials of
/// degree <= 2*order - 1.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int order() const { return static_cast<int>(nodes.size()); }

  /// Golub-Welsch for initial nodes, then Newton polish on p_N and
  /// Christoffel weights 1 / sum_k p_k(s)^2.
  static GaussHermiteRule make(int order) {
    if (order < 1) throw std::invalid_argument("GaussHermiteRule: order must be >= 1");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);

    GaussHermiteRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    std::vector<double> p(static_cast<std::size_t>(order) + 1);
    for (int i = 0; i < order; ++i) {
      double s = es.eigenvalues()(i);
      for (int it = 0; it < 3; ++it) {
        hermite_polynomial_parts<double>(s, p);
        double dp = std::sqrt(2.0 * order) * p[order - 1];
        if (dp == 0.0) break;
        s -= p[order] / dp;
      }
      hermite_polynomial_parts<double>(s, p);
      double sum = 0.0;
      for (int k = 0; k < order; ++k) sum += p[k] * p[k];
      rule.nodes[i] = s;
      rule.weights[i] = 1.0 / sum;
    }
    return rule;
  }
};

}  // namespace twistlab
