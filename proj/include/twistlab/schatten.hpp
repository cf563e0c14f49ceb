#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "errors.hpp"
#include "gamma.hpp"
#include "grid.hpp"
#include "multi_index.hpp"
#include "special_hermite.hpp"
#include "twisted.hpp"

namespace twistlab {

/// Largest dense matrix (entry count) the library will assemble.
inline constexpr double dense_entry_limit = 2e7;

struct SchattenReport {
  std::vector<double> singular_values;  // descending
  double r = 2.0;
  double norm = 0.0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

/// (sum s^r)^{1/r}, or s_1 for r = inf. Values below 1e-10 s_1 are treated as 0.
inline SchattenReport schatten_from_singular_values(std::vector<double> s, double r, Eigen::Index rows,
                                                    Eigen::Index cols) {
  if (!(r >= 1.0)) throw std::invalid_argument("schatten_norm: r must lie in [1, inf]");
  std::sort(s.begin(), s.end(), std::greater<>());
  const double s1 = s.empty() ? 0.0 : s.front();
  for (auto& v : s)
    if (v < 1e-10 * s1) v = 0.0;
  SchattenReport rep{s, r, 0.0, rows, cols};
  if (s1 == 0.0) return rep;
  if (std::isinf(r)) {
    rep.norm = s1;
  } else {
    // scaled by s1 so large r does not overflow
    double acc = 0.0;
    for (double v : s) acc += std::pow(v / s1, r);
    rep.norm = s1 * std::pow(acc, 1.0 / r);
  }
  return rep;
}

inline SchattenReport schatten_norm(const Eigen::MatrixXcd& T, double r) {
  if (!T.allFinite()) throw std::invalid_argument("schatten_norm: non-finite matrix entries");
  if (!(r >= 1.0)) throw std::invalid_argument("schatten_norm: r must lie in [1, inf]");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(T);
  const auto& sv = svd.singularValues();
  return schatten_from_singular_values(std::vector<double>(sv.data(), sv.data() + sv.size()), r, T.rows(), T.cols());
}

/// Schatten norm of a Hermitian positive semidefinite matrix through its eigenvalues.
inline SchattenReport schatten_norm_psd(const Eigen::MatrixXcd& H, double r, Eigen::Index rows, Eigen::Index cols) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  std::vector<double> s;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s.push_back(std::max(0.0, es.eigenvalues()(i)));
  return schatten_from_singular_values(std::move(s), r, rows, cols);
}

/// (mu, nu, lambda) with integer frequency lambda.
struct SurfacePoint {
  MultiIndex mu;
  MultiIndex nu;
  int lambda = 0;

  int surface_lambda() const { return 2 * nu.order() + nu.dim(); }
  bool on_surface() const { return lambda == surface_lambda(); }
};

/// A[(t, z), (mu, nu)] = e^{-i t (2|nu| + n)} Phi_{mu nu}(z) sqrt(w_t w_z),
/// rows ordered time-major (row = j_t * grid.size() + z), w_t = 1 / N_t.
struct PropagationMatrix {
  Truncation truncation;
  TimeGrid time;
  GridSpec grid;
  Eigen::MatrixXcd A;

  std::size_t row(int jt, std::size_t z) const { return static_cast<std::size_t>(jt) * grid.size() + z; }
};

namespace detail {

inline void guard_dense(double rows, double cols, const char* what) {
  if (rows * cols > dense_entry_limit)
    throw size_guard_error(std::string(what) + ": " + std::to_string(static_cast<long long>(rows * cols)) +
                           " entries exceed the 2e7 desk-scale guard");
}

/// sqrt(w_t w_z) for every time x space row.
inline Eigen::VectorXd row_weights(const TimeGrid& tg, const GridSpec& grid) {
  const Eigen::VectorXd wz = grid.weights();
  const double wt = tg.weight(TimeMeasure::normalized);
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()) * tg.count);
  for (int j = 0; j < tg.count; ++j) out.segment(j * wz.size(), wz.size()) = (wt * wz).cwiseSqrt();
  return out;
}

}  // namespace detail

inline PropagationMatrix build_propagation_matrix(const Truncation& tr, const TimeGrid& tg, const GridSpec& grid) {
  const double rows = static_cast<double>(grid.size()) * tg.count;
  detail::guard_dense(rows, static_cast<double>(tr.size()), "build_propagation_matrix");
  const Eigen::MatrixXcd basis = sample_basis(tr, grid);
  const Eigen::VectorXd sw = detail::row_weights(tg, grid);
  const auto S = static_cast<Eigen::Index>(grid.size());
  PropagationMatrix P{tr, tg, grid, Eigen::MatrixXcd(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(tr.size()))};
  for (std::size_t c = 0; c < tr.size(); ++c) {
    const double lam = tr[c].eigenvalue();
    for (int j = 0; j < tg.count; ++j) {
      const cplx ph = std::polar(1.0, -tg.node(j) * lam);
      P.A.col(static_cast<Eigen::Index>(c)).segment(j * S, S) =
          ph * basis.col(static_cast<Eigen::Index>(c)).cwiseProduct(sw.segment(j * S, S).cast<cplx>());
    }
  }
  return P;
}

/// E_S fhat (t, z) = sum fhat(mu, nu, lambda) Phi_{mu nu}(z) e^{-i lambda t}.
inline TimeField extension_operator(const std::vector<std::pair<SurfacePoint, cplx>>& fhat, const TimeGrid& tg,
                                    const GridSpec& grid) {
  TimeField out = TimeField::zeros(tg, grid);
  for (const auto& [sp, val] : fhat) {
    if (!sp.on_surface())
      throw off_surface_error("extension_operator: support point with lambda != 2|nu| + n (lambda = " +
                              std::to_string(sp.lambda) + ")");
    if (sp.mu.dim() != grid.n) throw dimension_error("extension_operator: multi-index length differs from grid n");
    if (val == cplx(0.0)) continue;
    Field phi = sample_special_hermite(MultiIndexPair(sp.mu, sp.nu), grid);
    for (int j = 0; j < tg.count; ++j) out.values.col(j) += val * std::polar(1.0, -sp.lambda * tg.node(j)) * phi.values;
  }
  return out;
}

/// Surface data whose extension is (2 pi)^n e^{-itL} u for u with coefficients c.
inline std::vector<std::pair<SurfacePoint, cplx>> lift_to_surface(const SpectralCoeffs& c) {
  std::vector<std::pair<SurfacePoint, cplx>> out;
  const double scale = std::pow(2.0 * std::numbers::pi, c.truncation.dim());
  for (std::size_t i = 0; i < c.truncation.size(); ++i) {
    const auto& p = c.truncation[i];
    out.push_back({SurfacePoint{p.mu, p.nu, p.eigenvalue()}, scale * c.coeffs(static_cast<Eigen::Index>(i))});
  }
  return out;
}

/// G_z(mu, nu, lambda) = (lambda - (2|nu| + n))_+^z / Gamma(z + 1).
/// z = -1 is the surface delta: 1 on S, 0 elsewhere.
inline cplx g_z_weight(cplx z, const SurfacePoint& sp) {
  const int d = sp.lambda - sp.surface_lambda();
  if (z == cplx(-1.0)) return d == 0 ? 1.0 : 0.0;
  if (z.imag() == 0.0 && z.real() < -1.0 && z.real() == std::floor(z.real()))
    throw gamma_pole_error("g_z_weight: z = " + std::to_string(z.real()) + " is a pole of Gamma(z + 1)");
  if (d <= 0) return 0.0;
  if (z == cplx(0.0)) return 1.0;
  return std::pow(cplx(static_cast<double>(d)), z) * complex_rgamma(z + 1.0);
}

/// (1 / Gamma(z + 1)) int phi(x) (x - c)_+^z dx for a smooth phi supported in
/// [c, c + X], written to be finite for Re z > -1 and continuous at z -> -1:
///   phi(c) X^{z+1} / Gamma(z + 2) + (1 / Gamma(z + 1)) int_0^X (phi(c + x) - phi(c)) x^z dx.
template <class Phi, class Integrator>
cplx g_z_pairing(cplx z, Phi&& phi, double c, double X, Integrator&& integrate) {
  const double phic = phi(c);
  cplx head = phic * std::pow(cplx(X), z + 1.0) * complex_rgamma(z + 2.0);
  auto re = integrate([&](double x) { return ((phi(c + x) - phic) * std::pow(cplx(x), z)).real(); }, 0.0, X);
  auto im = integrate([&](double x) { return ((phi(c + x) - phic) * std::pow(cplx(x), z)).imag(); }, 0.0, X);
  return head + cplx(re, im) * complex_rgamma(z + 1.0);
}

/// B diag(weights) B^*, with B's columns orthonormal.
struct LowRankOperator {
  Eigen::MatrixXcd basis;
  Eigen::VectorXcd weights;

  Eigen::Index dimension() const { return basis.rows(); }
  Eigen::MatrixXcd dense() const {
    detail::guard_dense(static_cast<double>(basis.rows()), static_cast<double>(basis.rows()), "LowRankOperator::dense");
    return basis * weights.asDiagonal() * basis.adjoint();
  }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
    return basis * weights.cwiseProduct(basis.adjoint() * v);
  }
  /// Singular values through a thin QR of the basis.
  std::vector<double> singular_values() const {
    if (basis.cols() == 0) return {};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
    Eigen::MatrixXcd R = qr.matrixQR().topRows(basis.cols()).triangularView<Eigen::Upper>();
    Eigen::MatrixXcd core = R * weights.asDiagonal() * R.adjoint();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(core);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
  }
  double operator_norm() const {
    auto s = singular_values();
    return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
  }
};

inline int minimal_frequency_cutoff(const Truncation& tr) { return 2 * tr.k_max() + tr.dim() + 8; }

/// T_z on time x space samples: multiplier G_z in the basis Phi_{mu nu} (x) e^{-i lambda t},
/// lambda in [-Lambda, Lambda]. Lambda < 0 picks 2 k_max + n + 8.
inline LowRankOperator build_T_z(cplx z, const Truncation& tr, const TimeGrid& tg, const GridSpec& grid,
                                 int Lambda = -1) {
  const int need = minimal_frequency_cutoff(tr);
  if (Lambda < 0) Lambda = need;
  if (Lambda < need)
    throw std::invalid_argument("build_T_z: Lambda = " + std::to_string(Lambda) + " below 2 k_max + n + 8 = " +
                                std::to_string(need));
  if (tg.count <= 2 * Lambda)
    throw std::invalid_argument("build_T_z: N_t must exceed 2 Lambda so frequencies stay distinct on the time grid");

  const Eigen::MatrixXcd basis = sample_basis(tr, grid);
  const Eigen::VectorXd sw = detail::row_weights(tg, grid);
  const auto S = static_cast<Eigen::Index>(grid.size());

  std::vector<std::pair<std::size_t, int>> cols;
  std::vector<cplx> w;
  for (std::size_t c = 0; c < tr.size(); ++c)
    for (int lam = -Lambda; lam <= Lambda; ++lam) {
      cplx g = g_z_weight(z, SurfacePoint{tr[c].mu, tr[c].nu, lam});
      if (g == cplx(0.0)) continue;
      cols.emplace_back(c, lam);
      w.push_back(g);
    }
  const double rows = static_cast<double>(S) * tg.count;
  detail::guard_dense(rows, static_cast<double>(cols.size()), "build_T_z");

  LowRankOperator T{Eigen::MatrixXcd(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols.size())),
                    Eigen::Map<Eigen::VectorXcd>(w.data(), static_cast<Eigen::Index>(w.size()))};
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const auto [c, lam] = cols[k];
    for (int j = 0; j < tg.count; ++j)
      T.basis.col(static_cast<Eigen::Index>(k)).segment(j * S, S) =
          std::polar(1.0, -lam * tg.node(j)) *
          basis.col(static_cast<Eigen::Index>(c)).cwiseProduct(sw.segment(j * S, S).cast<cplx>());
  }
  return T;
}

/// W A: rows of A scaled by W(t, z). The sandwich W A A^* conj(W) equals F F^*.
inline Eigen::MatrixXcd sandwich_factor(const TimeField& W, const PropagationMatrix& P) {
  if (!(W.grid == P.grid) || !(W.time == P.time)) throw grid_mismatch_error("sandwich_operator: W grid differs from A");
  Eigen::Map<const Eigen::VectorXcd> wv(W.values.data(), W.values.size());  // column-major = time-major rows
  return wv.asDiagonal() * P.A;
}

/// Dense W A A^* conj(W) (guarded to 2e7 entries).
inline Eigen::MatrixXcd sandwich_operator(const TimeField& W, const PropagationMatrix& P) {
  detail::guard_dense(static_cast<double>(P.A.rows()), static_cast<double>(P.A.rows()), "sandwich_operator");
  Eigen::MatrixXcd F = sandwich_factor(W, P);
  return F * F.adjoint();
}

/// A^* |W|^2 A: same nonzero spectrum as the sandwich, size |truncation|^2.
inline Eigen::MatrixXcd sandwich_gram(const TimeField& W, const PropagationMatrix& P) {
  Eigen::MatrixXcd F = sandwich_factor(W, P);
  return F.adjoint() * F;
}

inline SchattenReport sandwich_schatten(const TimeField& W, const PropagationMatrix& P, double r) {
  return schatten_norm_psd(sandwich_gram(W, P), r, P.A.rows(), P.A.rows());
}

/// L^{p_t}_t L^{p_z}_z norm under the normalized time measure used with A.
inline double spacetime_norm(const TimeField& F, double p_t, double p_z) {
  return mixed_norm(F, p_t, p_z, TimeMeasure::normalized);
}

}  // namespace twistlab
