#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "errors.hpp"
#include "grid.hpp"
#include "multi_index.hpp"
#include "singularity.hpp"
#include "twisted.hpp"

namespace twistlab {

/// p on the line 1/p + n/q = n for 1 <= q <= 1 + 1/n (p = inf at q = 1).
inline double admissible_exponents(int n, double q) {
  if (n < 1) throw dimension_error("admissible_exponents: n must be >= 1");
  const double top = 1.0 + 1.0 / n;
  if (!(q >= 1.0 - 1e-12 && q <= top + 1e-12))
    throw std::invalid_argument("admissible_exponents: q = " + std::to_string(q) + " outside [1, 1 + 1/n]");
  if (q <= 1.0) return inf;
  return q / (n * (q - 1.0));
}

/// Orthonormal columns in coefficient space over a truncation.
struct OrthonormalSystem {
  Truncation truncation;
  int N = 0;
  Eigen::MatrixXcd coeffs;  // |truncation| x N
  std::uint64_t seed = 0;
};

struct CoefficientVector {
  Eigen::VectorXcd values;

  static CoefficientVector ones(int N) { return {Eigen::VectorXcd::Ones(N)}; }
  int size() const { return static_cast<int>(values.size()); }
  /// (sum |n_j|^s)^{1/s}, max |n_j| for s = inf.
  double norm(double s) const {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(values.size());
    return detail::weighted_lp(values, w, s);
  }
};

/// Complex Gaussian matrix orthonormalized column by column (modified
/// Gram-Schmidt with one reorthogonalization pass).
inline OrthonormalSystem sample_orthonormal_system(const Truncation& tr, int N, std::uint64_t seed) {
  if (N < 1 || static_cast<std::size_t>(N) > tr.size())
    throw std::invalid_argument("sample_orthonormal_system: N = " + std::to_string(N) + " not in [1, |truncation| = " +
                                std::to_string(tr.size()) + "]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const auto D = static_cast<Eigen::Index>(tr.size());
  Eigen::MatrixXcd Q(D, N);
  for (Eigen::Index c = 0; c < N; ++c)
    for (Eigen::Index r = 0; r < D; ++r) Q(r, c) = {gauss(rng), gauss(rng)};
  for (Eigen::Index c = 0; c < N; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < c; ++k) Q.col(c) -= Q.col(k).dot(Q.col(c)) * Q.col(k);
    Q.col(c) /= Q.col(c).norm();
  }
  return {tr, N, Q, seed};
}

/// System made of the first N truncation modes (unit coefficient vectors).
inline OrthonormalSystem eigenfunction_system(const Truncation& tr, int N) {
  if (N < 1 || static_cast<std::size_t>(N) > tr.size())
    throw std::invalid_argument("eigenfunction_system: N out of range");
  return {tr, N, Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(tr.size()), N), 0};
}

/// sum_j n_j |e^{-itL} u_j|^2 on every time node.
inline TimeField density(const OrthonormalSystem& sys, const CoefficientVector& nj, const TimeGrid& tg,
                         const SpectralBasis& basis) {
  if (nj.size() != sys.N) throw dimension_error("density: coefficient count differs from system size");
  if (!(sys.truncation == basis.truncation())) throw dimension_error("density: system truncation differs from basis");
  const auto D = static_cast<Eigen::Index>(sys.truncation.size());
  TimeField out = TimeField::zeros(tg, basis.grid());
  Eigen::MatrixXcd phased(D, sys.N);
  for (int j = 0; j < tg.count; ++j) {
    for (Eigen::Index r = 0; r < D; ++r)
      phased.row(r) = std::polar(1.0, -tg.node(j) * sys.truncation[r].eigenvalue()) * sys.coeffs.row(r);
    Eigen::MatrixXcd U = basis.samples() * phased;
    out.values.col(j) = U.cwiseAbs2().cast<cplx>() * nj.values;
  }
  return out;
}

inline TimeField density(const OrthonormalSystem& sys, const CoefficientVector& nj, const TimeGrid& tg,
                         const GridSpec& grid) {
  return density(sys, nj, tg, SpectralBasis(sys.truncation, grid));
}

struct StrichartzQuotient {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool admissible = true;  // false when (p, q) is off the line or out of range
};

/// ||density||_{L^p_t L^q_z} / (sum |n_j|^{2q/(q+1)})^{(q+1)/(2q)}.
inline StrichartzQuotient strichartz_ratio(const TimeField& rho, const CoefficientVector& nj, int n, double p, double q,
                                           TimeMeasure measure = TimeMeasure::lebesgue) {
  StrichartzQuotient out;
  out.rhs = nj.norm(2.0 * q / (q + 1.0));
  if (out.rhs == 0.0) throw std::invalid_argument("strichartz_ratio: all coefficients n_j are zero");
  out.lhs = mixed_norm(rho, p, q, measure);
  out.ratio = out.lhs / out.rhs;
  ExponentPair ep{p, q, n};
  out.admissible = (std::isinf(p) ? q == 1.0 : ep.on_line()) && ep.in_range();
  return out;
}

inline StrichartzQuotient strichartz_ratio(const OrthonormalSystem& sys, const CoefficientVector& nj, double p,
                                           double q, const TimeGrid& tg, const SpectralBasis& basis,
                                           TimeMeasure measure = TimeMeasure::lebesgue) {
  return strichartz_ratio(density(sys, nj, tg, basis), nj, sys.truncation.dim(), p, q, measure);
}

struct SweepConfig {
  int n = 1;
  std::vector<double> q_values{1.0, 1.25, 1.5, 2.0};
  std::vector<int> N_values{1, 2, 4, 8, 16};
  int trials = 20;
  std::uint64_t seed = 1;
  int k_max = -1;  // truncation for the ratio rows; -1: smallest holding max N
  int grid_points = 64;
  double grid_half_width = -1.0;  // -1: default for the truncation
  int time_nodes = 32;
};

struct SweepRow {
  int n;
  double p, q;
  int N;
  int trial;
  double ratio, lhs, rhs;
  bool admissible;
};

struct SweepSummary {
  std::map<std::pair<double, int>, double> max_ratio;  // keyed by (q, N)
  double overall_max_ratio = 0.0;
  /// LHS growth exponent at n_j = 1, (p, q) = (2, 2); systems drawn from the
  /// smallest truncation holding N states.
  double growth_exponent = 0.0;
  /// Same fit with every system drawn from the fixed sweep truncation.
  double fixed_truncation_exponent = 0.0;
  std::vector<std::pair<int, double>> growth_points;  // (N, mean LHS)
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepRow> rows;
  SweepSummary summary;
};

inline std::uint64_t trial_seed(std::uint64_t seed, int N, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(N), static_cast<std::uint32_t>(trial)};
  std::uint32_t parts[2];
  seq.generate(parts, parts + 2);
  return (static_cast<std::uint64_t>(parts[0]) << 32) | parts[1];
}

namespace detail {

inline double mean_lhs_at_22(const Truncation& tr, int N, const SweepConfig& cfg, const TimeGrid& tg,
                             const SpectralBasis& basis) {
  double acc = 0.0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    auto sys = sample_orthonormal_system(tr, N, trial_seed(cfg.seed, N, trial));
    acc += strichartz_ratio(sys, CoefficientVector::ones(N), 2.0, 2.0, tg, basis).lhs;
  }
  return acc / cfg.trials;
}

}  // namespace detail

/// Ratio rows at n_j = 1 over q_values x N_values x trials, plus growth fits.
inline SweepReport sweep(const SweepConfig& cfg) {
  if (cfg.q_values.empty() || cfg.N_values.empty() || cfg.trials < 1)
    throw std::invalid_argument("sweep: empty q grid, N grid, or trial count");
  int maxN = 0;
  for (int N : cfg.N_values) maxN = std::max(maxN, N);
  const int k = cfg.k_max >= 0 ? cfg.k_max : minimal_truncation_degree(cfg.n, static_cast<std::size_t>(maxN));
  const Truncation tr(cfg.n, k);
  const double L = cfg.grid_half_width > 0 ? cfg.grid_half_width : default_half_width(cfg.n, k);
  const GridSpec grid = make_grid(cfg.n, L, cfg.grid_points);
  const TimeGrid tg(cfg.time_nodes);
  const SpectralBasis basis(tr, grid);

  SweepReport rep{cfg, {}, {}};
  for (double q : cfg.q_values) {
    const double p = admissible_exponents(cfg.n, q);
    for (int N : cfg.N_values)
      for (int trial = 0; trial < cfg.trials; ++trial) {
        auto sys = sample_orthonormal_system(tr, N, trial_seed(cfg.seed, N, trial));
        auto nj = CoefficientVector::ones(N);
        auto sq = strichartz_ratio(sys, nj, p, q, tg, basis);
        rep.rows.push_back({cfg.n, p, q, N, trial, sq.ratio, sq.lhs, sq.rhs, sq.admissible});
        auto& m = rep.summary.max_ratio[{q, N}];
        m = std::max(m, sq.ratio);
        rep.summary.overall_max_ratio = std::max(rep.summary.overall_max_ratio, sq.ratio);
      }
  }

  std::vector<double> xs, ys, yfixed;
  for (int N : cfg.N_values) {
    if (N < 2) continue;
    const int kN = minimal_truncation_degree(cfg.n, static_cast<std::size_t>(N));
    const Truncation trN(cfg.n, kN);
    const GridSpec gN = make_grid(cfg.n, cfg.grid_half_width > 0 ? cfg.grid_half_width : default_half_width(cfg.n, kN),
                                  cfg.grid_points);
    const double y = detail::mean_lhs_at_22(trN, N, cfg, tg, SpectralBasis(trN, gN));
    xs.push_back(N);
    ys.push_back(y);
    yfixed.push_back(detail::mean_lhs_at_22(tr, N, cfg, tg, basis));
    rep.summary.growth_points.emplace_back(N, y);
  }
  if (xs.size() >= 2) {
    rep.summary.growth_exponent = loglog_slope(xs, ys);
    rep.summary.fixed_truncation_exponent = loglog_slope(xs, yfixed);
  } else {
    rep.summary.growth_exponent = rep.summary.fixed_truncation_exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace twistlab
