#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "errors.hpp"

namespace twistlab {

using cplx = std::complex<double>;
inline constexpr double inf = std::numeric_limits<double>::infinity();

namespace detail {

/// Pairwise (tree) sum of term(0..count-1) in index order. The split
/// points depend only on `count`, so results are reproducible.
template <class T, class Term>
T pairwise_sum(std::size_t first, std::size_t count, const Term& term) {
  if (count <= 16) {
    T s{};
    for (std::size_t i = first; i < first + count; ++i) s += term(i);
    return s;
  }
  std::size_t half = count / 2;
  return pairwise_sum<T>(first, half, term) + pairwise_sum<T>(first + half, count - half, term);
}

inline std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace detail

/// Uniform tensor grid on [-L, L]^{2n}, identified with C^n.
///
/// Axes are interleaved as (x_1, y_1, ..., x_n, y_n) with zeta_j = x_j + i y_j.
/// Flat indices are row-major, last axis fastest. Nodes include both
/// endpoints; quadrature is the tensor trapezoidal rule.
struct GridSpec {
  int n = 1;
  double half_width = 1.0;
  int points = 8;

  int axes() const { return 2 * n; }
  double spacing() const { return 2.0 * half_width / (points - 1); }
  std::size_t size() const { return detail::ipow(static_cast<std::size_t>(points), axes()); }
  double node(int i) const { return -half_width + i * spacing(); }
  double axis_weight(int i) const {
    double h = spacing();
    return (i == 0 || i == points - 1) ? 0.5 * h : h;
  }
  /// Index along `axis` of a flat node index.
  int axis_index(std::size_t flat, int axis) const {
    std::size_t stride = detail::ipow(static_cast<std::size_t>(points), axes() - 1 - axis);
    return static_cast<int>((flat / stride) % static_cast<std::size_t>(points));
  }
  std::size_t stride(int axis) const {
    return detail::ipow(static_cast<std::size_t>(points), axes() - 1 - axis);
  }
  std::vector<cplx> point(std::size_t flat) const {
    std::vector<cplx> z(n);
    for (int j = 0; j < n; ++j) z[j] = {node(axis_index(flat, 2 * j)), node(axis_index(flat, 2 * j + 1))};
    return z;
  }
  double weight(std::size_t flat) const {
    double w = 1.0;
    for (int a = 0; a < axes(); ++a) w *= axis_weight(axis_index(flat, a));
    return w;
  }
  Eigen::VectorXd weights() const {
    Eigen::VectorXd w(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) w(static_cast<Eigen::Index>(i)) = weight(i);
    return w;
  }
  double volume() const { return std::pow(2.0 * half_width, axes()); }

  bool operator==(const GridSpec& o) const {
    return n == o.n && half_width == o.half_width && points == o.points;
  }
};

inline GridSpec make_grid(int n, double half_width, int points) {
  if (n < 1) throw dimension_error("make_grid: n must be >= 1");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("make_grid: half-width must be positive and finite");
  if (points < 8 || points % 2 != 0) throw std::invalid_argument("make_grid: points per axis must be even and >= 8");
  return GridSpec{n, half_width, points};
}

/// Half-width covering the oscillator turning radius 2 sqrt(|mu|+|nu|+n)
/// of every mode with |mu|, |nu| <= k_max, plus a Gaussian tail margin.
/// Never below 7, where the Phi_00 tail mass drops under 1e-11.
inline double default_half_width(int n, int k_max) { return std::max(7.0, 2.0 * std::sqrt(2.0 * k_max + n) + 3.0); }

inline GridSpec default_grid(int n, int k_max, int points = 64) {
  return make_grid(n, default_half_width(n, k_max), points);
}

/// Complex samples on a GridSpec.
struct Field {
  GridSpec grid;
  Eigen::VectorXcd values;

  static Field zeros(const GridSpec& g) {
    return Field{g, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g.size()))};
  }
  /// Samples f(zeta) where zeta is passed as std::vector<cplx> of length n.
  template <class Fn>
  static Field sample(const GridSpec& g, Fn&& f) {
    Field out = zeros(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.values(static_cast<Eigen::Index>(i)) = f(g.point(i));
    return out;
  }
  cplx operator[](std::size_t i) const { return values(static_cast<Eigen::Index>(i)); }
  double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw grid_mismatch_error(std::string(what) + ": fields live on different grids");
}

/// sum f conj(g) w over the nodes.
inline cplx inner_product(const Field& f, const Field& g) {
  require_same_grid(f.grid, g.grid, "inner_product");
  const auto w = f.grid.weights();
  return detail::pairwise_sum<cplx>(0, f.grid.size(), [&](std::size_t i) {
    auto k = static_cast<Eigen::Index>(i);
    return f.values(k) * std::conj(g.values(k)) * w(k);
  });
}

namespace detail {

inline double weighted_lp(const Eigen::Ref<const Eigen::VectorXcd>& v, const Eigen::VectorXd& w, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("Lp norm: exponent must be in [1, inf]");
  if (std::isinf(p)) return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  std::size_t count = static_cast<std::size_t>(v.size());
  if (p == 1.0)
    return pairwise_sum<double>(0, count, [&](std::size_t i) {
      auto k = static_cast<Eigen::Index>(i);
      return std::abs(v(k)) * w(k);
    });
  if (p == 2.0)
    return std::sqrt(pairwise_sum<double>(0, count, [&](std::size_t i) {
      auto k = static_cast<Eigen::Index>(i);
      return std::norm(v(k)) * w(k);
    }));
  return std::pow(pairwise_sum<double>(0, count,
                                       [&](std::size_t i) {
                                         auto k = static_cast<Eigen::Index>(i);
                                         return std::pow(std::abs(v(k)), p) * w(k);
                                       }),
                  1.0 / p);
}

}  // namespace detail

inline double lp_norm(const Field& f, double p) { return detail::weighted_lp(f.values, f.grid.weights(), p); }

/// Measure on the time circle: Lebesgue dt (total 2 pi) or dt / (2 pi).
enum class TimeMeasure { lebesgue, normalized };

/// Uniform nodes on [-pi, pi) offset by half a spacing, so no node is 0 or +-pi.
/// The count must be even: with an odd count the offset lands a node on 0.
struct TimeGrid {
  int count = 32;

  explicit TimeGrid(int n = 32) : count(n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("TimeGrid: node count must be even and >= 2");
  }
  double spacing() const { return 2.0 * std::numbers::pi / count; }
  double node(int j) const { return -std::numbers::pi + (j + 0.5) * spacing(); }
  double weight(TimeMeasure m = TimeMeasure::lebesgue) const {
    return m == TimeMeasure::lebesgue ? spacing() : 1.0 / count;
  }
  std::vector<double> nodes() const {
    std::vector<double> t(count);
    for (int j = 0; j < count; ++j) t[j] = node(j);
    return t;
  }
  /// Lower bound of |sin t| over the nodes.
  double min_abs_sin() const { return std::sin(std::numbers::pi / count); }
  bool operator==(const TimeGrid& o) const { return count == o.count; }
};

/// Samples on TimeGrid x GridSpec; column j is the spatial field at time node j.
struct TimeField {
  TimeGrid time;
  GridSpec grid;
  Eigen::MatrixXcd values;

  static TimeField zeros(const TimeGrid& tg, const GridSpec& g) {
    return TimeField{tg, g, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(g.size()), tg.count)};
  }
  Field slice(int j) const { return Field{grid, values.col(j)}; }
};

/// ( sum_t w_t ||F(t)||_q^p )^{1/p}, with max over t when p = inf.
inline double mixed_norm(const TimeField& F, double p, double q, TimeMeasure measure = TimeMeasure::lebesgue) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("mixed_norm: exponents must be in [1, inf]");
  if (F.values.rows() != static_cast<Eigen::Index>(F.grid.size()) || F.values.cols() != F.time.count)
    throw dimension_error("mixed_norm: values shape does not match time x space grid");
  const auto w = F.grid.weights();
  Eigen::VectorXcd slice_norms(F.time.count);
  for (int j = 0; j < F.time.count; ++j) slice_norms(j) = detail::weighted_lp(F.values.col(j), w, q);
  Eigen::VectorXd wt = Eigen::VectorXd::Constant(F.time.count, F.time.weight(measure));
  return detail::weighted_lp(slice_norms, wt, p);
}

/// Admissibility bookkeeping for the line 1/p + n/q = n.
struct ExponentPair {
  double p;
  double q;
  int n;

  bool on_line() const { return std::abs(1.0 / p + n / q - n) < 1e-12; }
  bool in_range() const { return q >= 1.0 && q <= 1.0 + 1.0 / n; }
};

// Flat binary layout: int64 n, float64 L, int64 M (little-endian), then
// interleaved (re, im) float64 values in flat node order.

namespace detail {

inline bool host_is_little_endian() {
  const std::uint16_t probe = 1;
  return *reinterpret_cast<const unsigned char*>(&probe) == 1;
}

template <class T>
void write_le(std::ostream& os, T v) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if (!host_is_little_endian()) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T read_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("read_field: truncated input");
  if (!host_is_little_endian()) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

}  // namespace detail

inline void write_field(std::ostream& os, const Field& f) {
  detail::write_le<std::int64_t>(os, f.grid.n);
  detail::write_le<double>(os, f.grid.half_width);
  detail::write_le<std::int64_t>(os, f.grid.points);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    detail::write_le<double>(os, f.values(i).real());
    detail::write_le<double>(os, f.values(i).imag());
  }
}

inline Field read_field(std::istream& is) {
  auto n = detail::read_le<std::int64_t>(is);
  auto L = detail::read_le<double>(is);
  auto M = detail::read_le<std::int64_t>(is);
  Field f = Field::zeros(make_grid(static_cast<int>(n), L, static_cast<int>(M)));
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    double re = detail::read_le<double>(is);
    double im = detail::read_le<double>(is);
    f.values(i) = {re, im};
  }
  return f;
}

}  // namespace twistlab
