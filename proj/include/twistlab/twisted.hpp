#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "errors.hpp"
#include "grid.hpp"
#include "multi_index.hpp"
#include "special_hermite.hpp"

namespace twistlab {

/// Summation strategy for twisted convolution.
enum class ConvolutionPath {
  direct,          ///< phase e^{(i/2) Im(zeta . conj w)} evaluated per term
  phase_factored,  ///< phase split into per-coordinate tables
};

/// Values of a function on the difference lattice {d h : |d_a| <= M - 1}
/// of a grid. Differences of two grid nodes always land on this lattice.
struct DifferenceLattice {
  GridSpec grid;
  std::vector<cplx> values;

  int extent() const { return 2 * grid.points - 1; }
  std::size_t index(std::span<const int> offsets) const {
    std::size_t idx = 0;
    for (int a = 0; a < grid.axes(); ++a) idx = idx * extent() + static_cast<std::size_t>(offsets[a] + grid.points - 1);
    return idx;
  }
  /// Tabulates g at every lattice point; g receives the point as std::vector<cplx>.
  template <class Fn>
  static DifferenceLattice tabulate(const GridSpec& grid, Fn&& g) {
    DifferenceLattice lat{grid, {}};
    const int E = lat.extent();
    const std::size_t total = detail::ipow(static_cast<std::size_t>(E), grid.axes());
    lat.values.resize(total);
    std::vector<cplx> z(grid.n);
    const double h = grid.spacing();
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rem = idx;
      std::vector<int> off(grid.axes());
      for (int a = grid.axes() - 1; a >= 0; --a) {
        off[a] = static_cast<int>(rem % E) - (grid.points - 1);
        rem /= E;
      }
      for (int j = 0; j < grid.n; ++j) z[j] = {off[2 * j] * h, off[2 * j + 1] * h};
      lat.values[idx] = g(z);
    }
    return lat;
  }
};

namespace detail {

/// Applies `mat` (rows_out x dims[axis]) along one axis of a row-major tensor.
inline std::vector<cplx> apply_along_axis(const std::vector<cplx>& in, std::vector<int>& dims, int axis,
                                          const Eigen::MatrixXd& mat) {
  std::size_t outer = 1, inner = 1;
  for (int a = 0; a < axis; ++a) outer *= dims[a];
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
  const int len = dims[axis], out_len = static_cast<int>(mat.rows());
  std::vector<cplx> out(outer * out_len * inner, cplx(0.0));
  for (std::size_t o = 0; o < outer; ++o)
    for (int r = 0; r < out_len; ++r)
      for (int c = 0; c < len; ++c) {
        double m = mat(r, c);
        if (m == 0.0) continue;
        const cplx* src = &in[(o * len + c) * inner];
        cplx* dst = &out[(o * out_len + r) * inner];
        for (std::size_t i = 0; i < inner; ++i) dst[i] += m * src[i];
      }
  dims[axis] = out_len;
  return out;
}

/// Whittaker-Shannon weights taking grid samples (half-integer multiples
/// of h) to the difference lattice (integer multiples of h). Lattice
/// points outside [-L, L] get zero rows.
inline Eigen::MatrixXd half_shift_sinc(int M) {
  const int E = 2 * M - 1, inside = M / 2 - 1;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(E, M);
  for (int r = 0; r < E; ++r) {
    int d = r - (M - 1);
    if (std::abs(d) > inside) continue;
    for (int j = 0; j < M; ++j) {
      double arg = d + 0.5 * (M - 1) - j;  // always half-integer
      S(r, j) = std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
    }
  }
  return S;
}

/// out(zeta_i) = sum_{d} table(d) nodal(i - d) w(i - d) e^{sign (i/2) Im(zeta_i . conj v)},
/// v = node i - d, summing over lattice offsets d with a nonzero table entry.
inline Field twisted_core(const Field& nodal, const DifferenceLattice& table, double sign, ConvolutionPath path) {
  const GridSpec& g = nodal.grid;
  require_same_grid(g, table.grid, "twisted convolution");
  const int A = g.axes(), M = g.points, n = g.n;

  std::vector<std::vector<int>> active;
  std::vector<cplx> active_val;
  {
    const int E = table.extent();
    double peak = 0.0;
    for (auto v : table.values) peak = std::max(peak, std::abs(v));
    for (std::size_t idx = 0; idx < table.values.size(); ++idx) {
      if (table.values[idx] == cplx(0.0) || std::abs(table.values[idx]) <= 1e-18 * peak) continue;
      std::vector<int> off(A);
      std::size_t rem = idx;
      for (int a = A - 1; a >= 0; --a) {
        off[a] = static_cast<int>(rem % E) - (M - 1);
        rem /= E;
      }
      active.push_back(std::move(off));
      active_val.push_back(table.values[idx]);
    }
  }

  Eigen::MatrixXcd phase_tab;
  if (path == ConvolutionPath::phase_factored) {
    phase_tab.resize(M, M);
    for (int a = 0; a < M; ++a)
      for (int b = 0; b < M; ++b) phase_tab(a, b) = std::polar(1.0, sign * 0.5 * g.node(a) * g.node(b));
  }

  const auto w = g.weights();
  Eigen::VectorXcd nw = nodal.values.cwiseProduct(w.cast<cplx>());
  Field out = Field::zeros(g);
  std::vector<int> ii(A), jj(A);
  std::vector<std::size_t> stride(A);
  for (int a = 0; a < A; ++a) stride[a] = g.stride(a);

  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int a = 0; a < A; ++a) ii[a] = g.axis_index(i, a);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < active.size(); ++k) {
      const auto& d = active[k];
      std::size_t jflat = 0;
      bool inside = true;
      for (int a = 0; a < A; ++a) {
        jj[a] = ii[a] - d[a];
        if (jj[a] < 0 || jj[a] >= M) {
          inside = false;
          break;
        }
        jflat += static_cast<std::size_t>(jj[a]) * stride[a];
      }
      if (!inside) continue;
      cplx ph;
      if (path == ConvolutionPath::direct) {
        double im = 0.0;
        for (int c = 0; c < n; ++c)
          im += g.node(ii[2 * c + 1]) * g.node(jj[2 * c]) - g.node(ii[2 * c]) * g.node(jj[2 * c + 1]);
        ph = std::polar(1.0, sign * 0.5 * im);
      } else {
        ph = 1.0;
        for (int c = 0; c < n; ++c)
          ph *= phase_tab(ii[2 * c + 1], jj[2 * c]) * std::conj(phase_tab(ii[2 * c], jj[2 * c + 1]));
      }
      acc += active_val[k] * nw(static_cast<Eigen::Index>(jflat)) * ph;
    }
    out.values(static_cast<Eigen::Index>(i)) = acc;
  }
  return out;
}

}  // namespace detail

/// Band-limited interpolation of a field onto the difference lattice,
/// zero outside [-L, L]^{2n}.
inline DifferenceLattice interpolate_to_lattice(const Field& f) {
  const GridSpec& g = f.grid;
  Eigen::MatrixXd S = detail::half_shift_sinc(g.points);
  std::vector<int> dims(g.axes(), g.points);
  std::vector<cplx> data(f.values.data(), f.values.data() + f.values.size());
  for (int a = 0; a < g.axes(); ++a) data = detail::apply_along_axis(data, dims, a, S);
  return DifferenceLattice{g, std::move(data)};
}

/// Twisted convolution f x g (zeta) = int f(zeta - w) g(w) e^{(i/2) Im(zeta . conj w)} dw,
/// with zeta . conj w = sum_j zeta_j conj(w_j).
///
/// f(zeta - w) is read from the band-limited interpolant of f on the
/// difference lattice, zero-extended outside the domain.
inline Field twisted_convolve(const Field& f, const Field& g, ConvolutionPath path = ConvolutionPath::direct) {
  require_same_grid(f.grid, g.grid, "twisted_convolve");
  return detail::twisted_core(g, interpolate_to_lattice(f), +1.0, path);
}

/// f x g for an analytically known second factor g, evaluated exactly
/// on the difference lattice:
///   f x g (zeta) = int f(v) g(zeta - v) e^{-(i/2) Im(zeta . conj v)} dv.
template <class Fn>
Field twisted_convolve_with(const Field& f, Fn&& g, ConvolutionPath path = ConvolutionPath::direct) {
  return detail::twisted_core(f, DifferenceLattice::tabulate(f.grid, std::forward<Fn>(g)), -1.0, path);
}

/// Special Hermite coefficients f^(mu, nu) = (f, Phi_{mu nu}) over a truncation.
struct SpectralCoeffs {
  Truncation truncation;
  Eigen::VectorXcd coeffs;

  static SpectralCoeffs zeros(const Truncation& tr) {
    return {tr, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(tr.size()))};
  }
  static SpectralCoeffs unit(const Truncation& tr, std::size_t i) {
    auto c = zeros(tr);
    c.coeffs(static_cast<Eigen::Index>(i)) = 1.0;
    return c;
  }
  /// Plancherel energy sum |c|^2.
  double energy() const { return coeffs.squaredNorm(); }
};

/// Basis samples for a (truncation, grid) pair, reused across transforms.
class SpectralBasis {
 public:
  SpectralBasis(Truncation tr, GridSpec grid)
      : tr_(std::move(tr)), grid_(grid), samples_(sample_basis(tr_, grid_)), weights_(grid_.weights()) {}

  const Truncation& truncation() const { return tr_; }
  const GridSpec& grid() const { return grid_; }
  const Eigen::MatrixXcd& samples() const { return samples_; }

  SpectralCoeffs forward(const Field& f) const {
    require_same_grid(f.grid, grid_, "forward_transform");
    Eigen::VectorXcd fw = f.values.cwiseProduct(weights_.cast<cplx>());
    return {tr_, samples_.adjoint() * fw};
  }
  Field inverse(const SpectralCoeffs& c) const {
    if (!(c.truncation == tr_)) throw dimension_error("inverse_transform: truncation mismatch");
    return Field{grid_, samples_ * c.coeffs};
  }
  Field mode(std::size_t i) const { return Field{grid_, samples_.col(static_cast<Eigen::Index>(i))}; }

 private:
  Truncation tr_;
  GridSpec grid_;
  Eigen::MatrixXcd samples_;
  Eigen::VectorXd weights_;
};

inline SpectralCoeffs forward_transform(const Field& f, const Truncation& tr) {
  return SpectralBasis(tr, f.grid).forward(f);
}

inline Field inverse_transform(const SpectralCoeffs& c, const GridSpec& grid) {
  return SpectralBasis(c.truncation, grid).inverse(c);
}

/// P_k through the coefficient route: keep modes with |nu| = k.
inline Field project_k(const Field& f, int k, const SpectralBasis& basis) {
  if (k > basis.truncation().k_max()) throw std::invalid_argument("project_k: k exceeds truncation k_max");
  auto c = basis.forward(f);
  for (std::size_t i = 0; i < c.truncation.size(); ++i)
    if (c.truncation[i].nu.order() != k) c.coeffs(static_cast<Eigen::Index>(i)) = 0.0;
  return basis.inverse(c);
}

inline Field project_k(const Field& f, int k, const Truncation& tr) { return project_k(f, k, SpectralBasis(tr, f.grid)); }

/// phi_k through one evaluator (the free phi_k builds a new rule per call).
class PhiK {
 public:
  PhiK(int k, int n) : k_(k), n_(n), eval_(k), orders_(multi_indices_of_order(n, k)) {}
  cplx operator()(std::span<const cplx> zeta) const {
    std::vector<Eigen::MatrixXcd> tabs;
    for (int j = 0; j < n_; ++j) tabs.push_back(eval_.table_1d(zeta[j]));
    cplx sum = 0.0;
    for (const auto& nu : orders_) {
      cplx t = 1.0;
      for (int j = 0; j < n_; ++j) t *= tabs[j](nu[j], nu[j]);
      sum += t;
    }
    return std::pow(2.0 * std::numbers::pi, 0.5 * n_) * sum;
  }

 private:
  int k_, n_;
  SpecialHermiteEvaluator eval_;
  std::vector<MultiIndex> orders_;
};

/// P_k through the twisted route: (2 pi)^{-n} f x phi_k.
inline Field project_k_twisted(const Field& f, int k, ConvolutionPath path = ConvolutionPath::direct) {
  PhiK phi(k, f.grid.n);
  Field out = twisted_convolve_with(f, [&](const std::vector<cplx>& z) { return phi(z); }, path);
  out.values *= std::pow(2.0 * std::numbers::pi, -f.grid.n);
  return out;
}

/// Zeroes every node within `width` of the boundary along any axis.
inline Field zero_boundary_ring(Field f, int width = 2) {
  const GridSpec& g = f.grid;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int a = 0; a < g.axes(); ++a) {
      int ia = g.axis_index(i, a);
      if (ia < width || ia >= g.points - width) {
        f.values(static_cast<Eigen::Index>(i)) = 0.0;
        break;
      }
    }
  return f;
}

/// L f with L = 1/2 sum_j (Z_j Zbar_j + Zbar_j Z_j),
/// Z_j = d/dzeta_j + zetabar_j / 2, Zbar_j = -d/dzetabar_j + zeta_j / 2, and
/// d/dzeta = d_x - i d_y, d/dzetabar = d_x + i d_y. Expanded:
///   L = sum_j [ -(d_xx + d_yy) + |zeta_j|^2 / 4 + i (y_j d_x - x_j d_y) ].
/// Fourth-order centred differences; the two-node boundary ring is set to 0.
inline Field apply_twisted_laplacian(const Field& f) {
  const GridSpec& g = f.grid;
  if (g.points < 16) throw std::invalid_argument("apply_twisted_laplacian: grid too coarse (M < 16)");
  const double h = g.spacing();
  Field out = Field::zeros(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool interior = true;
    for (int a = 0; a < g.axes() && interior; ++a) {
      int ia = g.axis_index(i, a);
      interior = ia >= 2 && ia < g.points - 2;
    }
    if (!interior) continue;
    auto at = [&](int axis, int shift) {
      return f.values(static_cast<Eigen::Index>(static_cast<long long>(i) + shift * static_cast<long long>(g.stride(axis))));
    };
    cplx acc = 0.0;
    const cplx fi = f.values(static_cast<Eigen::Index>(i));
    for (int j = 0; j < g.n; ++j) {
      const int ax = 2 * j, ay = 2 * j + 1;
      const double x = g.node(g.axis_index(i, ax)), y = g.node(g.axis_index(i, ay));
      auto d1 = [&](int axis) { return (-at(axis, 2) + 8.0 * at(axis, 1) - 8.0 * at(axis, -1) + at(axis, -2)) / (12.0 * h); };
      auto d2 = [&](int axis) {
        return (-at(axis, 2) + 16.0 * at(axis, 1) - 30.0 * fi + 16.0 * at(axis, -1) - at(axis, -2)) / (12.0 * h * h);
      };
      acc += -(d2(ax) + d2(ay)) + 0.25 * (x * x + y * y) * fi + cplx(0.0, 1.0) * (y * d1(ax) - x * d1(ay));
    }
    out.values(static_cast<Eigen::Index>(i)) = acc;
  }
  return out;
}

}  // namespace twistlab
