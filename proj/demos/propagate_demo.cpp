// Propagates a random band-limited datum under e^{-itL} in C^1 and prints,
// per time node, its L^2 norm and the density of a small orthonormal system.

#include <cstdio>
#include <random>

#include <twistlab.hpp>

using namespace twistlab;

int main() {
  const Truncation tr(1, 4);
  const GridSpec grid = default_grid(1, 4, 48);
  const SpectralBasis basis(tr, grid);
  const TimeGrid tg(8);

  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  auto c = SpectralCoeffs::zeros(tr);
  for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) c.coeffs(i) = {gauss(rng), gauss(rng)};
  c.coeffs /= c.coeffs.norm();

  const auto sys = sample_orthonormal_system(tr, 5, 7);
  const auto nj = CoefficientVector::ones(5);
  const TimeField rho = density(sys, nj, tg, basis);
  const Eigen::VectorXd w = grid.weights();

  std::printf("%8s %14s %14s %14s\n", "t", "||u(t)||_2", "mass(rho)", "max rho");
  for (int j = 0; j < tg.count; ++j) {
    const double t = tg.node(j);
    const Field u = basis.inverse(propagate(c, t));
    const double mass = rho.values.col(j).real().dot(w);
    std::printf("%8.4f %14.10f %14.10f %14.6e\n", t, lp_norm(u, 2.0), mass, rho.values.col(j).real().maxCoeff());
  }

  for (double q : {1.0, 1.5, 2.0}) {
    const double p = admissible_exponents(1, q);
    const auto s = strichartz_ratio(sys, nj, p, q, tg, basis);
    std::printf("q = %.2f  p = %6.2f  Strichartz quotient = %.6f\n", q, p, s.ratio);
  }
  return 0;
}
