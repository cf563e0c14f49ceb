#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <twistlab/semigroup.hpp>

using namespace twistlab;
using Catch::Matchers::WithinRel;

namespace {

SpectralCoeffs random_coeffs(const Truncation& tr, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  auto c = SpectralCoeffs::zeros(tr);
  for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) c.coeffs(i) = {d(rng), d(rng)};
  return c;
}

}  // namespace

TEST_CASE("Mehler kernel at real time and the origin") {
  for (double r : {0.1, 0.5, 2.0}) {
    std::vector<cplx> z{0.0};
    cplx k = mehler_kernel(ComplexTime{r, 0.0}, z);
    double expect = std::exp(-r) / (2 * std::numbers::pi * (1 - std::exp(-2 * r)));
    CHECK_THAT(k.real(), WithinRel(expect, 1e-13));
    CHECK(std::abs(k.imag()) < 1e-16);
  }
}

TEST_CASE("Mehler kernel is 2 pi periodic in t") {
  std::vector<cplx> z{cplx(0.7, -0.4)};
  for (double t : {0.5, -1.25, 3.0}) {
    cplx a = mehler_kernel(ComplexTime{0.3, t}, z);
    cplx b = mehler_kernel(ComplexTime{0.3, t + 2 * std::numbers::pi}, z);
    CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
  }
  // exact when the shifted time reduces to the same double
  CHECK(mehler_kernel(ComplexTime{0.3, 0.5}, z) == mehler_kernel(ComplexTime{0.3, 0.5 + 8 * std::numbers::pi - 8 * std::numbers::pi}, z));
}

TEST_CASE("Mehler kernel modulus bound") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  double worst = 0.0, worst_unit = 0.0;
  for (int i = 0; i < 200; ++i) {
    std::vector<cplx> z{cplx(u(rng), u(rng))};
    worst = std::max(worst, std::abs(mehler_kernel(ComplexTime{0.1, 1.0}, z)) * std::pow(std::abs(std::sin(1.0)), 1));
    TimeGrid tg(32);
    for (double t : tg.nodes())
      worst_unit = std::max(worst_unit, std::abs(mehler_kernel(ComplexTime{0.0, t}, z)) * std::abs(std::sin(t)));
  }
  CHECK(worst <= 2.0);
  CHECK(worst_unit <= 2.0);
  CHECK(worst_unit <= 1.01 / (4 * std::numbers::pi));
}

TEST_CASE("singular complex times are rejected") {
  std::vector<cplx> z{0.0};
  CHECK_THROWS_AS(mehler_kernel(ComplexTime{0.0, 0.0}, z), singular_time_error);
  CHECK_THROWS_AS(mehler_kernel(ComplexTime{0.0, std::numbers::pi}, z), singular_time_error);
  auto g = make_grid(1, 4.0, 8);
  CHECK_THROWS_AS(evolve_kernel(Field::zeros(g), ComplexTime{0.0, 0.0}), singular_time_error);
}

TEST_CASE("spectral evolution multipliers") {
  auto tr = enumerate_pairs(1, 4);
  auto c = random_coeffs(tr, 1);
  CHECK(evolve_spectral(c, ComplexTime{0.0, 0.0}).coeffs == c.coeffs);

  auto u = evolve_spectral(c, ComplexTime{0.0, 1.234});
  for (Eigen::Index i = 0; i < c.coeffs.size(); ++i)
    CHECK_THAT(std::abs(u.coeffs(i)), WithinRel(std::abs(c.coeffs(i)), 1e-15));

  auto one = SpectralCoeffs::zeros(tr);
  one.coeffs.setOnes();
  const double r = 0.37;
  auto e = evolve_spectral(one, ComplexTime{r, 0.0});
  for (std::size_t i = 0; i < tr.size(); ++i)
    for (std::size_t j = 0; j < tr.size(); ++j) {
      double expect = std::exp(-2 * r * (tr[i].nu.order() - tr[j].nu.order()));
      CHECK_THAT(e.coeffs(i).real() / e.coeffs(j).real(), WithinRel(expect, 1e-13));
    }
}

TEST_CASE("semigroup property and periodicity in coefficient space") {
  auto tr = enumerate_pairs(1, 5);
  auto c = random_coeffs(tr, 2);
  ComplexTime a{0.2, 0.7}, b{0.1, -1.9}, ab{0.30000000000000004, 0.7 - 1.9};
  auto lhs = evolve_spectral(evolve_spectral(c, a), b);
  auto rhs = evolve_spectral(c, ab);
  CHECK((lhs.coeffs - rhs.coeffs).cwiseAbs().maxCoeff() < 1e-14 * c.coeffs.cwiseAbs().maxCoeff());

  for (double t : {0.5, -2.75, 1.0}) {
    auto p = propagate(c, t);
    auto q = propagate(c, t + 2 * std::numbers::pi);
    if (t == 0.5 || t == -2.75)
      CHECK(p.coeffs == q.coeffs);
    else
      CHECK((p.coeffs - q.coeffs).cwiseAbs().maxCoeff() < 1e-14 * c.coeffs.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("kernel path agrees with the spectral path") {
  auto tr = enumerate_pairs(1, 4);
  auto g = default_grid(1, 4, 48);
  SpectralBasis basis(tr, g);
  auto c = random_coeffs(tr, 3);
  Field f = basis.inverse(c);
  for (ComplexTime eta : {ComplexTime{0.5, 0.0}, ComplexTime{0.5, 1.1}, ComplexTime{1.0, -2.0}}) {
    Field k = evolve_kernel(f, eta);
    Field s = basis.inverse(evolve_spectral(c, eta));
    CHECK(lp_norm(Field{g, k.values - s.values}, 2) <= 1e-6 * lp_norm(f, 2));
  }
}

TEST_CASE("kernel path on the ground state and zero") {
  auto g = default_grid(1, 2, 40);
  Field f = sample_special_hermite(MultiIndexPair(0, 0), g);
  for (double r : {0.5, 1.5}) {
    Field out = evolve_kernel(f, ComplexTime{r, 0.0});
    CHECK((out.values - std::exp(-r) * f.values).cwiseAbs().maxCoeff() < 1e-6);
  }
  CHECK(evolve_kernel(Field::zeros(g), ComplexTime{0.5, 0.0}).max_abs() == 0.0);
}

TEST_CASE("propagation preserves norms") {
  auto tr = enumerate_pairs(1, 4);
  auto g = default_grid(1, 4);
  SpectralBasis basis(tr, g);
  auto c = random_coeffs(tr, 4);
  CHECK(propagate(c, 0.0).coeffs == c.coeffs);
  for (double t : {0.3, -1.7, 12.0}) CHECK_THAT(propagate(c, t).coeffs.norm(), WithinRel(c.coeffs.norm(), 1e-14));

  Field phi = basis.mode(0);
  const double t = 0.9;
  Field u = propagate(phi, t, basis);
  CHECK((u.values - std::polar(1.0, -t) * phi.values).cwiseAbs().maxCoeff() < 1e-6);
}
