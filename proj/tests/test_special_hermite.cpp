#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include <twistlab/grid.hpp>
#include <twistlab/special_hermite.hpp>

using namespace twistlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// The defining integral (2 pi)^{-1/2} int e^{i x xi} h_a(xi + y/2) h_b(xi - y/2) dxi
// by adaptive quadrature on the real line.
cplx defining_integral(int a, int b, cplx zeta) {
  const double x = zeta.real(), y = zeta.imag();
  boost::math::quadrature::sinh_sinh<double> integrator;
  auto part = [&](bool imag) {
    return integrator.integrate([&](double xi) {
      double hh = hermite_1d(a, xi + 0.5 * y) * hermite_1d(b, xi - 0.5 * y);
      return hh * (imag ? std::sin(x * xi) : std::cos(x * xi));
    });
  };
  return cplx(part(false), part(true)) / std::sqrt(2 * std::numbers::pi);
}

}  // namespace

TEST_CASE("Phi_00 closed form") {
  std::vector<cplx> z0{0.0};
  CHECK_THAT(special_hermite(MultiIndexPair(0, 0), z0).real(), WithinRel(0.3989422804014327, 1e-14));
  std::vector<cplx> z2{2.0};
  cplx v = special_hermite(MultiIndexPair(0, 0), z2);
  CHECK_THAT(v.real(), WithinRel(std::exp(-1.0) / std::sqrt(2 * std::numbers::pi), 1e-13));
  CHECK(std::abs(v.imag()) < 1e-15);
}

TEST_CASE("special Hermite values match the defining integral") {
  for (auto [a, b] : {std::pair{1, 0}, {0, 1}, {2, 3}, {5, 5}, {7, 2}})
    for (cplx z : {cplx(0.7, 0.3), cplx(-1.4, 2.2), cplx(0.0, -0.9)}) {
      std::vector<cplx> zv{z};
      cplx got = special_hermite(MultiIndexPair(a, b), zv);
      cplx ref = defining_integral(a, b, z);
      CHECK(std::abs(got - ref) < 1e-12);
    }
}

TEST_CASE("quadrature order below 2k + 20 is rejected") {
  std::vector<cplx> z{0.1};
  CHECK_THROWS_AS(special_hermite(MultiIndexPair(3, 1), z, 25), quadrature_order_error);
  CHECK_NOTHROW(special_hermite(MultiIndexPair(3, 1), z, 26));
  CHECK_THROWS_AS(SpecialHermiteEvaluator(4, 10), quadrature_order_error);
}

TEST_CASE("coordinate factorization") {
  std::vector<cplx> z{cplx(0.4, -0.2), cplx(-1.1, 0.5)};
  MultiIndexPair p(MultiIndex({2, 1}), MultiIndex({0, 3}));
  cplx full = special_hermite(p, z);
  std::vector<cplx> z1{z[0]}, z2{z[1]};
  cplx prod = special_hermite(MultiIndexPair(2, 0), z1) * special_hermite(MultiIndexPair(1, 3), z2);
  CHECK(std::abs(full - prod) <= 1e-10 * std::abs(prod));
}

TEST_CASE("Phi_mumu at the origin is real") {
  std::vector<cplx> z{0.0};
  for (int m = 0; m <= 8; ++m) CHECK(std::abs(special_hermite(MultiIndexPair(m, m), z).imag()) < 1e-10);
}

TEST_CASE("far points return zero without error") {
  std::vector<cplx> z{cplx(80.0, 10.0)};
  CHECK(special_hermite(MultiIndexPair(3, 2), z) == cplx(0.0));
}

TEST_CASE("phi_k values") {
  std::vector<cplx> z0{0.0};
  CHECK_THAT(phi_k(0, z0).real(), WithinRel(1.0, 1e-14));
  for (cplx z : {cplx(0.3, 0.4), cplx(-2.0, 1.0)}) {
    std::vector<cplx> zv{z};
    CHECK_THAT(phi_k(0, zv).real(), WithinRel(std::exp(-0.25 * std::norm(z)), 1e-13));
  }
  // n = 2, k = 2: three multi-indices nu with |nu| = 2
  std::vector<cplx> zz{0.0, 0.0};
  cplx sum = 0.0;
  for (auto nu : {MultiIndex({2, 0}), MultiIndex({1, 1}), MultiIndex({0, 2})})
    sum += special_hermite(MultiIndexPair(nu, nu), zz);
  CHECK(std::abs(phi_k(2, zz) - 2 * std::numbers::pi * sum) < 1e-13);
}

TEST_CASE("phi_k sum agrees with the Laguerre form") {
  for (int n : {1, 2})
    for (int k = 0; k <= 6; ++k)
      for (double r : {0.0, 0.8, 2.5}) {
        std::vector<cplx> z(n, cplx(r / std::sqrt(2.0 * n), r / std::sqrt(2.0 * n)));
        CHECK(std::abs(phi_k(k, z) - phi_k_laguerre(k, z)) < 1e-11);
      }
}

TEST_CASE("Gram matrix of Truncation(1, 8) on the default grid") {
  auto tr = enumerate_pairs(1, 8);
  auto g = default_grid(1, 8);
  Eigen::MatrixXcd B = sample_basis(tr, g);
  Eigen::MatrixXcd G = B.adjoint() * g.weights().cast<cplx>().asDiagonal() * B;
  double err = (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  CHECK(err <= 1e-6);
}

TEST_CASE("sample_basis matches pointwise evaluation") {
  auto tr = enumerate_pairs(1, 3);
  auto g = make_grid(1, 6.0, 10);
  Eigen::MatrixXcd B = sample_basis(tr, g);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    Field f = sample_special_hermite(tr[i], g);
    CHECK((B.col(static_cast<Eigen::Index>(i)) - f.values).cwiseAbs().maxCoeff() < 1e-14);
  }
}
