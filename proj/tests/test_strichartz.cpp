#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <twistlab/strichartz.hpp>

using namespace twistlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// coefficient-space system of the given truncation modes
OrthonormalSystem modes(const Truncation& tr, const std::vector<MultiIndexPair>& pairs) {
  OrthonormalSystem s{tr, static_cast<int>(pairs.size()),
                      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(tr.size()), static_cast<Eigen::Index>(pairs.size())), 0};
  for (std::size_t j = 0; j < pairs.size(); ++j) s.coeffs(static_cast<Eigen::Index>(*tr.index_of(pairs[j])), static_cast<Eigen::Index>(j)) = 1.0;
  return s;
}

Eigen::VectorXd masses(const TimeField& rho) {
  Eigen::VectorXd m(rho.time.count);
  const auto w = rho.grid.weights();
  for (int j = 0; j < rho.time.count; ++j) m(j) = (rho.values.col(j).real().cwiseProduct(w)).sum();
  return m;
}

}  // namespace

TEST_CASE("admissible exponents") {
  CHECK(admissible_exponents(1, 2.0) == 2.0);
  CHECK(std::isinf(admissible_exponents(1, 1.0)));
  CHECK_THAT(admissible_exponents(2, 1.5), WithinRel(1.5, 1e-15));
  CHECK_THAT(admissible_exponents(1, 1.25), WithinRel(5.0, 1e-15));
  CHECK_THROWS(admissible_exponents(1, 2.5));
  CHECK_THROWS(admissible_exponents(2, 0.9));
}

TEST_CASE("sampled orthonormal systems") {
  auto tr = enumerate_pairs(1, 3);
  auto one = sample_orthonormal_system(tr, 1, 5);
  CHECK_THAT(one.coeffs.col(0).norm(), WithinAbs(1.0, 1e-14));
  for (int N : {2, 8, 16}) {
    auto s = sample_orthonormal_system(tr, N, 42);
    Eigen::MatrixXcd G = s.coeffs.adjoint() * s.coeffs;
    CHECK((G - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  CHECK(sample_orthonormal_system(tr, 4, 9).coeffs == sample_orthonormal_system(tr, 4, 9).coeffs);
  CHECK(sample_orthonormal_system(tr, 4, 9).coeffs != sample_orthonormal_system(tr, 4, 10).coeffs);
  CHECK_THROWS(sample_orthonormal_system(tr, 17, 1));
  CHECK_THROWS(sample_orthonormal_system(tr, 0, 1));
}

TEST_CASE("density of the ground state") {
  auto tr = enumerate_pairs(1, 1);
  auto g = default_grid(1, 1);
  TimeGrid tg(16);
  auto sys = modes(tr, {MultiIndexPair(0, 0)});
  auto rho = density(sys, CoefficientVector::ones(1), tg, g);
  Field phi = sample_special_hermite(MultiIndexPair(0, 0), g);
  for (int j = 0; j < tg.count; ++j)
    CHECK((rho.values.col(j) - phi.values.cwiseAbs2().cast<cplx>()).cwiseAbs().maxCoeff() < 1e-15);
  auto zero = density(sys, CoefficientVector{Eigen::VectorXcd::Zero(1)}, tg, g);
  CHECK(zero.values.isZero(0.0));
  CHECK_THROWS_AS(density(sys, CoefficientVector::ones(2), tg, g), dimension_error);
}

TEST_CASE("density mass equals the coefficient sum at every time") {
  auto tr = enumerate_pairs(1, 3);
  auto g = default_grid(1, 3);
  TimeGrid tg(24);
  auto sys = sample_orthonormal_system(tr, 6, 3);
  CoefficientVector nj{Eigen::VectorXcd(6)};
  nj.values << 1.0, 0.5, 2.0, 0.25, 3.0, 1.5;
  auto rho = density(sys, nj, tg, g);
  auto m = masses(rho);
  for (int j = 0; j < tg.count; ++j) CHECK_THAT(m(j), WithinAbs(8.25, 1e-6));
  CHECK((m.array() - m.mean()).abs().maxCoeff() <= 1e-6 * m.mean());
  // positivity for nonnegative coefficients
  CHECK(rho.values.real().minCoeff() >= 0.0);
  CHECK(rho.values.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-function Strichartz quotient") {
  auto tr = enumerate_pairs(1, 0);
  auto g = default_grid(1, 0);
  TimeGrid tg(16);
  SpectralBasis basis(tr, g);
  auto sys = modes(tr, {MultiIndexPair(0, 0)});
  auto q = strichartz_ratio(sys, CoefficientVector::ones(1), 2.0, 2.0, tg, basis);
  CHECK_THAT(q.ratio, WithinAbs(std::sqrt(0.5), 1e-3));
  CHECK(q.admissible);
  CHECK_THROWS(strichartz_ratio(sys, CoefficientVector{Eigen::VectorXcd::Zero(1)}, 2.0, 2.0, tg, basis));
  CHECK_FALSE(strichartz_ratio(sys, CoefficientVector::ones(1), 3.0, 2.0, tg, basis).admissible);
}

TEST_CASE("Strichartz quotient is scale invariant") {
  auto tr = enumerate_pairs(1, 2);
  auto g = default_grid(1, 2);
  TimeGrid tg(16);
  SpectralBasis basis(tr, g);
  auto sys = sample_orthonormal_system(tr, 5, 77);
  CoefficientVector nj{Eigen::VectorXcd(5)};
  nj.values << 0.3, 1.0, 0.2, 0.9, 0.5;
  for (double q : {1.0, 1.5, 2.0}) {
    double p = admissible_exponents(1, q);
    double a = strichartz_ratio(sys, nj, p, q, tg, basis).ratio;
    double b = strichartz_ratio(sys, CoefficientVector{3.7 * nj.values}, p, q, tg, basis).ratio;
    CHECK_THAT(b, WithinRel(a, 1e-12));
  }
}

TEST_CASE("eigenfunction systems keep the quotient bounded") {
  auto tr = enumerate_pairs(1, 19);
  auto g = default_grid(1, 19, 112);
  TimeGrid tg(16);
  SpectralBasis basis(tr, g);
  std::vector<MultiIndexPair> pairs;
  double worst = 0.0;
  for (int N = 1; N <= 20; ++N) {
    pairs.emplace_back(0, N - 1);
    auto q = strichartz_ratio(modes(tr, pairs), CoefficientVector::ones(N), 2.0, 2.0, tg, basis);
    worst = std::max(worst, q.ratio);
  }
  CHECK(std::isfinite(worst));
  CHECK(worst <= std::sqrt(0.5) * (1 + 1e-3));
}

TEST_CASE("triangle-inequality endpoint") {
  auto tr = enumerate_pairs(1, 3);
  auto g = default_grid(1, 3);
  TimeGrid tg(16);
  SpectralBasis basis(tr, g);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto sys = sample_orthonormal_system(tr, 7, seed);
    auto q = strichartz_ratio(sys, CoefficientVector::ones(7), inf, 1.0, tg, basis);
    CHECK(q.ratio <= 1 + 1e-6);
    CHECK(q.admissible);
  }
  auto eig = modes(tr, {MultiIndexPair(0, 0), MultiIndexPair(1, 2), MultiIndexPair(3, 0)});
  CHECK_THAT(strichartz_ratio(eig, CoefficientVector::ones(3), inf, 1.0, tg, basis).ratio, WithinAbs(1.0, 1e-6));
}

TEST_CASE("small sweep") {
  SweepConfig cfg;
  cfg.q_values = {1.0, 2.0};
  cfg.N_values = {1, 2, 4};
  cfg.trials = 3;
  cfg.grid_points = 32;
  cfg.time_nodes = 16;
  auto rep = sweep(cfg);
  CHECK(rep.rows.size() == 2 * 3 * 3);
  for (const auto& r : rep.rows) {
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0.0);
    CHECK_THAT(r.ratio, WithinRel(r.lhs / r.rhs, 1e-14));
  }
  CHECK(rep.summary.max_ratio.size() == 6);
  CHECK(std::isfinite(rep.summary.growth_exponent));
  auto again = sweep(cfg);
  CHECK(again.rows.back().ratio == rep.rows.back().ratio);
  cfg.trials = 0;
  CHECK_THROWS(sweep(cfg));
}
