#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/zeta.hpp>

#include <twistlab/singularity.hpp>

using namespace twistlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ProbeConfig probe(cplx z, double tau, std::vector<double> t = {}) {
  ProbeConfig c;
  c.z = z;
  c.tau = tau;
  c.t_samples = std::move(t);
  return c;
}

cplx geometric(double tau, double t) {
  cplx q = std::exp(-cplx(tau, t));
  return q / (1.0 - q);
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS(abel_sum(probe(-1.0, 1e-3), 0.1));
  CHECK_THROWS(abel_sum(probe(0.2, 1e-3), 0.1));
  CHECK_THROWS(abel_sum(probe(-0.5, 0.0), 0.1));
  auto c = probe(-0.5, 1e-3);
  c.k_cut = 100;
  CHECK_THROWS(abel_sum(c, 0.1));
  CHECK_THROWS(remainder_profile(probe(-0.5, 1e-3, {0.1, 0.0})));
  CHECK(std::exp(-1e-3 * probe(-0.5, 1e-3).cutoff()) < 1e-10);
}

TEST_CASE("z = 0 reduces to the geometric series") {
  for (double tau : {1e-2, 1e-3})
    for (double t : {0.05, 0.7, -2.0, std::numbers::pi}) {
      cplx got = abel_sum(probe(0.0, tau), t);
      CHECK(std::abs(got - geometric(tau, t)) < 1e-12 * std::max(1.0, std::abs(got)));
    }
}

TEST_CASE("doubling the cutoff does not move the sum") {
  auto c = probe(-0.5, 1e-4);
  cplx a = abel_sum(c, 0.05);
  c.k_cut = 2 * c.cutoff();
  CHECK(std::abs(abel_sum(c, 0.05) - a) < 1e-9 * std::abs(a));
}

TEST_CASE("Abel sum minus the singular term tends to zeta(-z)") {
  // sum k^z e^{-sk} = Gamma(z+1) s^{-z-1} + zeta(-z) + O(s)
  for (double zr : {-0.5, -0.25}) {
    const double zeta = boost::math::zeta(-zr);
    auto c = probe(zr, 1e-5);
    for (double t : {0.002, 0.005}) {
      cplx b = abel_sum(c, t) - singular_term(zr, t, c.tau);
      CHECK(std::abs(b - zeta) < 0.01);
    }
  }
  CHECK_THAT(boost::math::zeta(0.5), WithinRel(-1.4603545088095868, 1e-14));
}

TEST_CASE("Abel sum near t = pi stays bounded") {
  for (double tau : {1e-3, 1e-4, 1e-5}) CHECK(std::abs(abel_sum(probe(-0.5, tau), std::numbers::pi)) <= 10.0);
}

TEST_CASE("singular term values") {
  for (double t : {0.3, -1.2}) {
    cplx s = singular_term(0.0, t, 1e-14);
    CHECK(std::abs(s - 1.0 / cplx(0.0, t)) < 1e-12);
  }
  CHECK_THAT(std::abs(singular_term(-0.5, 0.01, 0.0)), WithinAbs(17.7245, 1e-4));
  CHECK_THAT(std::abs(singular_term(-0.5, 0.01, 0.0)), WithinRel(std::sqrt(std::numbers::pi) / 0.1, 1e-13));
  for (cplx z : {cplx(-0.5, 0.3), cplx(-0.25, -1.0)}) {
    cplx a = singular_term(z, -0.4, 1e-3);
    cplx b = std::conj(singular_term(std::conj(z), 0.4, 1e-3));
    CHECK(std::abs(a - b) < 1e-13 * std::abs(a));
  }
  CHECK_THROWS(singular_term(-0.5, 0.0, 0.0));
}

TEST_CASE("remainder profile") {
  std::vector<double> ts;
  for (double t = 0.2; t <= std::numbers::pi - 0.2; t += 0.1) ts.push_back(t);
  auto p4 = remainder_profile(probe(-0.5, 1e-4, ts));
  auto p5 = remainder_profile(probe(-0.5, 1e-5, ts));
  CHECK(std::isfinite(p4.sup_abs));
  CHECK(std::abs(p4.sup_abs - p5.sup_abs) < 0.1 * p5.sup_abs);
  CHECK(std::isfinite(p4.max_second_difference));

  auto g = remainder_profile(probe(0.0, 1e-3, ts));
  for (const auto& s : g.samples) CHECK(std::abs(s.remainder - (geometric(1e-3, s.t) - 1.0 / cplx(1e-3, s.t))) < 1e-10);
}

TEST_CASE("remainder stays bounded while the singular term blows up") {
  auto ts = geometric_samples(0.01, 0.3, 12);
  auto prof = remainder_profile(probe(-0.5, 1e-4, ts));
  std::vector<double> mod;
  for (const auto& s : prof.samples) mod.push_back(std::abs(s.singular));
  CHECK_THAT(loglog_slope(ts, mod), WithinAbs(-0.5, 0.05));
  CHECK(prof.sup_abs < 2 * std::abs(boost::math::zeta(0.5)));
}

TEST_CASE("Abel consistency in tau") {
  for (double t : {0.05, 0.2, 1.0, 2.5}) {
    cplx a = abel_sum(probe(-0.5, 1e-4), t);
    cplx b = abel_sum(probe(-0.5, 5e-5), t);
    CHECK(std::abs(a - b) / std::abs(b) <= 0.01);
  }
}

TEST_CASE("singular term dominates the Abel sum for small t") {
  for (double zr : {-0.5, -0.25})
    for (double t : {0.01, 0.02, 0.03, 0.04, 0.05}) {
      const double ratio = std::abs(abel_sum(probe(zr, 1e-4), t)) / std::abs(singular_term(zr, t, 1e-4));
      INFO("z = " << zr << ", t = " << t << ", ratio = " << ratio);
      CHECK(ratio >= 0.9);
      CHECK(ratio <= 1.1);
    }
}

TEST_CASE("H-kernel singularity rate") {
  auto ts = geometric_samples(0.01, 0.3, 10);
  std::vector<cplx> u{cplx(0.3, -0.2)}, w{cplx(-0.1, 0.4)};
  for (double zr : {-0.25, -0.5, -1.0, -1.5, -2.0}) {
    INFO("z = " << zr);
    CHECK_THAT(h_kernel_rate(zr, u, w, ts), WithinAbs(-(zr + 1 + 1), 0.1));
  }
  std::vector<double> few{0.1, 0.2, 0.3};
  CHECK_THROWS(h_kernel_rate(-0.5, u, w, few));
  std::vector<double> bad{0.1, 0.2, 0.3, 0.7};
  CHECK_THROWS(h_kernel_rate(-0.5, u, w, bad));
}
