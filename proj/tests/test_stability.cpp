#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "dfc/error.hpp"
#include "dfc/gains.hpp"
#include "dfc/spectrum.hpp"
#include "dfc/stability.hpp"
#include "oracles.hpp"

using dfc::GainScheme;
using dfc::GainVector;
using dfc::Polynomial;

namespace {

double rho(int n, int t, const GainVector& a, double mu) {
  return oracle::eigen_spectral_radius(dfc::char_poly_closed(n, t, a, mu));
}

// Oracle for the lower endpoint: plain bisection on the Eigen spectral radius.
double oracle_lower_endpoint(int n, int t, const GainVector& a, double far) {
  double in = 0.0, out = far;
  REQUIRE(rho(n, t, a, out) > 1.0);
  while (in - out > 1e-9) {
    const double mid = 0.5 * (in + out);
    (rho(n, t, a, mid) < 1.0 ? in : out) = mid;
  }
  return 0.5 * (in + out);
}

}  // namespace

TEST_SUITE("stability") {

TEST_CASE("Jury examples") {
  CHECK(dfc::jury_stable(Polynomial{-0.5, 1}));
  CHECK_FALSE(dfc::jury_stable(Polynomial{1, 1, 1}));
  CHECK_FALSE(dfc::jury_stable(Polynomial{-1.5, 1}));
  CHECK(dfc::jury_test(Polynomial{-1.5, 1}) == dfc::JuryVerdict::Unstable);
  CHECK(dfc::jury_stable(Polynomial{0.25, 0, 1}));
  CHECK(dfc::jury_stable(Polynomial{0.5, -1}));  // sign normalized
  // Uniform N = 3 at mu = -1 and mu = -4.
  CHECK(dfc::jury_stable(Polynomial{1.0 / 3, 1.0 / 3, 1.0 / 3, 1}));
  CHECK_FALSE(dfc::jury_stable(Polynomial{4.0 / 3, 4.0 / 3, 4.0 / 3, 1}));
}

TEST_CASE("spectral radius examples") {
  CHECK(dfc::spectral_radius(Polynomial{-0.25, 0, 1}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(dfc::spectral_radius(Polynomial{1, 1, 1}) == doctest::Approx(1.0).epsilon(1e-14));
  for (double mu : {-3.0, -0.2, 0.0, 0.7, 2.5}) {
    CHECK(dfc::spectral_radius(Polynomial{-mu, 1}) == doctest::Approx(std::abs(mu)).epsilon(1e-15));
  }
}

TEST_CASE("stability report") {
  const auto stable = dfc::analyze_stability(dfc::char_poly_closed(3, 1, dfc::gains_uniform(3), -2.0));
  CHECK(stable.schur_stable);
  CHECK(stable.jury_verdict);
  CHECK_FALSE(stable.marginal);
  CHECK(stable.roots.size() == 3);

  const auto edge = dfc::analyze_stability(dfc::char_poly_closed(2, 1, dfc::gains_uniform(2), -2.0));
  CHECK_FALSE(edge.schur_stable);
  CHECK(edge.marginal);
  CHECK(edge.spectral_radius == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: Jury agrees with root moduli") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> deg(1, 12);
  std::uniform_real_distribution<double> radius(0.1, 1.6), angle(0.0, std::numbers::pi), coin(0.0, 1.0);
  int checked = 0, stable_count = 0;
  while (checked < 1000) {
    const int n = deg(rng);
    std::vector<std::complex<double>> roots;
    while (static_cast<int>(roots.size()) < n) {
      const double r = radius(rng);
      if (n - static_cast<int>(roots.size()) >= 2 && coin(rng) < 0.5) {
        const auto z = std::polar(r, angle(rng));
        roots.push_back(z);
        roots.push_back(std::conj(z));
      } else {
        roots.emplace_back(coin(rng) < 0.5 ? r : -r);
      }
    }
    // Shrink half of the samples into the disc so both verdicts are common.
    if (coin(rng) < 0.5) {
      for (auto& z : roots) z *= 0.6;
    }
    const Polynomial p = oracle::from_roots(roots);
    const double r = oracle::eigen_spectral_radius(p);
    if (std::abs(r - 1.0) <= 1e-6) continue;
    ++checked;
    stable_count += r < 1.0;
    REQUIRE(dfc::jury_stable(p) == (r < 1.0));
  }
  CHECK(stable_count > 200);
  CHECK(stable_count < 800);
}

TEST_CASE("gain schemes") {
  CHECK(dfc::gains_uniform(1).a(1) == 1.0);
  const auto u3 = dfc::gains_uniform(3);
  for (std::size_t j = 1; j <= 3; ++j) CHECK(u3.a(j) == doctest::Approx(1.0 / 3).epsilon(1e-15));

  CHECK(std::abs(dfc::gains_dk2013(1).a(1) - 1.0) <= 1e-15);
  const auto d2 = dfc::gains_dk2013(2);
  CHECK(std::abs(d2.a(1) - 2.0 / 3) <= 1e-12);
  CHECK(std::abs(d2.a(2) - 1.0 / 3) <= 1e-12);

  for (int n = 1; n <= 50; ++n) {
    for (auto scheme : {GainScheme::Uniform, GainScheme::Dk2013}) {
      const auto g = dfc::make_gains(scheme, n);
      double s = 0.0;
      for (double x : g.coeffs()) s += x;
      REQUIRE(g.size() == static_cast<std::size_t>(n));
      CHECK(std::abs(s - 1.0) <= 1e-9);
    }
  }
  CHECK(dfc::parse_gain_scheme("dk2013") == GainScheme::Dk2013);
  CHECK(dfc::to_string(GainScheme::Uniform) == "uniform");
  CHECK_THROWS_AS(dfc::parse_gain_scheme("optimal"), dfc::DomainError);
  CHECK_THROWS(dfc::make_gains(GainScheme::Custom, 3));
}

TEST_CASE("gamma for T = 1") {
  CHECK(std::abs(dfc::gamma_t1(dfc::gains_uniform(3)) + 3.0) <= 1e-6);
  CHECK(std::abs(dfc::gamma_t1(GainVector({1.0})) + 1.0) <= 1e-6);
  for (int n = 1; n <= 8; ++n) CHECK(std::abs(dfc::gamma_t1(dfc::gains_uniform(n)) + n) <= 1e-6);
  CHECK(dfc::gamma_t1(dfc::gains_dk2013(3)) < -3.0);
  CHECK_THROWS_AS(dfc::gamma_t1(dfc::gains_uniform(3), 100), dfc::DomainError);
}

TEST_CASE("unit-circle multipliers contain the interval endpoints") {
  for (int n = 1; n <= 5; ++n) {
    const auto mus = dfc::unit_circle_multipliers(n, 1, dfc::gains_uniform(n));
    REQUIRE_FALSE(mus.empty());
    CHECK(mus.back() == doctest::Approx(1.0));
    bool has_minus_n = false;
    for (double m : mus) has_minus_n |= std::abs(m + n) <= 1e-8;
    CHECK(has_minus_n);
  }
}

TEST_CASE("stable mu intervals") {
  const auto i4 = dfc::stable_mu_interval(4, 1, dfc::gains_uniform(4), GainScheme::Uniform);
  CHECK(std::abs(i4.lo + 4.0) <= 1e-4);
  CHECK(std::abs(i4.hi - 1.0) <= 1e-4);
  CHECK(i4.scheme == GainScheme::Uniform);
  CHECK(i4.touches.empty());

  const auto i1 = dfc::stable_mu_interval(1, 1, GainVector({1.0}));
  CHECK(std::abs(i1.lo + 1.0) <= 1e-6);
  CHECK(std::abs(i1.hi - 1.0) <= 1e-6);

  // No closed form for T = 2; compare with an independent bisection.
  const auto a = dfc::gains_uniform(2);
  const auto i22 = dfc::stable_mu_interval(2, 2, a, GainScheme::Uniform);
  CHECK(std::abs(i22.lo - oracle_lower_endpoint(2, 2, a, -50.0)) <= 1e-6);
  CHECK(std::abs(i22.hi - 1.0) <= 1e-6);
  CHECK(i22.lo < i22.hi);
  CHECK(dfc::scan_mu_interval(i22, a, -10.0, 2001).connected);
}

TEST_CASE("property: uniform boundary exactness") {
  for (int n = 1; n <= 8; ++n) {
    const auto a = dfc::gains_uniform(n);
    CHECK(std::abs(rho(n, 1, a, -n) - 1.0) <= 1e-9);
    CHECK(rho(n, 1, a, -n + 0.05) < 1.0);
    CHECK(rho(n, 1, a, -n - 0.05) > 1.0);
    CHECK(std::abs(dfc::spectral_radius(dfc::char_poly_closed(n, 1, a, -n)) - 1.0) <= 1e-9);
  }
}

TEST_CASE("property: mu >= 1 is never Schur stable") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> m(1.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + i % 6, t = 1 + (i / 6) % 3;
    const GainVector a(oracle::simplex_point(rng, n));
    const double mu = i % 10 == 0 ? 1.0 : m(rng);
    const auto p = dfc::char_poly_closed(n, t, a, mu);
    CHECK(std::abs(p(1.0) - (1.0 - mu)) <= 1e-12);
    CHECK_FALSE(dfc::analyze_stability(p).schur_stable);
  }
}

TEST_CASE("property: dk2013 dominance over uniform gains") {
  for (int n = 2; n <= 10; ++n) {
    const auto uni = dfc::stable_mu_interval(n, 1, dfc::gains_uniform(n), GainScheme::Uniform);
    const auto dk = dfc::stable_mu_interval(n, 1, dfc::gains_dk2013(n), GainScheme::Dk2013);
    CHECK(std::abs(uni.lo + n) <= 1e-4);
    CHECK(dk.lo < uni.lo);
    CHECK(dk.hi == doctest::Approx(1.0).epsilon(1e-6));
    // Every touch is a genuine unit-circle contact with the rest of the spectrum inside.
    for (double mu : dk.touches) {
      CHECK(std::abs(rho(n, 1, dfc::gains_dk2013(n), mu) - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("dk2013 interval matches an independent bisection") {
  for (int n : {2, 3, 5}) {
    const auto a = dfc::gains_dk2013(n);
    const auto got = dfc::stable_mu_interval(n, 1, a, GainScheme::Dk2013);
    CHECK(std::abs(got.lo - oracle_lower_endpoint(n, 1, a, -1000.0)) <= 1e-6);
  }
}

TEST_CASE("minimum N") {
  CHECK(dfc::min_N_to_stabilize(1, -2.0, GainScheme::Uniform, 20) == 3);
  CHECK(dfc::min_N_to_stabilize(1, 0.5, GainScheme::Uniform, 20) == 1);
  CHECK_FALSE(dfc::min_N_to_stabilize(1, 1.0, GainScheme::Uniform, 20).has_value());
  CHECK_FALSE(dfc::min_N_to_stabilize(1, 4.0, GainScheme::Dk2013, 20).has_value());
  CHECK_FALSE(dfc::min_N_to_stabilize(1, -30.0, GainScheme::Uniform, 5).has_value());

  const auto uni = dfc::min_N_to_stabilize(1, -10.0, GainScheme::Uniform, 40);
  const auto dk = dfc::min_N_to_stabilize(1, -10.0, GainScheme::Dk2013, 40);
  REQUIRE(uni.has_value());
  REQUIRE(dk.has_value());
  CHECK(*uni == 11);
  CHECK(*dk <= *uni);
  MESSAGE("min N at mu = -10: uniform " << *uni << ", dk2013 " << *dk);
}

TEST_CASE("property: monotone coverage for uniform gains") {
  for (double mu : {-1.5, -2.5, -7.5}) {
    CHECK(dfc::min_N_to_stabilize(1, mu, GainScheme::Uniform, 20) ==
          static_cast<int>(std::floor(std::abs(mu))) + 1);
  }
}

}  // TEST_SUITE

TEST_SUITE("stability") {

// Uniform gains for T = 2 have no closed form. Record the lower endpoints;
// only monotonicity in N is asserted.
TEST_CASE("experiment: uniform gains with T = 2") {
  double prev = 0.0;
  std::string line;
  for (int n = 1; n <= 8; ++n) {
    const auto iv = dfc::stable_mu_interval(n, 2, dfc::gains_uniform(n), GainScheme::Uniform);
    CHECK(iv.lo <= prev + 1e-9);
    prev = iv.lo;
    line += " N=" + std::to_string(n) + ":" + std::to_string(iv.lo);
  }
  MESSAGE("uniform T=2 lower endpoints:" << line);
  const auto dk = dfc::min_N_to_stabilize(2, -4.0, GainScheme::Dk2013, 30);
  const auto uni = dfc::min_N_to_stabilize(2, -4.0, GainScheme::Uniform, 30);
  MESSAGE("min N at T=2, mu=-4: dk2013 " << (dk ? std::to_string(*dk) : "none") << ", uniform "
                                         << (uni ? std::to_string(*uni) : "none"));
}

}  // TEST_SUITE
