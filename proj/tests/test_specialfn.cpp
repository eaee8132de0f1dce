#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "psifrac/specialfn.hpp"

using psifrac::ConvergenceError;
using psifrac::DomainError;
namespace sf = psifrac::specialfn;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

TEST_CASE("gamma hand values") {
  CHECK(sf::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(sf::gamma(0.5) == doctest::Approx(1.7724538509055160).epsilon(1e-13));
  CHECK(sf::gamma(1.5) == doctest::Approx(0.8862269254527580).epsilon(1e-13));
  CHECK(sf::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-13));
  // independently tabulated: Gamma(0.25), Gamma(10.3)
  CHECK(sf::gamma(0.25) == doctest::Approx(3.6256099082219083).epsilon(1e-13));
  CHECK(sf::gamma(10.3) == doctest::Approx(716430.6890623752).epsilon(1e-12));
  // negative non-integer argument via reflection: Gamma(-0.5) = -2 sqrt(pi)
  CHECK(sf::gamma(-0.5) == doctest::Approx(-3.5449077018110320).epsilon(1e-12));
}

TEST_CASE("gamma errors") {
  CHECK_THROWS_AS(sf::gamma(0.0), DomainError);
  CHECK_THROWS_AS(sf::gamma(-3.0), DomainError);
  CHECK_THROWS_AS(sf::gamma(200.0), DomainError);
  CHECK_THROWS_AS(sf::gamma(std::nan("")), DomainError);
}

TEST_CASE("gamma recurrence on random points") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(0.1, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng);
    const double lhs = sf::gamma(x + 1.0);
    CHECK(std::fabs(lhs - x * sf::gamma(x)) <= 1e-12 * std::fabs(lhs));
  }
}

TEST_CASE("gamma reflection identity") {
  for (double x : {0.1, 0.2, 0.35, 0.45, 0.55, 0.7, 0.85, 0.95}) {
    const double v = sf::gamma(x) * sf::gamma(1.0 - x) * std::sin(kPi * x) / kPi;
    CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("gamma against standard library") {
  for (double x = 0.1; x <= 50.0; x += 0.37) {
    CHECK(sf::gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    CHECK(sf::log_gamma(x) ==
          doctest::Approx(std::lgamma(x)).epsilon(1e-12));
  }
}

TEST_CASE("beta function") {
  CHECK(sf::beta(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sf::beta(0.5, 0.5) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(sf::beta(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK_THROWS_AS(sf::beta(-1.0, 2.0), DomainError);
}

TEST_CASE("mittag-leffler hand values") {
  CHECK(sf::mittag_leffler(1.0, 1.0) ==
        doctest::Approx(2.7182818284590452).epsilon(1e-12));
  CHECK(sf::mittag_leffler(0.7, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  // E_{1/2}(1) = exp(1) erfc(-1) = 5.008980080762283 (erfc via series oracle)
  CHECK(sf::mittag_leffler(0.5, 1.0) ==
        doctest::Approx(5.0089800807622829).epsilon(1e-10));
  // E_2(1) = cosh(1)
  CHECK(sf::mittag_leffler(2.0, 1.0) ==
        doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
}

TEST_CASE("mittag-leffler matches exp for alpha=1") {
  for (double z = -5.0; z <= 5.0; z += 0.25)
    CHECK(sf::mittag_leffler(1.0, z) ==
          doctest::Approx(std::exp(z)).epsilon(1e-10));
}

TEST_CASE("three-parameter series") {
  // E^2_{1,1}(z) = (1+z) e^z
  const double z = 0.8;
  CHECK(sf::mittag_leffler(sf::MLParams{1.0, 1.0, 2.0}, z) ==
        doctest::Approx((1.0 + z) * std::exp(z)).epsilon(1e-12));
  // E^1_{1,2}(z) = (e^z - 1)/z
  CHECK(sf::mittag_leffler(sf::MLParams{1.0, 2.0, 1.0}, z) ==
        doctest::Approx(std::expm1(z) / z).epsilon(1e-12));
  // gamma_p = 0 collapses to 1/Gamma(beta)
  CHECK(sf::mittag_leffler(sf::MLParams{0.6, 1.7, 0.0}, z) ==
        doctest::Approx(1.0 / sf::gamma(1.7)).epsilon(1e-13));
}

TEST_CASE("error-estimate monotone in tolerance") {
  const double z = 3.2;
  double prev = 1e300;
  for (double tol : {1e-6, 1e-8, 1e-10, 1e-12, 1e-14}) {
    const auto r = sf::ml_series(sf::MLParams{0.5, 1.0, 1.0}, z, tol);
    CHECK(r.err_est <= prev + 1e-300);
    prev = r.err_est;
  }
}

TEST_CASE("mittag-leffler domain errors") {
  CHECK_THROWS_AS(sf::mittag_leffler(-0.5, 1.0), DomainError);
  CHECK_THROWS_AS(sf::mittag_leffler(0.5, 100.0), DomainError);
}
