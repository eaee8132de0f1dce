#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "psifrac/oracles.hpp"
#include "psifrac/specialfn.hpp"

using namespace psifrac;
using operators::OrderSpec;
using operators::Side;

namespace {
// independently tabulated gamma values, 20 digits
constexpr double kGamma_1_5 = 0.88622692545275801365;
constexpr double kGamma_2_5 = 1.32934038817913702047;
constexpr double kGamma_0_25 = 3.62560990822190831193;
}  // namespace

TEST_CASE("power integral closed form") {
  const auto id01 = psi::make_identity(0.0, 1.0);
  const auto id02 = psi::make_identity(0.0, 2.0);
  CHECK(oracles::power_integral(id01, 0.5, 1.0, Side::kLeft, 1.0) ==
        doctest::Approx(1.0 / kGamma_1_5).epsilon(1e-14));
  CHECK(oracles::power_integral(id01, 0.5, 1.0, Side::kLeft, 1.0) ==
        doctest::Approx(1.1283791670955126).epsilon(1e-14));
  CHECK(oracles::power_integral(id02, 1.0, 1.0, Side::kLeft, 2.0) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(oracles::power_integral(id01, 1.0, 2.0, Side::kLeft, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // right side mirrors the width
  CHECK(oracles::power_integral(id01, 0.5, 1.0, Side::kRight, 0.0) ==
        doctest::Approx(1.1283791670955126).epsilon(1e-14));
  // alpha -> 1, delta = 1 integrates the constant 1
  for (double x : {0.2, 0.5, 0.9})
    CHECK(std::fabs(oracles::power_integral(id01, 1.0, 1.0, Side::kLeft, x) -
                    x) <= 1e-12);
  CHECK_THROWS_AS(oracles::power_integral(id01, 0.5, 0.0, Side::kLeft, 1.0),
                  DomainError);
}

TEST_CASE("power derivative closed form") {
  const auto id = psi::make_identity(0.0, 1.0);
  const auto id5 = psi::make_identity(0.0, 5.0);
  const auto lg = psi::make_log(1.0, std::exp(1.0));
  const auto half = OrderSpec::make(0.5, 0.0);
  CHECK(oracles::power_derivative(id, half, 3.0, Side::kLeft, 1.0) ==
        doctest::Approx(2.0 / kGamma_2_5).epsilon(1e-14));
  CHECK(oracles::power_derivative(id, half, 3.0, Side::kLeft, 1.0) ==
        doctest::Approx(1.5045055561273500).epsilon(1e-14));
  CHECK(oracles::power_derivative(id5, OrderSpec::make(1.0, 0.0), 2.0,
                                  Side::kLeft, 5.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(oracles::power_derivative(lg, half, 3.0, Side::kLeft, std::exp(1.0)) ==
        doctest::Approx(1.5045055561273500).epsilon(1e-14));
  // the closed form does not depend on the type parameter
  for (double beta : {0.0, 0.3, 0.7, 1.0})
    CHECK(oracles::power_derivative(id, OrderSpec::make(0.5, beta), 3.0,
                                    Side::kLeft, 0.6) ==
          oracles::power_derivative(id, half, 3.0, Side::kLeft, 0.6));
  CHECK_THROWS_AS(oracles::power_derivative(id, half, 1.0, Side::kLeft, 1.0),
                  DomainError);
}

TEST_CASE("eigenfunction oracle") {
  const auto id = psi::make_identity(0.0, 1.0);
  CHECK(oracles::ml_eigen(id, 1.0, 1.0, 1.0) ==
        doctest::Approx(2.7182818284590452).epsilon(1e-13));
  CHECK(oracles::ml_eigen(id, 0.7, 0.5, 0.0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(oracles::ml_eigen(id, 0.5, 1.0, 1.0) ==
        doctest::Approx(5.0089800807622829).epsilon(1e-12));
  CHECK_THROWS_AS(oracles::ml_eigen(id, 0.5, -1.0, 0.5), DomainError);
  CHECK_THROWS_AS(oracles::ml_eigen(id, 1.5, 1.0, 0.5), DomainError);
}

TEST_CASE("norm bound constant") {
  const auto id = psi::make_identity(0.0, 1.0);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(oracles::bound_constant(id, OrderSpec::make(0.5, 0.0)) == inf);
  CHECK(oracles::bound_constant(id, OrderSpec::make(0.5, 1.0)) == inf);
  // alpha = 0.5, beta = 0.5: n = 1, gamma = 0.75,
  // K = 1 / (0.25 * 0.25 * Gamma(0.25)^2)
  const double expect = 16.0 / (kGamma_0_25 * kGamma_0_25);
  CHECK(oracles::bound_constant(id, OrderSpec::make(0.5, 0.5)) ==
        doctest::Approx(expect).epsilon(1e-13));
  CHECK(oracles::bound_constant(id, OrderSpec::make(0.5, 0.5)) ==
        doctest::Approx(1.2171884777994833).epsilon(1e-12));
  // width scaling: doubling the interval scales K by 2^(n-alpha)
  const auto id2 = psi::make_identity(0.0, 2.0);
  CHECK(oracles::bound_constant(id2, OrderSpec::make(0.5, 0.5)) ==
        doctest::Approx(std::pow(2.0, 0.5) * expect).epsilon(1e-13));
}
