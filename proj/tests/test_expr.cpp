#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "psifrac/expr.hpp"
#include "psifrac/specialfn.hpp"

using namespace psifrac;
namespace e = psifrac::expr;

namespace {

double ev(const std::string& text, double x) { return e::eval(e::parse(text), x); }

// Random expression generator for the derivative fuzz suite. Stays inside
// x > 0 friendly territory: ln/sqrt arguments are shifted positive.
class Fuzzer {
 public:
  explicit Fuzzer(unsigned seed) : rng_(seed) {}

  e::NodePtr gen(int depth) {
    const int pick = depth <= 0 ? pick_int(0, 1) : pick_int(0, 9);
    switch (pick) {
      case 0:
        return e::constant(pick_real(-2.0, 2.0));
      case 1:
        return e::variable();
      case 2:
        return e::unary_minus(gen(depth - 1));
      case 3:
        return e::binary('+', gen(depth - 1), gen(depth - 1));
      case 4:
        return e::binary('-', gen(depth - 1), gen(depth - 1));
      case 5:
        return e::binary('*', gen(depth - 1), gen(depth - 1));
      case 6:  // keep denominators away from zero
        return e::binary('/', gen(depth - 1),
                         e::binary('+', e::call("cos", {gen(depth - 1)}),
                                   e::constant(2.5)));
      case 7:
        return e::call(pick_int(0, 1) ? "sin" : "cos", {gen(depth - 1)});
      case 8:
        return e::call("exp", {e::binary('*', e::constant(pick_real(-1.0, 1.0)),
                                         gen(depth - 1))});
      default:  // ln of something >= 0.5
        return e::call("ln", {e::binary('+', e::call("sin", {gen(depth - 1)}),
                                        e::constant(2.0))});
    }
  }

  double pick_real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int pick_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

 private:
  std::mt19937 rng_;
};

}  // namespace

TEST_CASE("parse and evaluate") {
  CHECK(ev("x^2 + 3*x", 2.0) == doctest::Approx(10.0));
  CHECK(ev("2^3^2", 0.0) == doctest::Approx(512.0));
  CHECK(ev("gamma(0.5)^2", 0.0) == doctest::Approx(3.14159265358979).epsilon(1e-13));
  CHECK(ev("ln(x)", 1.0) == doctest::Approx(0.0));
  CHECK(ev("mlf(1, x)", 1.0) == doctest::Approx(2.7182818284590452).epsilon(1e-12));
  CHECK(ev("-x^2", 3.0) == doctest::Approx(-9.0));
  CHECK(ev("2*-x", 3.0) == doctest::Approx(-6.0));
  CHECK(ev(" 1 + 2 * 3 ", 0.0) == doctest::Approx(7.0));
  CHECK(ev("pow(x, 3)", 2.0) == doctest::Approx(8.0));
  CHECK(ev("sqrt(x)*sin(x)+cos(x)/2", 1.0) ==
        doctest::Approx(std::sin(1.0) + std::cos(1.0) / 2.0));
  CHECK(ev("1e-3 + 2.5E2", 0.0) == doctest::Approx(250.001));
}

TEST_CASE("parse errors carry byte offsets") {
  try {
    e::parse("1 + * 2");
    FAIL("expected ParseError");
  } catch (const e::ParseError& err) {
    CHECK(err.offset() == 4);
    CHECK(std::string(err.what()).find("parse error at byte 4") == 0);
  }
  CHECK_THROWS_AS(e::parse(""), e::ParseError);
  CHECK_THROWS_AS(e::parse("foo(3)"), e::ParseError);
  CHECK_THROWS_AS(e::parse("y + 1"), e::ParseError);
  CHECK_THROWS_AS(e::parse("sin(1, 2)"), e::ParseError);
  CHECK_THROWS_AS(e::parse("(1 + 2"), e::ParseError);
  CHECK_THROWS_AS(e::parse("1 2"), e::ParseError);
}

TEST_CASE("eval domain errors") {
  CHECK_THROWS_AS(ev("sqrt(x)", -1.0), DomainError);
  CHECK_THROWS_AS(ev("ln(x)", 0.0), DomainError);
  CHECK_THROWS_AS(ev("1/x", 0.0), DomainError);
  CHECK_THROWS_AS(ev("gamma(x)", -2.0), DomainError);
  CHECK_THROWS_AS(ev("x^0.5", -4.0), DomainError);
}

TEST_CASE("symbolic derivatives, hand checks") {
  CHECK(e::eval(e::differentiate(e::parse("x^3")), 2.0) == doctest::Approx(12.0));
  CHECK(e::eval(e::differentiate(e::parse("ln(x)")), 4.0) == doctest::Approx(0.25));
  CHECK(e::eval(e::differentiate(e::parse("exp(2*x)")), 0.0) == doctest::Approx(2.0));
  CHECK(e::eval(e::differentiate(e::parse("sin(x)*cos(x)")), 0.7) ==
        doctest::Approx(std::cos(1.4)).epsilon(1e-12));
  CHECK(e::eval(e::differentiate(e::parse("x^x")), 2.0) ==
        doctest::Approx(4.0 * (std::log(2.0) + 1.0)).epsilon(1e-12));
  CHECK(e::eval(e::differentiate(e::parse("sqrt(x)")), 4.0) == doctest::Approx(0.25));
  // constant special-function subtrees differentiate to zero
  CHECK(e::eval(e::differentiate(e::parse("gamma(2.5)*x")), 1.0) ==
        doctest::Approx(specialfn::gamma(2.5)).epsilon(1e-13));
  CHECK_THROWS_AS(e::differentiate(e::parse("gamma(x)")), e::NonDifferentiableError);
  CHECK_THROWS_AS(e::differentiate(e::parse("mlf(0.5, x)")),
                  e::NonDifferentiableError);
}

TEST_CASE("fuzzed derivative vs central difference") {
  Fuzzer fz(987654);
  std::mt19937 xrng(22);
  std::uniform_real_distribution<double> xdist(-2.0, 2.0);
  int tested = 0;
  for (int i = 0; i < 200; ++i) {
    const e::NodePtr tree = fz.gen(4);
    e::NodePtr d;
    try {
      d = e::differentiate(tree);
    } catch (const e::NonDifferentiableError&) {
      continue;
    }
    for (int j = 0; j < 20; ++j) {
      const double x = xdist(xrng);
      const double h = 1e-5;
      double fd, sym;
      try {
        fd = (e::eval(tree, x + h) - e::eval(tree, x - h)) / (2.0 * h);
        sym = e::eval(d, x);
      } catch (const DomainError&) {
        continue;
      }
      if (!std::isfinite(fd) || !std::isfinite(sym) || std::fabs(fd) > 1e6)
        continue;
      ++tested;
      CHECK(std::fabs(sym - fd) <= 1e-5 * (1.0 + std::fabs(sym)));
    }
  }
  CHECK(tested > 1000);
}

TEST_CASE("print-reparse round trip") {
  Fuzzer fz(31337);
  for (int i = 0; i < 60; ++i) {
    const e::NodePtr tree = fz.gen(4);
    const e::NodePtr back = e::parse(e::to_string(tree));
    for (int j = 0; j < 50; ++j) {
      const double x = -2.0 + 4.0 * j / 49.0;
      double a, b;
      try {
        a = e::eval(tree, x);
        b = e::eval(back, x);
      } catch (const DomainError&) {
        continue;
      }
      if (!std::isfinite(a)) continue;
      CHECK(a == doctest::Approx(b).epsilon(1e-14));
    }
  }
}

TEST_CASE("simplify and substitute") {
  const e::NodePtr s = e::simplify(e::parse("0*x + 1*(x - 0) + x^1 - 0/x"));
  CHECK(e::eval(s, 3.5) == doctest::Approx(7.0));
  const e::NodePtr sub = e::substitute(
      e::parse("x^2 + 1"), e::binary('-', e::constant(5.0), e::variable()));
  CHECK(e::eval(sub, 2.0) == doctest::Approx(10.0));  // (5-2)^2 + 1
  CHECK(e::is_constant(*e::parse("gamma(2)+sin(1)")));
  CHECK_FALSE(e::is_constant(*e::parse("gamma(2)+sin(x)")));
}
