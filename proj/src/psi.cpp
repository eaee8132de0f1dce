#include "psifrac/psi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "psifrac/specialfn.hpp"

namespace psifrac {
namespace psi {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

void check_domain(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("psi: domain requires finite a < b");
}

}  // namespace

PsiSpec make_identity(double a, double b) {
  check_domain(a, b);
  PsiSpec s;
  s.kind = Kind::kIdentity;
  s.a = a;
  s.b = b;
  s.psi = [](double x) { return x; };
  s.dpsi = [](double) { return 1.0; };
  s.inv = [](double y) { return y; };
  s.tree = expr::variable();
  return s;
}

PsiSpec make_log(double a, double b) {
  check_domain(a, b);
  if (!(a > 0.0)) throw DomainError("psi: log preset requires a > 0");
  PsiSpec s;
  s.kind = Kind::kLog;
  s.a = a;
  s.b = b;
  s.psi = [](double x) { return std::log(x); };
  s.dpsi = [](double x) { return 1.0 / x; };
  s.inv = [](double y) { return std::exp(y); };
  s.tree = expr::call("ln", {expr::variable()});
  return s;
}

PsiSpec make_power(double rho, double a, double b) {
  check_domain(a, b);
  if (!(rho > 0.0)) throw DomainError("psi: power preset requires rho > 0");
  if (a < 0.0) throw DomainError("psi: power preset requires a >= 0");
  PsiSpec s;
  s.kind = Kind::kPower;
  s.a = a;
  s.b = b;
  s.rho = rho;
  s.psi = [rho](double x) { return std::pow(x, rho); };
  s.dpsi = [rho](double x) { return rho * std::pow(x, rho - 1.0); };
  s.inv = [rho](double y) { return std::pow(y, 1.0 / rho); };
  s.tree = expr::binary('^', expr::variable(), expr::constant(rho));
  return s;
}

PsiSpec make_custom(const expr::NodePtr& tree, double a, double b) {
  check_domain(a, b);
  PsiSpec s;
  s.kind = Kind::kCustom;
  s.a = a;
  s.b = b;
  s.tree = tree;
  s.psi = [tree](double x) { return expr::eval(tree, x); };
  expr::NodePtr dtree = expr::differentiate(tree);
  s.dpsi = [dtree](double x) { return expr::eval(dtree, x); };
  // no exact inverse: invert() falls back to bisection + Newton
  return s;
}

PsiSpec make_custom(const std::string& text, double a, double b) {
  return make_custom(expr::parse(text), a, b);
}

ValidationReport validate(const PsiSpec& spec, int samples) {
  ValidationReport rep;
  if (samples < 3) samples = 3;
  const double a = spec.a, b = spec.b;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  // Chebyshev points of the first kind: interior, endpoints excluded.
  std::vector<double> xs(samples), ds(samples);
  double dmax = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = mid + half * std::cos(kPi * (2.0 * i + 1.0) / (2.0 * samples));
    xs[i] = x;
    try {
      ds[i] = spec.dpsi(x);
    } catch (const std::exception& e) {
      rep.pass = false;
      rep.first_bad_x = x;
      rep.message = std::string("evaluation failed: ") + e.what();
      return rep;
    }
    if (std::isfinite(ds[i])) dmax = std::max(dmax, std::fabs(ds[i]));
  }
  for (int i = 0; i < samples; ++i) {
    const double x = xs[i];
    // Step shrinks near the endpoints so x +/- h stays interior and the
    // difference stays accurate where dpsi blows up (e.g. x^rho, rho < 1);
    // the absolute floor keeps it above rounding noise.
    const double h = std::max(1e-9 * (1.0 + std::fabs(x)),
                              1e-3 * std::min(x - a, b - x));
    const double d = ds[i];
    double fd, px;
    try {
      px = spec.psi(x);
      fd = (spec.psi(x + h) - spec.psi(x - h)) / (2.0 * h);
    } catch (const std::exception& e) {
      rep.pass = false;
      rep.first_bad_x = x;
      rep.message = std::string("evaluation failed: ") + e.what();
      return rep;
    }
    // Relative floor: a derivative vanishing to rounding scale (x^3 at 0)
    // counts as a monotonicity failure even when it is not exactly zero.
    if (!(d > 1e-12 * dmax)) {
      rep.pass = false;
      rep.first_bad_x = x;
      char buf[96];
      std::snprintf(buf, sizeof(buf), "dpsi(%.12g) = %.12g is not positive", x, d);
      rep.message = buf;
      return rep;
    }
    if (std::fabs(d - fd) > 1e-6 * (1.0 + std::fabs(d))) {
      rep.pass = false;
      rep.first_bad_x = x;
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "dpsi(%.12g) = %.12g disagrees with central difference %.12g",
                    x, d, fd);
      rep.message = buf;
      return rep;
    }
    if (spec.inv) {
      const double back = spec.inv(px);
      if (std::fabs(back - x) > 1e-10 * (1.0 + std::fabs(x))) {
        rep.pass = false;
        rep.first_bad_x = x;
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "inv(psi(%.12g)) = %.12g fails the round trip", x, back);
        rep.message = buf;
        return rep;
      }
    }
  }
  return rep;
}

double invert(const PsiSpec& spec, double y) {
  const double ya = spec.psi(spec.a), yb = spec.psi(spec.b);
  const double slack = 1e-12 * (1.0 + std::fabs(ya) + std::fabs(yb));
  if (y < ya - slack || y > yb + slack) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "psi: invert target %.12g outside [%.12g, %.12g]",
                  y, ya, yb);
    throw DomainError(buf);
  }
  if (y <= ya) return spec.a;
  if (y >= yb) return spec.b;
  if (spec.inv) return spec.inv(y);

  double lo = spec.a, hi = spec.b;
  for (int i = 0; i < 80 && hi - lo > 1e-15 * (1.0 + std::fabs(lo)); ++i) {
    const double m = 0.5 * (lo + hi);
    (spec.psi(m) < y ? lo : hi) = m;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {  // Newton polish
    const double d = spec.dpsi(x);
    if (!(d > 0.0)) break;
    const double step = (spec.psi(x) - y) / d;
    const double next = x - step;
    if (next <= spec.a || next >= spec.b) break;
    x = next;
    if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(x))) break;
  }
  return x;
}

PsiSpec reflected(const PsiSpec& spec) {
  PsiSpec r;
  r.kind = Kind::kCustom;
  r.a = spec.a;
  r.b = spec.b;
  const double c = spec.a + spec.b;
  auto p = spec.psi;
  auto dp = spec.dpsi;
  r.psi = [p, c](double x) { return -p(c - x); };
  r.dpsi = [dp, c](double x) { return dp(c - x); };
  if (spec.inv) {
    auto iv = spec.inv;
    r.inv = [iv, c](double y) { return c - iv(-y); };
  }
  if (spec.tree) {
    // psi_hat(x) = -psi(a+b-x) as a tree, so symbolic paths keep working.
    expr::NodePtr mirrored = expr::substitute(
        spec.tree, expr::binary('-', expr::constant(c), expr::variable()));
    r.tree = expr::unary_minus(mirrored);
  }
  return r;
}

}  // namespace psi
}  // namespace psifrac
