#include "psifrac/verify.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "psifrac/catalog.hpp"
#include "psifrac/operators.hpp"
#include "psifrac/oracles.hpp"
#include "psifrac/specialfn.hpp"

namespace psifrac {
namespace verify {

namespace {

using operators::frac_integral;
using operators::hilfer_derivative;
using operators::OrderSpec;
using operators::Side;
using quad::QuadConfig;

std::vector<psi::PsiSpec> presets() {
  return {psi::make_identity(0.0, 1.0), psi::make_log(1.0, 2.0),
          psi::make_power(2.0, 0.0, 1.5)};
}

const char* preset_label(const psi::PsiSpec& ps) {
  switch (ps.kind) {
    case psi::Kind::kIdentity: return "identity";
    case psi::Kind::kLog: return "log";
    case psi::Kind::kPower: return "pow";
    default: return "custom";
  }
}

// f(x) = (psi(x) - psi(a))^expo as an expression tree.
Fn power_fn(const psi::PsiSpec& ps, double expo) {
  auto w = expr::binary('-', ps.tree, expr::constant(ps.psi(ps.a)));
  return Fn(expr::simplify(expr::binary('^', w, expr::constant(expo))));
}

std::string label(const char* fmt, ...) {
  char buf[160];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

void add(SuiteReport& rep, std::string name, double error, double tol) {
  CaseResult c;
  c.name = std::move(name);
  c.error = error;
  c.tol = tol;
  c.pass = std::isfinite(error) && error <= tol;
  rep.pass = rep.pass && c.pass;
  rep.cases.push_back(std::move(c));
}

double rel_err(double got, double want) {
  return std::fabs(got - want) / (1.0 + std::fabs(want));
}

// ---- suites --------------------------------------------------------------

SuiteReport suite_power() {
  SuiteReport rep{"power", {}, true};
  for (const auto& ps : presets()) {
    for (double alpha : {0.5, 1.2}) {
      const double delta = 1.5;
      const Fn f = power_fn(ps, delta - 1.0);
      for (double t : {0.35, 0.8}) {
        const double x = ps.a + (ps.b - ps.a) * t;
        const double got = frac_integral(ps, alpha, Side::kLeft, f, x).value;
        const double want =
            oracles::power_integral(ps, alpha, delta, Side::kLeft, x);
        add(rep,
            label("integral psi=%s alpha=%g x=%g", preset_label(ps), alpha, x),
            rel_err(got, want), 1e-6);
      }
    }
    for (double alpha : {0.3, 0.8}) {
      for (double beta : {0.0, 0.5, 1.0}) {
        const auto order = OrderSpec::make(alpha, beta);
        const double delta = order.n + 1.5;
        const Fn f = power_fn(ps, delta - 1.0);
        const double x = ps.a + (ps.b - ps.a) * 0.7;
        const double got =
            hilfer_derivative(ps, order, Side::kLeft, f, x).value;
        const double want =
            oracles::power_derivative(ps, order, delta, Side::kLeft, x);
        add(rep,
            label("derivative psi=%s alpha=%g beta=%g", preset_label(ps),
                  alpha, beta),
            rel_err(got, want), 1e-6);
      }
    }
  }
  return rep;
}

SuiteReport suite_ml() {
  SuiteReport rep{"ml", {}, true};
  const auto id = psi::make_identity(0.0, 1.0);
  for (double lambda : {0.5, 1.0}) {
    for (double alpha : {0.4, 0.8}) {
      const Fn f(
          [alpha, lambda](double t) {
            return specialfn::mittag_leffler(alpha,
                                             lambda * std::pow(t, alpha));
          },
          [alpha, lambda](double t) {
            specialfn::MLParams p;
            p.alpha = alpha;
            p.beta = alpha;
            return lambda * std::pow(t, alpha - 1.0) *
                   specialfn::mittag_leffler(p, lambda * std::pow(t, alpha));
          });
      const auto order = OrderSpec::make(alpha, 1.0);
      for (double x : {0.3, 0.6, 0.9}) {
        const double got =
            operators::caputo_derivative(id, order, Side::kLeft, f, x).value;
        const double want = oracles::ml_eigen(id, alpha, lambda, x);
        add(rep,
            label("eigen lambda=%g alpha=%g x=%g", lambda, alpha, x),
            std::fabs(got - want) / std::fabs(want), 1e-4);
      }
    }
  }
  return rep;
}

SuiteReport suite_semigroup() {
  SuiteReport rep{"semigroup", {}, true};
  QuadConfig inner;
  inner.nodes = 256;
  for (const auto& ps : presets()) {
    for (double a1 : {0.3, 0.5}) {
      const double a2 = 0.4;
      const Fn h([](double t) { return std::exp(-t) + t; });
      Fn first([&, a2](double y) {
        return frac_integral(ps, a2, Side::kLeft, h, y, inner).value;
      });
      for (double t : {0.45, 0.9}) {
        const double x = ps.a + (ps.b - ps.a) * t;
        const double twice =
            frac_integral(ps, a1, Side::kLeft, first, x).value;
        const double direct =
            frac_integral(ps, a1 + a2, Side::kLeft, h, x).value;
        add(rep,
            label("compose psi=%s %g.%g x=%g", preset_label(ps), a1, a2, x),
            std::fabs(twice - direct), 1e-6);
      }
    }
  }
  return rep;
}

SuiteReport suite_inversion() {
  SuiteReport rep{"inversion", {}, true};
  const auto id = psi::make_identity(0.0, 1.0);
  const Fn f(expr::parse("x^2 + x + 1"));
  QuadConfig inner;
  inner.nodes = 256;
  for (double alpha : {0.3, 0.7}) {
    for (double beta : {0.0, 0.5, 1.0}) {
      const auto order = OrderSpec::make(alpha, beta);
      Fn integral([&, alpha](double y) {
        return frac_integral(id, alpha, Side::kLeft, f, y, inner).value;
      });
      const double x = 0.6;
      const double got =
          hilfer_derivative(id, order, Side::kLeft, integral, x).value;
      add(rep, label("left-inverse alpha=%g beta=%g", alpha, beta),
          std::fabs(got - f(x)) / std::fabs(f(x)), 1e-5);
    }
  }
  // Vanishing endpoint data: residual is zero, the composition recovers f.
  const Fn g2(expr::parse("x^2"));
  for (double beta : {0.0, 0.5, 1.0}) {
    const auto order = OrderSpec::make(0.5, beta);
    Fn deriv([&, order](double y) {
      return hilfer_derivative(id, order, Side::kLeft, g2, y, inner).value;
    });
    const double x = 0.7;
    const double got =
        frac_integral(id, 0.5, Side::kLeft, deriv, x, inner).value;
    const double res = operators::inversion_residual(id, order, g2, x);
    add(rep, label("inversion-residual beta=%g", beta),
        std::fabs(got - (g2(x) - res)) / std::fabs(g2(x)), 1e-5);
  }
  // Kernel element w^(gamma-1): the composition vanishes, residual equals f.
  {
    const auto order = OrderSpec::make(0.5, 0.5);
    auto w = expr::binary('^', expr::variable(),
                          expr::constant(order.gamma_h - 1.0));
    const Fn kern{expr::simplify(std::move(w))};
    // The derivative annihilates the kernel pointwise, so a coarse mesh is
    // enough for the (vanishing) composition and keeps the suite fast.
    QuadConfig coarse;
    coarse.nodes = 128;
    coarse.refinement = 1;
    Fn deriv([&, order, coarse](double y) {
      return hilfer_derivative(id, order, Side::kLeft, kern, y, coarse).value;
    });
    const double x = 0.7;
    const double res = operators::inversion_residual(id, order, kern, x);
    const double got =
        frac_integral(id, 0.5, Side::kLeft, deriv, x, coarse).value;
    add(rep, "kernel-element residual",
        std::fabs(res - kern(x)) / std::fabs(kern(x)), 1e-5);
    add(rep, "kernel-element composition",
        std::fabs(got - (kern(x) - res)), 1e-5);
  }
  return rep;
}

SuiteReport suite_bounds() {
  SuiteReport rep{"bounds", {}, true};
  const auto id = psi::make_identity(0.0, 1.0);
  const auto order = OrderSpec::make(0.5, 0.5);
  const double K = oracles::bound_constant(id, order);
  add(rep, "bound-constant closed form",
      std::fabs(K - 1.2171884777994833), 1e-8);

  QuadConfig cfg;
  cfg.nodes = 256;
  for (const char* text : {"x^2 + 1", "sin(x) + 2", "exp(x) - x"}) {
    const Fn f(expr::parse(text));
    auto hd = [&](double x) {
      return hilfer_derivative(id, order, Side::kLeft, f, x, cfg).value;
    };
    const double num = operators::weighted_sup_norm(id, order.gamma_h, hd);
    const double den = operators::cn_norm(id, order.gamma_h, order.n, f);
    add(rep, label("norm-ratio f=%s", text), num / den - K, 1e-6);
  }

  // sup |I^alpha f| <= (psi(b)-psi(a))^alpha / Gamma(alpha+1) * sup |f|
  for (double alpha : {0.5, 0.9}) {
    for (int n : {1, 4}) {
      const Fn f([n](double t) { return t + 1.0 / n; });
      const double bound = (1.0 + 1.0 / n) / specialfn::gamma(alpha + 1.0);
      double sup = 0.0;
      for (int i = 1; i <= 20; ++i) {
        const double x = i / 20.0;
        sup = std::max(
            sup, std::fabs(frac_integral(id, alpha, Side::kLeft, f, x).value));
      }
      add(rep, label("integral-bound alpha=%g n=%d", alpha, n), sup - bound,
          1e-9);
    }
  }
  return rep;
}

SuiteReport suite_catalog() {
  SuiteReport rep{"catalog", {}, true};
  using catalog::OpKind;

  // Hadamard of f(t) = t on [1, e]: x * P(alpha, ln x) by the incomplete
  // gamma series.
  {
    const double alpha = 0.4, x = 2.5;
    const auto base = psi::make_identity(1.0, std::exp(1.0));
    QuadConfig cfg;
    cfg.nodes = 2048;
    const Fn f([](double t) { return t; });
    const double got =
        catalog::apply(catalog::resolve(OpKind::kIntegral, "hadamard"), alpha,
                       f, base, x, cfg)
            .value;
    const double w = std::log(x);
    double term = std::pow(w, alpha) * std::exp(-w) / alpha, lg = term;
    for (int k = 1; k < 200; ++k) {
      term *= w / (alpha + k);
      lg += term;
      if (term < 1e-17 * lg) break;
    }
    add(rep, "hadamard integral vs incomplete gamma",
        std::fabs(got - x * lg / specialfn::gamma(alpha)), 1e-6);
  }
  // Katugampola rho=2 against the rho=1 change of variables z = t^2:
  // I^(alpha;x^2) f(x) = I^alpha g(X) with g(z) = f(sqrt(z)), X = x^2.
  {
    const double alpha = 0.6, x = 0.8;
    const auto base = psi::make_identity(0.0, 1.0);
    const Fn f([](double t) { return t * t + 1.0; });
    const double got =
        catalog::apply(
            catalog::resolve(OpKind::kIntegral, "katugampola", {{"rho", 2.0}}),
            alpha, f, base, x)
            .value;
    const Fn g([](double z) { return z + 1.0; });  // f(sqrt(z))
    const auto idz = psi::make_identity(0.0, 1.0);
    const double want =
        std::pow(2.0, -alpha) *
        frac_integral(idz, alpha, Side::kLeft, g, x * x).value;
    add(rep, "katugampola rho=2 change of variables",
        std::fabs(got - want), 1e-6);
  }
  // Erdelyi-Kober sigma=1, eta=0, f = t at x = 1: Gamma(2)/Gamma(2.5).
  {
    const Fn f([](double t) { return t; });
    const auto base = psi::make_identity(0.0, 1.0);
    const double got =
        catalog::apply(catalog::resolve(OpKind::kIntegral, "erdelyi",
                                        {{"sigma", 1.0}, {"eta", 0.0}}),
                       0.5, f, base, 1.0)
            .value;
    add(rep, "erdelyi-kober closed form",
        std::fabs(got - 0.7522527780636750), 1e-6);
  }
  // Prabhakar with gamma_p = 0 collapses to the plain integral.
  {
    const Fn f([](double t) { return t + 1.0; });
    const auto base = psi::make_identity(0.0, 1.0);
    const double got =
        catalog::apply(
            catalog::resolve(OpKind::kIntegral, "prabhakar",
                             {{"beta_p", 0.6}, {"gamma_p", 0.0},
                              {"omega", 3.0}}),
            0.6, f, base, 0.9)
            .value;
    const double want = frac_integral(psi::make_identity(0.0, 1.0), 0.6,
                                      Side::kLeft, f, 0.9)
                            .value;
    add(rep, "prabhakar gamma_p=0 vs riemann_liouville",
        std::fabs(got - want), 1e-6);
  }
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "power", "ml", "semigroup", "inversion", "bounds", "catalog"};
  return names;
}

SuiteReport run_suite(const std::string& suite, double tol_override) {
  SuiteReport rep;
  if (suite == "power") rep = suite_power();
  else if (suite == "ml") rep = suite_ml();
  else if (suite == "semigroup") rep = suite_semigroup();
  else if (suite == "inversion") rep = suite_inversion();
  else if (suite == "bounds") rep = suite_bounds();
  else if (suite == "catalog") rep = suite_catalog();
  else throw DomainError("verify: unknown suite '" + suite + "'");
  if (tol_override > 0.0) {
    rep.pass = true;
    for (auto& c : rep.cases) {
      c.tol = tol_override;
      c.pass = std::isfinite(c.error) && c.error <= c.tol;
      rep.pass = rep.pass && c.pass;
    }
  }
  return rep;
}

std::vector<SuiteReport> run(const std::string& suite_or_all,
                             double tol_override) {
  std::vector<SuiteReport> out;
  if (suite_or_all == "all") {
    for (const auto& name : suite_names())
      out.push_back(run_suite(name, tol_override));
  } else {
    out.push_back(run_suite(suite_or_all, tol_override));
  }
  return out;
}

}  // namespace verify
}  // namespace psifrac
