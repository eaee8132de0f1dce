#include "psifrac/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "psifrac/specialfn.hpp"

namespace psifrac {
namespace catalog {

namespace {

using operators::OrderSpec;
using operators::Side;
using quad::EvalResult;
using quad::QuadConfig;

constexpr double kDefaultL = 30.0;

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = {
      // integrals
      {"riemann_liouville", OpKind::kIntegral, {}, {},
       "left Riemann-Liouville integral; psi(x) = x"},
      {"liouville", OpKind::kIntegral, {}, {"L"},
       "Liouville integral over (-inf, x]; truncated at x - L"},
      {"riemann", OpKind::kIntegral, {}, {},
       "Riemann integral; psi(x) = x with base point 0"},
      {"hadamard", OpKind::kIntegral, {}, {},
       "Hadamard integral; psi(x) = ln x"},
      {"erdelyi_kober", OpKind::kIntegral, {"sigma", "eta"}, {},
       "Erdelyi-Kober integral; psi(x) = x^sigma with power weights"},
      {"erdelyi", OpKind::kIntegral, {"sigma", "eta"}, {},
       "Erdelyi integral; Erdelyi-Kober taken from base point 0"},
      {"kober", OpKind::kIntegral, {"eta"}, {},
       "Kober integral; psi(x) = x, base point 0, power weights"},
      {"generalized_rho", OpKind::kIntegral, {"rho", "eta", "kappa", "beta_p"},
       {}, "x^kappa rho^(-beta_p) I^(alpha;x^rho) applied to t^(rho eta) f"},
      {"katugampola", OpKind::kIntegral, {"rho"}, {},
       "Katugampola integral; rho^(-alpha) I^(alpha;x^rho)"},
      {"prabhakar", OpKind::kIntegral, {"beta_p", "gamma_p", "omega"}, {},
       "Prabhakar integral; kernel (x-t)^(alpha-1) "
       "E^gamma_p_(alpha,beta_p)(omega (x-t)^alpha)"},
      {"chen", OpKind::kIntegral, {"c"}, {},
       "Chen integral; Riemann-Liouville from base point c"},
      {"riesz", OpKind::kIntegral, {}, {"L"},
       "Riesz integral; (I_+ + I_-) / (2 cos(pi alpha / 2)), truncated tails"},
      {"feller", OpKind::kIntegral, {"theta"}, {"L"},
       "Feller integral; C_-(theta,alpha) I_+ + C_+(theta,alpha) I_-, "
       "truncated tails"},
      {"weyl", OpKind::kIntegral, {}, {"L"},
       "Weyl integral over [x, inf); truncated at x + L"},
      // derivatives
      {"psi_caputo", OpKind::kDerivative, {}, {},
       "Caputo derivative with respect to the supplied transform"},
      {"psi_riemann_liouville", OpKind::kDerivative, {}, {},
       "Riemann-Liouville derivative with respect to the supplied transform"},
      {"caputo", OpKind::kDerivative, {}, {},
       "Caputo derivative; psi(x) = x"},
      {"katugampola", OpKind::kDerivative, {"rho"}, {},
       "Katugampola derivative; rho^alpha times the type-0 derivative for "
       "psi(x) = x^rho"},
      {"riemann_liouville", OpKind::kDerivative, {}, {},
       "Riemann-Liouville derivative; psi(x) = x"},
      {"hadamard", OpKind::kDerivative, {}, {},
       "Hadamard derivative; psi(x) = ln x, type 0"},
      {"caputo_hadamard", OpKind::kDerivative, {}, {},
       "Caputo-Hadamard derivative; psi(x) = ln x, type 1"},
      {"caputo_katugampola", OpKind::kDerivative, {"rho"}, {},
       "Caputo-Katugampola derivative; rho^alpha times the type-1 derivative "
       "for psi(x) = x^rho"},
      {"hilfer_hadamard", OpKind::kDerivative, {"beta"}, {},
       "Hilfer-Hadamard derivative; psi(x) = ln x, free type beta"},
      {"hilfer_katugampola", OpKind::kDerivative, {"rho", "beta"}, {},
       "Hilfer-Katugampola derivative; rho^alpha times the type-beta "
       "derivative for psi(x) = x^rho"},
      {"riemann", OpKind::kDerivative, {}, {},
       "Riemann derivative; psi(x) = x, base point 0, type 0"},
      {"chen", OpKind::kDerivative, {"c"}, {},
       "Chen derivative; Riemann-Liouville from base point c"},
      {"jumarie", OpKind::kDerivative, {}, {},
       "Jumarie derivative; type-0 derivative of f - f(0) from base point 0"},
      {"prabhakar", OpKind::kDerivative, {"rho", "gamma_p", "omega"}, {},
       "Prabhakar derivative; kernel (x-t)^(n-alpha-1) "
       "E^(-gamma_p)_(rho,n-alpha)(omega (x-t)^rho)"},
      {"erdelyi_kober", OpKind::kDerivative, {"sigma", "eta"}, {},
       "Erdelyi-Kober derivative; x^(-sigma eta) Caputo for psi(x) = x^sigma "
       "of t^(sigma(eta+alpha)) f"},
      {"liouville", OpKind::kDerivative, {}, {"L"},
       "Liouville derivative over (-inf, x]; truncated"},
      {"liouville_caputo", OpKind::kDerivative, {}, {"L"},
       "Liouville-Caputo derivative over (-inf, x]; truncated"},
      {"riesz", OpKind::kDerivative, {}, {"L"},
       "Riesz derivative; -(D_+ + D_-) / (2 cos(pi alpha / 2)), truncated "
       "tails"},
      {"feller", OpKind::kDerivative, {"theta"}, {"L"},
       "Feller derivative; -(C_+ D_+ + C_- D_-), truncated tails"},
      {"weyl", OpKind::kDerivative, {}, {"L"},
       "Weyl derivative over [x, inf); truncated"},
      {"cassar", OpKind::kDerivative, {}, {"L"},
       "Cassar derivative; the Weyl derivative as an explicit truncated "
       "limit"},
      {"caputo_riesz", OpKind::kDerivative, {}, {},
       "Caputo-Riesz derivative; (CD_a+ + (-1)^n CD_b-) / "
       "(2 cos(pi alpha / 2)) on [a, b]"},
  };
  return t;
}

bool truncated_domain(const Entry& e) {
  return std::find(e.optional.begin(), e.optional.end(), "L") !=
         e.optional.end();
}

double param(const Preset& p, const char* key) { return p.params.at(key); }

// t^p * f(t), keeping a symbolic form when f carries one.
Fn power_wrap(const Fn& f, double p) {
  if (p == 0.0) return f;
  if (f.has_tree())
    return Fn(expr::binary(
        '*', expr::binary('^', expr::variable(), expr::constant(p)),
        f.tree()));
  if (f.has_derivative_closure()) {
    Fn df = f.derivative();
    return Fn([f, p](double t) { return std::pow(t, p) * f(t); },
              [f, df, p](double t) {
                return p * std::pow(t, p - 1.0) * f(t) +
                       std::pow(t, p) * df(t);
              });
  }
  return Fn([f, p](double t) { return std::pow(t, p) * f(t); });
}

// f(t) - c, keeping a symbolic form when f carries one.
Fn shifted(const Fn& f, double c) {
  if (f.has_tree()) return Fn(expr::binary('-', f.tree(), expr::constant(c)));
  if (f.has_derivative_closure()) {
    Fn df = f.derivative();
    return Fn([f, c](double t) { return f(t) - c; },
              [df](double t) { return df(t); });
  }
  return Fn([f, c](double t) { return f(t) - c; });
}

EvalResult scaled(EvalResult r, double w) {
  r.value *= w;
  r.err_est *= std::fabs(w);
  return r;
}

EvalResult combined(const EvalResult& u, double wu, const EvalResult& v,
                    double wv) {
  EvalResult out;
  out.value = wu * u.value + wv * v.value;
  out.err_est = std::fabs(wu) * u.err_est + std::fabs(wv) * v.err_est;
  out.panels_used = u.panels_used + v.panels_used;
  return out;
}

double riesz_denominator(double alpha) {
  const double c = std::cos(0.5 * std::numbers::pi * alpha);
  if (std::fabs(c) < 1e-12)
    throw DomainError(
        "catalog: cos(pi*alpha/2) vanishes (alpha = 1); the Riesz weight is "
        "undefined");
  return 2.0 * c;
}

// C_-(theta, alpha) and C_+(theta, alpha) = sin((alpha -+ theta) pi / alpha)
// over sin(pi theta).
void feller_weights(double theta, double alpha, double* cm, double* cp) {
  const double pi = std::numbers::pi;
  const double s = std::sin(pi * theta);
  *cm = std::sin((alpha - theta) * pi / alpha) / s;
  *cp = std::sin((alpha + theta) * pi / alpha) / s;
}

// Crude tail bound |f(cut)| * L^(p-1) / Gamma(p) for the mass dropped by
// cutting the interval at distance L, assuming exponential decay beyond.
void tail_warn(const std::string& name, double p, double L, double f_cut,
               double tol) {
  if (!(p > 0.0) || !std::isfinite(f_cut)) return;
  const double tail =
      std::fabs(f_cut) * std::pow(L, p - 1.0) / specialfn::gamma(p);
  if (tail > tol)
    std::fprintf(stderr,
                 "catalog: warning: %s truncation tail estimate %.3g exceeds "
                 "tolerance %.3g; increase L\n",
                 name.c_str(), tail, tol);
}

EvalResult apply_integral(const Preset& preset, double alpha, const Fn& f,
                          const psi::PsiSpec& base, double x,
                          const QuadConfig& config) {
  const std::string& name = preset.entry.name;
  const double a = base.a;
  const double b = base.b;

  if (name == "riemann_liouville")
    return operators::frac_integral(psi::make_identity(a, b), alpha,
                                    Side::kLeft, f, x, config);
  if (name == "riemann")
    return operators::frac_integral(psi::make_identity(0.0, b), alpha,
                                    Side::kLeft, f, x, config);
  if (name == "hadamard")
    return operators::frac_integral(psi::make_log(a, b), alpha, Side::kLeft,
                                    f, x, config);
  if (name == "chen") {
    const double c = param(preset, "c");
    return operators::frac_integral(psi::make_identity(c, std::max(b, x)),
                                    alpha, Side::kLeft, f, x, config);
  }
  if (name == "erdelyi_kober" || name == "erdelyi") {
    const double sigma = param(preset, "sigma");
    const double eta = param(preset, "eta");
    const double lo = (name == "erdelyi") ? 0.0 : a;
    const auto ps = psi::make_power(sigma, lo, b);
    const auto r = operators::frac_integral(ps, alpha, Side::kLeft,
                                            power_wrap(f, sigma * eta), x,
                                            config);
    return scaled(r, std::pow(x, -sigma * (alpha + eta)));
  }
  if (name == "kober") {
    const double eta = param(preset, "eta");
    const auto r = operators::frac_integral(psi::make_identity(0.0, b), alpha,
                                            Side::kLeft, power_wrap(f, eta),
                                            x, config);
    return scaled(r, std::pow(x, -(alpha + eta)));
  }
  if (name == "generalized_rho") {
    const double rho = param(preset, "rho");
    const double eta = param(preset, "eta");
    const double kappa = param(preset, "kappa");
    const double bp = param(preset, "beta_p");
    const auto r = operators::frac_integral(psi::make_power(rho, a, b), alpha,
                                            Side::kLeft,
                                            power_wrap(f, rho * eta), x,
                                            config);
    return scaled(r, std::pow(x, kappa) / std::pow(rho, bp));
  }
  if (name == "katugampola") {
    const double rho = param(preset, "rho");
    const auto r = operators::frac_integral(psi::make_power(rho, a, b), alpha,
                                            Side::kLeft, f, x, config);
    return scaled(r, std::pow(rho, -alpha));
  }
  if (name == "prabhakar") {
    const double bp = param(preset, "beta_p");
    const double gp = param(preset, "gamma_p");
    const double om = param(preset, "omega");
    // Integrate in v = (x - t)^alpha: the Mittag-Leffler factor becomes
    // analytic in v, so its w^alpha cusp no longer sits at the kernel
    // endpoint where the mesh is coarsest.
    const double W = std::pow(x - a, alpha);
    auto h = [&f, alpha, bp, gp, om, x](double v) {
      return specialfn::mittag_leffler({alpha, bp, gp}, om * v) *
             f(x - std::pow(v, 1.0 / alpha));
    };
    const auto r = quad::weakly_singular_integral(h, 0.0, W, 1.0, true,
                                                  config);
    return scaled(r, 1.0 / alpha);
  }

  // Infinite-interval names: truncated tails. The truncation window is wide
  // (default L = 30) while the integrand mass sits near x, so give the mesh
  // a higher node floor; the integrands here are cheap.
  const double L = param(preset, "L");
  QuadConfig tcfg = config;
  tcfg.nodes = std::max(config.nodes, 16384);
  if (name == "liouville") {
    tail_warn(name, alpha, L, f(x - L), config.tol);
    return operators::frac_integral(psi::make_identity(x - L, x), alpha,
                                    Side::kLeft, f, x, tcfg);
  }
  if (name == "weyl") {
    tail_warn(name, alpha, L, f(x + L), config.tol);
    return operators::frac_integral(psi::make_identity(x, x + L), alpha,
                                    Side::kRight, f, x, tcfg);
  }
  if (name == "riesz" || name == "feller") {
    const double d = (name == "riesz") ? riesz_denominator(alpha) : 0.0;
    tail_warn(name, alpha, L, f(x - L), config.tol);
    tail_warn(name, alpha, L, f(x + L), config.tol);
    const auto plus = operators::frac_integral(psi::make_identity(x - L, x),
                                               alpha, Side::kLeft, f, x,
                                               tcfg);
    const auto minus = operators::frac_integral(psi::make_identity(x, x + L),
                                                alpha, Side::kRight, f, x,
                                                tcfg);
    if (name == "riesz") return combined(plus, 1.0 / d, minus, 1.0 / d);
    double cm = 0.0, cp = 0.0;
    feller_weights(param(preset, "theta"), alpha, &cm, &cp);
    return combined(plus, cm, minus, cp);
  }
  throw DomainError("catalog: unhandled integral '" + name + "'");
}

EvalResult apply_derivative(const Preset& preset, double alpha, const Fn& f,
                            const psi::PsiSpec& base, double x,
                            const QuadConfig& config) {
  const std::string& name = preset.entry.name;
  const double a = base.a;
  const double b = base.b;
  const int n = OrderSpec::make(alpha, 0.0).n;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n

  auto hd = [&](const psi::PsiSpec& ps, double beta, Side side,
                const Fn& fn) {
    return operators::hilfer_derivative(ps, OrderSpec::make(alpha, beta),
                                        side, fn, x, config);
  };

  if (name == "psi_caputo") return hd(base, 1.0, Side::kLeft, f);
  if (name == "psi_riemann_liouville") return hd(base, 0.0, Side::kLeft, f);
  if (name == "caputo")
    return hd(psi::make_identity(a, b), 1.0, Side::kLeft, f);
  if (name == "riemann_liouville")
    return hd(psi::make_identity(a, b), 0.0, Side::kLeft, f);
  if (name == "hadamard")
    return hd(psi::make_log(a, b), 0.0, Side::kLeft, f);
  if (name == "caputo_hadamard")
    return hd(psi::make_log(a, b), 1.0, Side::kLeft, f);
  if (name == "hilfer_hadamard")
    return hd(psi::make_log(a, b), param(preset, "beta"), Side::kLeft, f);
  if (name == "katugampola" || name == "caputo_katugampola" ||
      name == "hilfer_katugampola") {
    const double rho = param(preset, "rho");
    const double beta = (name == "katugampola")         ? 0.0
                        : (name == "caputo_katugampola") ? 1.0
                                                         : param(preset, "beta");
    const auto r = hd(psi::make_power(rho, a, b), beta, Side::kLeft, f);
    return scaled(r, std::pow(rho, alpha));
  }
  if (name == "riemann")
    return hd(psi::make_identity(0.0, b), 0.0, Side::kLeft, f);
  if (name == "chen") {
    const double c = param(preset, "c");
    return hd(psi::make_identity(c, std::max(b, x)), 0.0, Side::kLeft, f);
  }
  if (name == "jumarie")
    return hd(psi::make_identity(0.0, b), 0.0, Side::kLeft,
              shifted(f, f(0.0)));
  if (name == "erdelyi_kober") {
    const double sigma = param(preset, "sigma");
    const double eta = param(preset, "eta");
    const auto r = hd(psi::make_power(sigma, a, b), 1.0, Side::kLeft,
                      power_wrap(f, sigma * (eta + alpha)));
    return scaled(r, std::pow(x, -sigma * eta));
  }
  if (name == "prabhakar") {
    const double rho = param(preset, "rho");
    const double gp = param(preset, "gamma_p");
    const double om = param(preset, "omega");
    const double ord = n - alpha;
    if (!(ord > 0.0))
      throw DomainError(
          "catalog: prabhakar derivative requires non-integer alpha");
    auto kernel_int = [&f, &config, a, rho, gp, om, ord](double y) {
      auto g = [&f, y, rho, gp, om, ord](double t) {
        return specialfn::mittag_leffler({rho, ord, -gp},
                                         om * std::pow(y - t, rho)) *
               f(t);
      };
      return quad::weakly_singular_integral(g, a, y, ord, true, config).value;
    };
    EvalResult out;
    out.value = operators::psi_derivative_op(psi::make_identity(a, b), n,
                                             Fn(kernel_int), x);
    // Indicative only: the error of the inner quadrature at x, without the
    // amplification of the outer difference stencil.
    const auto inner = quad::weakly_singular_integral(
        [&f, x, rho, gp, om, ord](double t) {
          return specialfn::mittag_leffler({rho, ord, -gp},
                                           om * std::pow(x - t, rho)) *
                 f(t);
        },
        a, x, ord, true, config);
    out.err_est = inner.err_est;
    out.panels_used = inner.panels_used;
    return out;
  }
  if (name == "caputo_riesz") {
    const double d = riesz_denominator(alpha);
    const auto ps = psi::make_identity(a, b);
    const auto left = hd(ps, 1.0, Side::kLeft, f);
    const auto right = hd(ps, 1.0, Side::kRight, f);
    return combined(left, 1.0 / d, right, sign / d);
  }

  // Infinite-interval names: truncated tails, same node floor rationale as
  // on the integral side.
  const double L = param(preset, "L");
  const double ord = n - alpha;
  QuadConfig tcfg = config;
  tcfg.nodes = std::max(config.nodes, 16384);
  auto hdt = [&](const psi::PsiSpec& ps, double beta, Side side) {
    return operators::hilfer_derivative(ps, OrderSpec::make(alpha, beta),
                                        side, f, x, tcfg);
  };
  // The left-tail operators use the principal (d/dx)^n orientation, which
  // makes exp(lambda x) an eigenfunction of the Liouville derivative and the
  // Riesz combination below symmetric for even f.
  if (name == "liouville" || name == "liouville_caputo") {
    tail_warn(name, ord, L, f(x - L), config.tol);
    const double beta = (name == "liouville") ? 0.0 : 1.0;
    return hdt(psi::make_identity(x - L, x), beta, Side::kLeft);
  }
  if (name == "weyl" || name == "cassar") {
    tail_warn(name, ord, L, f(x + L), config.tol);
    return hdt(psi::make_identity(x, x + L), 0.0, Side::kRight);
  }
  if (name == "riesz" || name == "feller") {
    const double d = (name == "riesz") ? riesz_denominator(alpha) : 0.0;
    tail_warn(name, ord, L, f(x - L), config.tol);
    tail_warn(name, ord, L, f(x + L), config.tol);
    const auto plus = hdt(psi::make_identity(x - L, x), 0.0, Side::kLeft);
    const auto minus = hdt(psi::make_identity(x, x + L), 0.0, Side::kRight);
    if (name == "riesz") return combined(plus, -1.0 / d, minus, -1.0 / d);
    double cm = 0.0, cp = 0.0;
    feller_weights(param(preset, "theta"), alpha, &cm, &cp);
    return combined(plus, -cp, minus, -cm);
  }
  throw DomainError("catalog: unhandled derivative '" + name + "'");
}

}  // namespace

const std::vector<Entry>& registry() { return table(); }

Preset resolve(OpKind kind, const std::string& name, const ParamMap& params) {
  const Entry* entry = nullptr;
  for (const auto& e : table())
    if (e.kind == kind && e.name == name) {
      entry = &e;
      break;
    }
  if (entry == nullptr)
    throw DomainError("catalog: unknown " +
                      std::string(kind == OpKind::kIntegral ? "integral"
                                                            : "derivative") +
                      " '" + name + "'");

  Preset out;
  out.entry = *entry;
  for (const auto& key : entry->required) {
    if (params.find(key) == params.end())
      throw DomainError("catalog: '" + name + "' requires parameter '" + key +
                        "'");
  }
  for (const auto& [key, value] : params) {
    const bool known =
        std::find(entry->required.begin(), entry->required.end(), key) !=
            entry->required.end() ||
        std::find(entry->optional.begin(), entry->optional.end(), key) !=
            entry->optional.end();
    if (!known)
      throw DomainError("catalog: '" + name + "' does not take parameter '" +
                        key + "'");
    out.params[key] = value;
  }
  if (truncated_domain(*entry) && out.params.find("L") == out.params.end())
    out.params["L"] = kDefaultL;

  auto positive = [&](const char* key) {
    auto it = out.params.find(key);
    if (it != out.params.end() && !(it->second > 0.0))
      throw DomainError("catalog: parameter '" + std::string(key) +
                        "' of '" + name + "' must be > 0");
  };
  positive("rho");
  positive("sigma");
  positive("L");
  if (kind == OpKind::kIntegral && name == "prabhakar") positive("beta_p");
  if (auto it = out.params.find("theta"); it != out.params.end()) {
    if (!(it->second > 0.0 && it->second < 1.0))
      throw DomainError("catalog: parameter 'theta' of '" + name +
                        "' must lie in (0, 1)");
  }
  if (auto it = out.params.find("beta"); it != out.params.end()) {
    if (!(it->second >= 0.0 && it->second <= 1.0))
      throw DomainError("catalog: parameter 'beta' of '" + name +
                        "' must lie in [0, 1]");
  }
  return out;
}

quad::EvalResult apply(const Preset& preset, double alpha, const Fn& f,
                       const psi::PsiSpec& base, double x,
                       const QuadConfig& config) {
  if (!(alpha > 0.0)) throw DomainError("catalog: alpha must be > 0");
  if (!f.valid()) throw DomainError("catalog: f is empty");
  return preset.entry.kind == OpKind::kIntegral
             ? apply_integral(preset, alpha, f, base, x, config)
             : apply_derivative(preset, alpha, f, base, x, config);
}

}  // namespace catalog
}  // namespace psifrac
