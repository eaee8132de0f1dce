#include "psifrac/oracles.hpp"

#include <cmath>
#include <limits>

#include "psifrac/specialfn.hpp"

namespace psifrac {
namespace oracles {

namespace {

double width(const PsiSpec& psi, Side side, double x) {
  return side == Side::kLeft ? psi.psi(x) - psi.psi(psi.a)
                             : psi.psi(psi.b) - psi.psi(x);
}

}  // namespace

double power_integral(const PsiSpec& psi, double alpha, double delta, Side side,
                      double x) {
  if (!(delta > 0.0)) throw DomainError("power_integral: delta must be > 0");
  const double w = width(psi, side, x);
  return specialfn::gamma(delta) / specialfn::gamma(alpha + delta) *
         std::pow(w, alpha + delta - 1.0);
}

double power_derivative(const PsiSpec& psi, const OrderSpec& order,
                        double delta, Side side, double x) {
  if (!(delta > order.n))
    throw DomainError("power_derivative: delta must exceed n");
  const double w = width(psi, side, x);
  return specialfn::gamma(delta) / specialfn::gamma(delta - order.alpha) *
         std::pow(w, delta - order.alpha - 1.0);
}

double ml_eigen(const PsiSpec& psi, double alpha, double lambda, double x) {
  if (!(lambda > 0.0)) throw DomainError("ml_eigen: lambda must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("ml_eigen: alpha must lie in (0, 1]");
  const double w = psi.psi(x) - psi.psi(psi.a);
  return lambda * specialfn::mittag_leffler(alpha, lambda * std::pow(w, alpha));
}

double bound_constant(const PsiSpec& psi, const OrderSpec& order) {
  const double n_minus_gamma = order.n - order.gamma_h;
  const double gamma_minus_alpha = order.gamma_h - order.alpha;
  if (n_minus_gamma <= 0.0 || gamma_minus_alpha <= 0.0)
    return std::numeric_limits<double>::infinity();
  const double w = psi.psi(psi.b) - psi.psi(psi.a);
  return std::pow(w, order.n - order.alpha) /
         (n_minus_gamma * gamma_minus_alpha * specialfn::gamma(n_minus_gamma) *
          specialfn::gamma(gamma_minus_alpha));
}

}  // namespace oracles
}  // namespace psifrac
