#ifndef PSIFRAC_ORACLES_HPP_
#define PSIFRAC_ORACLES_HPP_

#include "psifrac/operators.hpp"
#include "psifrac/psi.hpp"

namespace psifrac {
namespace oracles {

using operators::OrderSpec;
using operators::Side;
using psi::PsiSpec;

// Closed form of the fractional integral of (psi(t)-psi(a))^(delta-1):
// Gamma(delta)/Gamma(alpha+delta) * (psi(x)-psi(a))^(alpha+delta-1).
// Right side mirrors with psi(b)-psi(x).
double power_integral(const PsiSpec& psi, double alpha, double delta, Side side,
                      double x);

// Closed form of the order-(alpha, beta) derivative of the same power with
// delta > n: Gamma(delta)/Gamma(delta-alpha) * w^(delta-alpha-1).
// Independent of beta.
double power_derivative(const PsiSpec& psi, const OrderSpec& order,
                        double delta, Side side, double x);

// lambda * E_alpha(lambda * (psi(x)-psi(a))^alpha): the eigenvalue relation
// of the Caputo-type derivative. Requires lambda > 0 and 0 < alpha < 1.
double ml_eigen(const PsiSpec& psi, double alpha, double lambda, double x);

// Norm bound K = (psi(b)-psi(a))^(n-alpha) /
// ((n-gamma)(gamma-alpha) Gamma(n-gamma) Gamma(gamma-alpha)),
// +infinity at beta in {0, 1}.
double bound_constant(const PsiSpec& psi, const OrderSpec& order);

}  // namespace oracles
}  // namespace psifrac

#endif  // PSIFRAC_ORACLES_HPP_
