#ifndef PSIFRAC_OPERATORS_HPP_
#define PSIFRAC_OPERATORS_HPP_

#include <functional>

#include "psifrac/fn.hpp"
#include "psifrac/psi.hpp"
#include "psifrac/quad.hpp"

namespace psifrac {
namespace operators {

using psi::PsiSpec;
using quad::EvalResult;
using quad::QuadConfig;

// Order alpha and type beta with the derived quantities used everywhere:
// n is the smallest integer >= alpha (and exactly alpha for integer alpha),
// gamma_h = alpha + beta*(n - alpha) is the effective inner differentiation
// order, mu = n*(1-beta) + beta*alpha.
struct OrderSpec {
  double alpha = 0.5;
  double beta = 0.0;
  int n = 1;
  double gamma_h = 0.5;
  double mu = 0.5;

  static OrderSpec make(double alpha, double beta);
  bool integer_order() const;
};

enum class Side { kLeft, kRight };

// Fractional integral of f with respect to psi, order alpha > 0.
// Returns 0 at x = a (left) / x = b (right).
EvalResult frac_integral(const PsiSpec& psi, double alpha, Side side,
                         const Fn& f, double x, const QuadConfig& config = {});

// n-fold (1/psi' d/dx) applied to f at x. Symbolic when both f and psi carry
// expression trees, nested central differences (step (b-a)*1e-4 per level)
// otherwise.
double psi_derivative_op(const PsiSpec& psi, int n, const Fn& f, double x);

// Caputo-type derivative: integral of order n - alpha applied to the n-th
// psi-derivative. Integer alpha dispatches to psi_derivative_op.
EvalResult caputo_derivative(const PsiSpec& psi, const OrderSpec& order,
                             Side side, const Fn& f, double x,
                             const QuadConfig& config = {});

// Riemann-Liouville-type derivative. For f with finite endpoint
// psi-derivative data it is evaluated as the Caputo derivative plus the
// closed-form boundary sum; otherwise through its definition (integral of
// order n - alpha followed by n psi-derivatives).
EvalResult rl_derivative(const PsiSpec& psi, const OrderSpec& order, Side side,
                         const Fn& f, double x, const QuadConfig& config = {});

// Two-parameter derivative of order alpha and type beta. beta = 0 is exactly
// rl_derivative, beta = 1 exactly caputo_derivative (same dispatch).
EvalResult hilfer_derivative(const PsiSpec& psi, const OrderSpec& order,
                             Side side, const Fn& f, double x,
                             const QuadConfig& config = {});

// The boundary sum R(x) such that
// frac_integral(alpha) applied to hilfer_derivative(alpha, beta) of f
// equals f(x) - R(x). Endpoint limits are extrapolated from
// x = a + (b-a)*{1e-3, 2e-3, 4e-3}.
double inversion_residual(const PsiSpec& psi, const OrderSpec& order,
                          const Fn& f, double x, const QuadConfig& config = {});

// max over a uniform grid on (a, b] of |(psi(x)-psi(a))^gamma_w * g(x)|.
double weighted_sup_norm(const PsiSpec& psi, double gamma_w,
                         const std::function<double(double)>& g,
                         int grid_points = 201);

// Sum of the sup norms of f, f', ..., f^(n-1) (plain derivatives) plus the
// weighted sup norm of f^(n).
double cn_norm(const PsiSpec& psi, double gamma_w, int n, const Fn& f,
               int grid_points = 201);

}  // namespace operators
}  // namespace psifrac

#endif  // PSIFRAC_OPERATORS_HPP_
