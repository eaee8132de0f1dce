#ifndef PSIFRAC_PSI_HPP_
#define PSIFRAC_PSI_HPP_

#include <functional>
#include <optional>
#include <string>

#include "psifrac/expr.hpp"

namespace psifrac {
namespace psi {

enum class Kind { kIdentity, kLog, kPower, kCustom };

// The transform psi: strictly increasing on [a,b] with psi' > 0 on (a,b).
// Immutable after construction.
struct PsiSpec {
  Kind kind = Kind::kIdentity;
  double a = 0.0;
  double b = 1.0;
  double rho = 1.0;  // power preset exponent

  std::function<double(double)> psi;
  std::function<double(double)> dpsi;
  std::function<double(double)> inv;  // exact inverse; empty for custom specs
  expr::NodePtr tree;                 // expression form when built from text
};

struct ValidationReport {
  bool pass = true;
  std::string message;   // first violation, empty on pass
  double first_bad_x = 0.0;
};

PsiSpec make_identity(double a, double b);
PsiSpec make_log(double a, double b);    // requires a > 0
PsiSpec make_power(double rho, double a, double b);  // rho > 0, a >= 0
PsiSpec make_custom(const expr::NodePtr& tree, double a, double b);
PsiSpec make_custom(const std::string& text, double a, double b);

// Samples the open interval (a,b) at Chebyshev points and checks
// monotonicity, dpsi against a central difference, and the inverse
// round trip when an inverse is present.
ValidationReport validate(const PsiSpec& spec, int samples = 257);

// Solves psi(x) = y on [a,b]; exact inverse when present, else bisection
// polished by Newton. Throws DomainError when y is outside [psi(a), psi(b)].
double invert(const PsiSpec& spec, double y);

// The reflected transform used for right-sided operators:
// psi_hat(y) = -psi(a+b-y), again increasing on [a,b].
PsiSpec reflected(const PsiSpec& spec);

}  // namespace psi
}  // namespace psifrac

#endif  // PSIFRAC_PSI_HPP_
