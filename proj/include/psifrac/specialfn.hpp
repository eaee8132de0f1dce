#ifndef PSIFRAC_SPECIALFN_HPP_
#define PSIFRAC_SPECIALFN_HPP_

#include <stdexcept>
#include <string>

namespace psifrac {

// Thrown for mathematically undefined inputs (poles, out-of-domain arguments).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Thrown when an iterative evaluation fails to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

namespace specialfn {

// Gamma function for real x, x not in {0, -1, -2, ...}.
// Lanczos rational approximation (g=7, 9 terms) plus reflection for x < 0.5.
double gamma(double x);

// log|Gamma(x)|, same pole set as gamma().
double log_gamma(double x);

// Euler beta B(p, q) = Gamma(p)Gamma(q)/Gamma(p+q), p, q > 0.
double beta(double p, double q);

// Parameters of the three-parameter (Prabhakar) Mittag-Leffler function
// E^{gamma_p}_{alpha,beta}(z). alpha=..., beta=1, gamma_p=1 gives E_alpha.
struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma_p = 1.0;
};

struct MLResult {
  double value = 0.0;
  double err_est = 0.0;   // magnitude of the first neglected partial
  int terms = 0;          // series terms summed
};

// Direct Taylor series with term-ratio stopping; |z| <= 50.
MLResult ml_series(const MLParams& p, double z, double tol = 1e-14);

double mittag_leffler(const MLParams& p, double z);

// One-parameter shorthand E_alpha(z).
double mittag_leffler(double alpha, double z);

}  // namespace specialfn
}  // namespace psifrac

#endif  // PSIFRAC_SPECIALFN_HPP_
