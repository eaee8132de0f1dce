#ifndef PSIFRAC_QUAD_HPP_
#define PSIFRAC_QUAD_HPP_

#include <functional>

namespace psifrac {
namespace quad {

struct QuadConfig {
  int nodes = 512;     // panel count per mesh level, >= 9
  int refinement = 2;  // mesh-doubling levels used for Richardson, >= 1
  double tol = 1e-8;   // target relative error
  double grading = 4.0;  // mesh grading exponent toward the nonsingular end
};

struct EvalResult {
  double value = 0.0;
  double err_est = 0.0;  // difference between the two finest mesh levels
  int panels_used = 0;
};

// Integral of (upper - s)^(exponent-1) * g(s) over [lower, upper] when
// at_upper_singularity is true, and of (s - lower)^(exponent-1) * g(s)
// otherwise. Product trapezoidal rule: g is interpolated piecewise-linearly
// on a mesh graded toward the endpoint opposite the kernel singularity and
// the kernel moments are integrated in closed form on each panel.
//
// g may be nonfinite (or throw) at the graded endpoint; the first panel then
// falls back to a local power model fitted from two interior samples.
// Intervals shorter than 1e-14 return {0, 0}.
EvalResult weakly_singular_integral(const std::function<double(double)>& g,
                                    double lower, double upper, double exponent,
                                    bool at_upper_singularity,
                                    const QuadConfig& config = {});

}  // namespace quad
}  // namespace psifrac

#endif  // PSIFRAC_QUAD_HPP_
