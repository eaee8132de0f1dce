#include "psifrac/quad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>
#include <vector>

#include "psifrac/specialfn.hpp"

namespace psifrac {
namespace quad {

namespace {

void check_config(const QuadConfig& c) {
  if (c.nodes < 9 || c.refinement < 1 || !(c.tol > 1e-15) || !(c.tol < 1e-2) ||
      !(c.grading >= 1.0))
    throw DomainError("quad: invalid config (need nodes >= 9, refinement >= 1, "
                      "tol in (1e-15, 1e-2), grading >= 1)");
}

[[noreturn]] void nonfinite_sample(double s) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "quad: nonfinite sample at s=%.17g", s);
  throw DomainError(buf);
}

// S0 = integral_0^r (1-t)^(alpha-1) dt, r in (0, 1].
double kernel_moment0(double alpha, double r) {
  if (r >= 1.0) return 1.0 / alpha;
  return -std::expm1(alpha * std::log1p(-r)) / alpha;
}

// S1 = integral_0^r t (1-t)^(alpha-1) dt. Closed form cancels badly for
// small r, so a binomial series takes over there.
double kernel_moment1(double alpha, double r) {
  if (r < 0.25) {
    double coef = 1.0;  // (-1)^k binom(alpha-1, k)
    double rk = r * r;
    double sum = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double term = coef * rk / (k + 2.0);
      sum += term;
      if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
      coef *= (k + 1.0 - alpha) / (k + 1.0);
      rk *= r;
    }
    return sum;
  }
  if (r >= 1.0) return 1.0 / (alpha * (alpha + 1.0));
  const double lg = std::log1p(-r);
  return -std::expm1(alpha * lg) / alpha +
         std::expm1((alpha + 1.0) * lg) / (alpha + 1.0);
}

using Sampler = std::function<double(double)>;

// One product-trapezoid pass over a fixed mesh with upper-endpoint kernel
// singularity. values[0] may be NaN; the first panel then uses a local power
// model c*(s-lower)^p fitted from the panel midpoint and right node.
double integrate_mesh(const std::vector<double>& s,
                      const std::vector<double>& values, double upper,
                      double alpha, const Sampler& g) {
  const int n = static_cast<int>(s.size()) - 1;
  double total = 0.0;
  int j0 = 0;
  if (!std::isfinite(values[0])) {
    // Fit the local power c*(s-lower)^p from the first two finite nodes.
    // Only already-sampled nodes are used: probing below them can be
    // meaningless when the integrand itself is computed through a transform
    // that loses relative precision near the endpoint. A short run of
    // nonfinite leading nodes (same precision loss, deeper) is skipped as
    // long as it stays in a thin sliver of the interval; the fitted model
    // carries the kernel mass of the skipped region.
    const double big = upper - s[0];
    int jf = -1;
    double p = 0.0;
    bool have_fit = false, zero_fit = false;
    for (int j = 1; j + 1 < n && s[j + 1] - s[0] <= 0.05 * big; ++j) {
      const double g1 = values[j];
      const double g2 = values[j + 1];
      if (!(std::isfinite(g1) && std::isfinite(g2))) continue;
      if (g1 == 0.0 || g2 == 0.0 || g2 / g1 <= 0.0) {
        // A zero this close to the endpoint: remember the spot, keep
        // looking for a resolvable pair further out.
        if (jf < 0) {
          jf = j;
          zero_fit = true;
        }
        continue;
      }
      const double q = std::log(g2 / g1) /
                       std::log((s[j + 1] - s[0]) / (s[j] - s[0]));
      if (j > 1) {
        // Leading nodes were skipped, so the integrand already lost
        // precision deeper in; only trust a fit that also predicts the
        // node after the pair, so that values drawn from the degraded
        // region cannot sneak in.
        const double g3 = values[std::min(j + 2, n)];
        const double pred =
            g1 * std::pow((s[std::min(j + 2, n)] - s[0]) / (s[j] - s[0]), q);
        if (!std::isfinite(g3) || std::fabs(g3 - pred) > 0.05 * std::fabs(g3))
          continue;
      }
      jf = j;
      p = q;
      have_fit = true;
      zero_fit = false;
      break;
    }
    if (jf < 0) nonfinite_sample(s[1]);
    const double w = s[jf] - s[0];
    if (have_fit) {
      if (!(p > -1.0 + 1e-9))
        throw DomainError("quad: integrand diverges non-integrably at the "
                          "nonsingular endpoint");
      const double c = values[jf] / std::pow(w, p);
      total += c * std::pow(big, alpha - 1.0) *
               (std::pow(w, p + 1.0) / (p + 1.0) +
                (1.0 - alpha) / big * std::pow(w, p + 2.0) / (p + 2.0));
    } else if (zero_fit) {
      // Degenerate fit (a zero sample): constant extension of the right
      // node. The panel is a thin sliver of the interval, so this is far
      // below every supported tolerance.
      const double r = std::min(1.0, w / big);
      total += std::pow(big, alpha) * kernel_moment0(alpha, r) * values[jf];
    }
    j0 = jf;
  }
  for (int j = j0; j < n; ++j) {
    const double h = s[j + 1] - s[j];
    if (!(h > 0.0)) continue;
    if (!std::isfinite(values[j])) nonfinite_sample(s[j]);
    if (j + 1 < n && !std::isfinite(values[j + 1])) nonfinite_sample(s[j + 1]);
    double right = values[j + 1];
    if (j + 1 == n && !std::isfinite(right)) {
      // Kernel-singular endpoint: the moment weight there is finite only
      // through the kernel; a nonfinite g sample cannot be integrated.
      nonfinite_sample(s[j + 1]);
    }
    const double u0 = upper - s[j];
    const double r = std::min(1.0, h / u0);
    total += std::pow(u0, alpha) * kernel_moment0(alpha, r) * values[j] +
             std::pow(u0, alpha + 1.0) * kernel_moment1(alpha, r) *
                 (right - values[j]) / h;
  }
  return total;
}

}  // namespace

EvalResult weakly_singular_integral(const std::function<double(double)>& g,
                                    double lower, double upper, double exponent,
                                    bool at_upper_singularity,
                                    const QuadConfig& config) {
  check_config(config);
  if (!(exponent > 0.0))
    throw DomainError("quad: kernel exponent must be positive");
  if (!(lower <= upper)) throw DomainError("quad: requires lower <= upper");
  if (upper - lower < 1e-14) return EvalResult{0.0, 0.0, config.nodes};

  // Reduce the lower-singularity orientation to the upper-singularity core
  // by the reflection s -> lower + upper - s.
  Sampler sample;
  if (at_upper_singularity) {
    sample = [&g](double s) {
      try {
        return g(s);
      } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
  } else {
    const double c = lower + upper;
    sample = [&g, c](double s) {
      try {
        return g(c - s);
      } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
  }

  // Nested graded meshes share nodes; cache samples across levels.
  std::unordered_map<double, double> cache;
  auto cached = [&sample, &cache](double s) {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    const double v = sample(s);
    cache.emplace(s, v);
    return v;
  };

  const double q = config.grading;
  auto run_level = [&](int n) {
    std::vector<double> s(n + 1), v(n + 1);
    for (int j = 0; j <= n; ++j) {
      s[j] = (j == n) ? upper
                      : lower + (upper - lower) *
                                    std::pow(static_cast<double>(j) / n, q);
      v[j] = cached(s[j]);
    }
    return integrate_mesh(s, v, upper, exponent, sample);
  };

  int levels = std::max(config.refinement, 2);
  std::vector<double> est;
  int panels = 0;
  int n = (config.refinement == 1) ? std::max(9, config.nodes / 2) : config.nodes;
  for (int i = 0; i < levels; ++i, n *= 2) {
    est.push_back(run_level(n));
    panels += n;
  }
  const double coarse = est[est.size() - 2];
  const double fine = est.back();
  EvalResult out;
  out.err_est = std::fabs(fine - coarse);
  out.value = (config.refinement == 1) ? fine : fine + (fine - coarse) / 3.0;
  out.panels_used = panels;
  if (!std::isfinite(out.value))
    throw DomainError("quad: nonfinite result");
  return out;
}

}  // namespace quad
}  // namespace psifrac
