#ifndef PSIFRAC_CATALOG_HPP_
#define PSIFRAC_CATALOG_HPP_

#include <map>
#include <string>
#include <vector>

#include "psifrac/fn.hpp"
#include "psifrac/operators.hpp"
#include "psifrac/psi.hpp"
#include "psifrac/quad.hpp"

namespace psifrac {
namespace catalog {

enum class OpKind { kIntegral, kDerivative };

using ParamMap = std::map<std::string, double>;

// Registry row: a named classical operator and the parameters it takes.
struct Entry {
  std::string name;
  OpKind kind = OpKind::kIntegral;
  std::vector<std::string> required;
  std::vector<std::string> optional;  // "L" marks a truncated infinite domain
  std::string note;                   // one-line description with attribution
};

// All named operators, integrals first.
const std::vector<Entry>& registry();

// A resolved preset: entry plus validated parameters with defaults filled in.
struct Preset {
  Entry entry;
  ParamMap params;
};

// Throws DomainError for an unknown name, a missing required parameter, a
// parameter the name does not take, or an out-of-range parameter value.
Preset resolve(OpKind kind, const std::string& name,
               const ParamMap& params = {});

// Evaluates the named operator of order alpha applied to f at x.
//
// `base` supplies the working interval [a, b]; presets with a fixed
// transform (Hadamard, Katugampola, ...) build their own transform over that
// interval and ignore base's. psi_caputo / psi_riemann_liouville use base
// as-is. Operators defined over infinite intervals evaluate on the
// truncation [x - L, x] (left tail) / [x, x + L] (right tail) and assume
// exponential decay of f toward the cut; a tail estimate above config.tol
// prints a warning to standard error.
quad::EvalResult apply(const Preset& preset, double alpha, const Fn& f,
                       const psi::PsiSpec& base, double x,
                       const quad::QuadConfig& config = {});

}  // namespace catalog
}  // namespace psifrac

#endif  // PSIFRAC_CATALOG_HPP_
