#ifndef PSIFRAC_VERIFY_HPP_
#define PSIFRAC_VERIFY_HPP_

#include <string>
#include <vector>

namespace psifrac {
namespace verify {

struct CaseResult {
  std::string name;
  double error = 0.0;  // measured discrepancy (signed for bound checks)
  double tol = 0.0;
  bool pass = false;   // error <= tol
};

struct SuiteReport {
  std::string suite;
  std::vector<CaseResult> cases;
  bool pass = true;
};

// The individual suites, in run order ("all" is not included).
const std::vector<std::string>& suite_names();

// Runs one suite. tol_override > 0 replaces every case tolerance.
// Throws DomainError for an unknown suite name.
SuiteReport run_suite(const std::string& suite, double tol_override = 0.0);

// Runs one suite, or every suite for "all".
std::vector<SuiteReport> run(const std::string& suite_or_all,
                             double tol_override = 0.0);

}  // namespace verify
}  // namespace psifrac

#endif  // PSIFRAC_VERIFY_HPP_
