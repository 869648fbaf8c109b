#pragma once

#include <string>
#include <vector>

namespace inrfort {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // one-line measurement summary
};

// The embedded verification battery:
//   grad-fd        analytic MSE gradient vs central finite differences
//   penalty-unit-norm  robust-minus-data gradient direction has unit norm
//   taylor-gap     |dL| <= ||grad|| ||dtheta|| + C ||dtheta||^2 on a
//                  quick-trained model, gap ratio shrinking with strength
//   psnr-analytic  closed-form PSNR cases, including the zero-MSE sentinel
//
// corrupt_backward injects a deliberate error into the analytic gradient so
// the battery's failure path can be exercised (negative control).
std::vector<CheckResult> run_selfcheck(bool corrupt_backward = false);

// Prints "[PASS] name: detail" / "[FAIL] ..." per check to stdout and
// returns true when all passed.
bool report_selfcheck(const std::vector<CheckResult>& results);

}  // namespace inrfort
