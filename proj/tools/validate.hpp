#pragma once

#include <string>
#include <vector>

namespace ged::cli {

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

// Full analytic-vs-simulation invariant grid: exact moment identities,
// cross-path signal-moment agreement (closed form, quadrature, Monte Carlo),
// false-alarm calibration, detection fidelity, threshold scaling, and the
// noise density normalization/oracle comparison. quick shrinks grids and
// trial counts to finish in well under a minute.
std::vector<CheckResult> run_validation(bool quick, unsigned threads);

}  // namespace ged::cli
