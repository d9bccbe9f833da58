#pragma once

#include <iosfwd>
#include <string>

#include "casimir/config.hpp"

namespace casimir {

enum ExitCode : int {
  exit_success = 0,
  exit_validation = 1,
  exit_accuracy = 2,
  exit_verification = 3,
};

/// Runs a validated config. CSV (or the verification table) goes to out,
/// one machine-readable line per problem to diag ("error row=2 kind=... message=...").
int run(const RunConfig& config, std::ostream& out, std::ostream& diag);

/// Scientific notation with 12 significant digits; never NaN or inf (callers check).
std::string csv_number(double v);

}  // namespace casimir
