#pragma once

#include <string>
#include <vector>

namespace casimir {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick self-check of the library invariants (limits, identities, route
/// agreement, symmetries). Takes well under a minute on one core.
std::vector<CheckOutcome> run_verification();

}  // namespace casimir
