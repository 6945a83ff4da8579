#pragma once

#include <ostream>

namespace mcm::cli {

/// Cross-checks the statistics kernels against the slow reference
/// implementations on seeded random inputs. Returns true when all pass.
bool run_selftest(std::ostream& out, bool verbose);

}  // namespace mcm::cli
