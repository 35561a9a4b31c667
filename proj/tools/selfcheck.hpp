#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace arithreg::cli {

/// Deliberate faults used to confirm that the suites can fail.
struct Mutations {
  /// Conjugates the transform under test.
  bool dft_sign = false;
  /// Replaces the faithful second width by eta/8.
  bool second_width = false;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t checks = 0;
  std::string detail;
};

std::vector<SuiteResult> run_selfcheck(const Mutations& mutations);

}  // namespace arithreg::cli
