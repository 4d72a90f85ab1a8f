#pragma once

// Quick invariant suite behind `flatheat selftest`. Each check is small
// enough that the whole suite runs in seconds.

#include <string>
#include <vector>

namespace flatheat {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelfTestResult> run_selftest();

}  // namespace flatheat
