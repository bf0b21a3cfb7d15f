#pragma once

#include <string>
#include <vector>

namespace thermo {

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;  // worst deviation or failure description
};

// self-contained oracle suite over small graphs; max_sites caps the graph
// sizes used (checks needing larger graphs are skipped)
std::vector<CheckResult> run_verification(int max_sites = 6);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace thermo
