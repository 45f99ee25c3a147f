#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace htlab::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string detail;       // worst observed quantity vs its threshold
  double observed = 0.0;
  double threshold = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

// Runs the acceptance suite. Every tolerance is pinned here; the seed only
// moves Monte Carlo estimates within them.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

}  // namespace htlab::validation
