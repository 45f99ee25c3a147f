// Acceptance suite runner: one line per criterion, nonzero exit on any
// failure. The same checks back `htlab validate`.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "htlab/validation.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20260810;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  std::printf("acceptance suite, seed %llu\n",
              static_cast<unsigned long long>(seed));
  auto results = htlab::validation::run_acceptance(seed);
  bool all_pass = true;
  double total = 0.0;
  for (const auto& r : results) {
    std::printf("[%s] %2d %-62s observed %.6g threshold %.6g (%.1fs)\n",
                r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.observed,
                r.threshold, r.seconds);
    if (!r.detail.empty()) std::printf("          %s\n", r.detail.c_str());
    all_pass = all_pass && r.pass;
    total += r.seconds;
  }
  std::printf("%s (total %.1fs)\n",
              all_pass ? "ALL CRITERIA PASSED" : "CRITERIA FAILED", total);
  return all_pass ? 0 : 1;
}
