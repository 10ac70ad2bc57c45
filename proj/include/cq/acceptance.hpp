#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cq::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  unsigned jobs = 0;           // 0 = hardware concurrency
  std::uint64_t seed = 2718;
};

/// Run every acceptance criterion, streaming one PASS/FAIL line per
/// criterion to `progress`.
std::vector<CriterionResult> run_all(const Options& opt, std::ostream& progress);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace cq::acceptance
