#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wronski {

struct AcceptanceConfig {
  uint64_t seed = 1;
  int starts = 200;
  int jobs = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured quantities behind the verdict
  double seconds = 0.0;
};

inline constexpr int kCriteria = 10;

// Runs acceptance criterion id (1..10). Throws MathError for other ids.
CriterionResult run_criterion(int id, const AcceptanceConfig& cfg);

// "PASS 3 <name>: <detail> (<seconds> s)"
std::string format_line(const CriterionResult& r);

}  // namespace wronski
