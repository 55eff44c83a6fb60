#include <cstdio>
#include <exception>

#include "wronski/acceptance.hpp"

int main() {
  wronski::AcceptanceConfig cfg;
  int failed = 0;
  for (int id = 1; id <= wronski::kCriteria; ++id) {
    try {
      const wronski::CriterionResult r = wronski::run_criterion(id, cfg);
      std::printf("%s\n", wronski::format_line(r).c_str());
      failed += !r.pass;
    } catch (const std::exception& e) {
      std::printf("FAIL %d: %s\n", id, e.what());
      ++failed;
    }
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", wronski::kCriteria - failed, wronski::kCriteria);
  return failed == 0 ? 0 : 1;
}
