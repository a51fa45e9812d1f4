// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.

#include <cstdio>

#include "lebesgue_lab/acceptance.hpp"

int main() {
  lebesgue_lab::acceptance::Context ctx;
  ctx.threads = lebesgue_lab::resolve_threads();
  int failed = 0;
  lebesgue_lab::acceptance::run_all(ctx, [&](const auto& r) {
    std::printf("%s\n", r.line().c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  });
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
