// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include "lpm/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
  int first = 1, last = lpm::kAcceptanceCount;
  if (argc > 1) first = last = std::atoi(argv[1]);
  int failed = 0;
  for (int id = first; id <= last; ++id) {
    const auto t0 = std::chrono::steady_clock::now();
    const lpm::CheckResult r = lpm::acceptance_criterion(id);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s -- %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", id, r.name.c_str(), r.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
