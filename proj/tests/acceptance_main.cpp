// Acceptance suite: runs every quantitative gate of the laboratory at its
// pinned tolerance and prints one pass/fail line per criterion.

#include <cstring>
#include <iostream>

#include "heis/acceptance.hpp"

int main(int argc, char** argv) {
  heis::AcceptanceOptions opt;
  opt.progress = &std::cout;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) opt.seed = std::strtoull(argv[++i], nullptr, 10);
    if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) opt.workers = std::atoi(argv[++i]);
  }

  auto reports = heis::run_acceptance(opt);
  int failures = 0;
  for (const auto& r : reports)
    if (!r.pass) ++failures;

  std::cout << "\nacceptance: " << (reports.size() - failures) << "/" << reports.size()
            << " criteria passed\n";
  for (const auto& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.summary.dump() << "\n";
  }
  return failures == 0 ? 0 : 1;
}
