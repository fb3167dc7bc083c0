#pragma once

#include <iosfwd>
#include <vector>

#include "heis/report.hpp"

namespace heis {

struct AcceptanceOptions {
  uint64_t seed = 7;
  int workers = 2;
  bool quick = false;  // reduced budgets for smoke runs (not the gate)
  std::ostream* progress = nullptr;
};

/// The acceptance matrix: every quantitative gate of the laboratory, with
/// pinned tolerances. Prints one pass/fail line per criterion when a
/// progress stream is given.
std::vector<CheckReport> run_acceptance(const AcceptanceOptions& opt);

}  // namespace heis
