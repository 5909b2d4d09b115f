#pragma once

#include <cstdint>
#include <vector>

#include "pomc/model.hpp"
#include "pomc/run_mode.hpp"

namespace pomc {

/// Empirical state counts over sampled paths: counts[t][s] is the number of
/// runs whose time-t state is s.
struct FrequencyTable {
  unsigned long runs = 0;
  std::vector<std::vector<unsigned long>> counts;

  double frequency(unsigned long t, StateIndex s) const {
    if (runs == 0) return 0.0;
    return static_cast<double>(counts.at(t).at(s)) / static_cast<double>(runs);
  }
};

/// Samples n paths of length horizon+1 by inverse CDF over the exact rational
/// weights. Each path draws from its own generator seeded by (seed, path
/// index), so the table depends only on (horizon, n, seed), never on the mode
/// or thread count. n = 0 yields an empty table.
FrequencyTable simulate_runs(const PODTMC& m, unsigned long horizon, unsigned long n,
                             std::uint64_t seed, RunMode mode = RunMode::serial);

} // namespace pomc
