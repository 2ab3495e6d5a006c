#pragma once

#include <string>
#include <vector>

#include "prism/algebra.hpp"

namespace prism {

/// One PSI benchmark measurement: wall-clock seconds per protocol phase.
struct BenchPoint {
  u64 b = 0;
  u64 m = 0;
  unsigned threads = 1;
  double share_gen = 0;
  double server_eval = 0;
  double owner_finalize = 0;
};

// Runs the PSI pipeline phase-by-phase on synthetic data for every
// (b, m, threads) grid point. fill is the fraction of presence bits set.
std::vector<BenchPoint> run_bench(const std::vector<u64>& domain_sizes,
                                  const std::vector<u64>& owner_counts,
                                  const std::vector<unsigned>& thread_counts, u64 seed,
                                  double fill = 0.5);

std::string bench_csv(const std::vector<BenchPoint>& points);

}  // namespace prism
