#pragma once

#include <vector>

#include "combss/types.hpp"

namespace combss {

struct BestSubsetEntry {
  Subset subset;
  double rss_n = 0.0;  // (1/n)|y - X_[s] b_[s]|^2 at the least-squares refit
  bool singular = false;
};

/// One entry per model size k = 0..k_max; rss_n is non-increasing in k.
struct BestSubsetTable {
  std::vector<BestSubsetEntry> by_size;
};

/// Enumerates every subset of each size up to k_max and keeps the refit-RSS
/// minimizer; ties go to the lexicographically smallest index list. Guarded
/// at p <= 20.
BestSubsetTable exhaustive_best_subset(const Dataset& data, int k_max);

/// Greedy nested selection: each step adds the variable whose inclusion
/// minimizes the refit RSS (equivalently, maximizes the squared correlation
/// of the response with the column residualized against the current basis).
BestSubsetTable forward_stepwise(const Dataset& data, int k_max);

}  // namespace combss
