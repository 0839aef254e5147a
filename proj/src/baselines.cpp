#include "combss/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "combss/path.hpp"

namespace combss {

namespace {

// Advances indices to the next k-combination of {0..p-1} in lexicographic
// order; returns false after the last one.
bool next_combination(Subset& indices, int p) {
  const int k = static_cast<int>(indices.size());
  for (int i = k - 1; i >= 0; --i) {
    if (indices[static_cast<std::size_t>(i)] < p - (k - i)) {
      ++indices[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        indices[static_cast<std::size_t>(j)] =
            indices[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

BestSubsetTable exhaustive_best_subset(const Dataset& data, int k_max) {
  if (data.p() > 20) {
    throw InvalidInput(ErrorCode::DimensionTooLarge,
                       "exhaustive search is limited to p <= 20 (got p = " +
                           std::to_string(data.p()) + ")");
  }
  if (k_max < 0 || k_max > data.p()) {
    throw InvalidInput(ErrorCode::InvalidConfig,
                       "k_max must lie in [0, p] for exhaustive search");
  }
  BestSubsetTable table;
  table.by_size.resize(static_cast<std::size_t>(k_max) + 1);
  table.by_size[0].subset = {};
  table.by_size[0].rss_n = data.y().squaredNorm() / data.n();

  for (int k = 1; k <= k_max; ++k) {
    BestSubsetEntry best;
    best.rss_n = std::numeric_limits<double>::infinity();
    Subset indices(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) indices[static_cast<std::size_t>(i)] = i;
    do {
      RefitResult fit = refit_ols(data, indices);
      if (fit.train_mse < best.rss_n) {
        best.rss_n = fit.train_mse;
        best.subset = indices;
        best.singular = fit.singular;
      }
    } while (next_combination(indices, data.p()));
    table.by_size[static_cast<std::size_t>(k)] = std::move(best);
  }
  return table;
}

BestSubsetTable forward_stepwise(const Dataset& data, int k_max) {
  const int n = data.n();
  const int p = data.p();
  if (k_max < 0 || k_max > std::min(n, p)) {
    throw InvalidInput(ErrorCode::InvalidConfig,
                       "k_max must lie in [0, min(n, p)] for stepwise search");
  }

  BestSubsetTable table;
  table.by_size.resize(static_cast<std::size_t>(k_max) + 1);
  table.by_size[0].subset = {};
  table.by_size[0].rss_n = data.y().squaredNorm() / n;

  // Columns progressively residualized against the selected orthonormal
  // basis; gain of adding j is (c_j . r)^2 / |c_j|^2.
  Matrix cols = data.x();
  Vector residual = data.y();
  std::vector<bool> chosen(static_cast<std::size_t>(p), false);
  std::vector<double> norm0(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    norm0[static_cast<std::size_t>(j)] = cols.col(j).squaredNorm();
  }
  Subset selected;

  for (int k = 1; k <= k_max; ++k) {
    int best_j = -1;
    double best_gain = -1.0;
    for (int j = 0; j < p; ++j) {
      if (chosen[static_cast<std::size_t>(j)]) continue;
      const double cn = cols.col(j).squaredNorm();
      // A column numerically inside the current span cannot reduce the RSS.
      if (cn <= 1e-12 * norm0[static_cast<std::size_t>(j)] || cn == 0.0) {
        continue;
      }
      const double proj = cols.col(j).dot(residual);
      const double gain = proj * proj / cn;
      if (gain > best_gain) {
        best_gain = gain;
        best_j = j;
      }
    }
    if (best_j < 0) {
      // Remaining columns are all in the span; RSS cannot improve.
      for (int kk = k; kk <= k_max; ++kk) {
        table.by_size[static_cast<std::size_t>(kk)] =
            table.by_size[static_cast<std::size_t>(kk - 1)];
      }
      break;
    }
    chosen[static_cast<std::size_t>(best_j)] = true;
    Vector q = cols.col(best_j) / cols.col(best_j).norm();
    residual -= q * q.dot(residual);
    for (int j = 0; j < p; ++j) {
      if (!chosen[static_cast<std::size_t>(j)]) {
        cols.col(j) -= q * q.dot(cols.col(j));
      }
    }
    selected.push_back(best_j);
    Subset sorted = selected;
    std::sort(sorted.begin(), sorted.end());
    table.by_size[static_cast<std::size_t>(k)].subset = std::move(sorted);
    table.by_size[static_cast<std::size_t>(k)].rss_n =
        residual.squaredNorm() / n;
  }
  return table;
}

}  // namespace combss
