#pragma once

#include <limits>
#include <string>
#include <vector>

#include "combss/optim.hpp"
#include "combss/types.hpp"

namespace combss {

struct PathRecord {
  double lambda = 0.0;
  Subset subset;       // s_j = I(t_j > tau) on the final t
  Vector coeffs;       // least-squares refit over the subset
  Vector t_final;      // full length p
  double val_mse = std::numeric_limits<double>::quiet_NaN();
  double train_mse = 0.0;
  int iters = 0;
  double runtime_ms = 0.0;
  TerminationReason terminated_by = TerminationReason::MaxIters;
  bool singular_refit = false;
  bool failed = false;
  std::string error;
};

struct SolutionPath {
  std::vector<PathRecord> records;  // lambda strictly decreasing
  int best_index = -1;              // argmin val_mse; -1 without validation
  CombssConfig config;
};

/// Geometric grid lambda_l = (|y|^2 / n) * factor^(l-1), l = 1..count.
Vector lambda_grid(const Vector& y, int n, int count = 50,
                   double factor = 0.8);

/// Strict threshold: indices j with t_j > tau.
Subset threshold(const Vector& t, double tau);

struct RefitResult {
  Vector coeffs;          // one per selected index
  double train_mse = 0.0; // (1/n)|y - X_[s] coeffs|^2
  bool singular = false;  // rank-deficient or overdetermined-by-columns
};

/// Least squares on the selected columns; minimum-norm solution with the
/// singular flag set when the subproblem is rank deficient or |s| > n. Empty
/// subset predicts zero.
RefitResult refit_ols(const Dataset& data, const Subset& subset);

/// Mean squared prediction error of the refit coefficients on a holdout set.
double holdout_mse(const Dataset& holdout, const Subset& subset,
                   const Vector& coeffs);

/// One fit per grid value (cold start each), thresholded and refit. With a
/// validation set, best_index is the argmin of validation MSE; ties go to the
/// larger lambda. Fits run on a bounded worker pool; record order follows the
/// grid, not completion time. A fit that fails numerically is recorded with
/// its message and skipped in the argmin.
///
/// warm_across_grid chains the fits instead: each lambda starts from the
/// previous solution's w, with coordinates that had been driven to zero
/// lifted back to the midpoint so a smaller penalty can re-admit them. The
/// chain runs sequentially.
SolutionPath run_path(const Dataset& train, const Dataset* validation,
                      const CombssConfig& cfg, const Vector& grid,
                      int n_threads = 0, bool warm_across_grid = false);

}  // namespace combss
