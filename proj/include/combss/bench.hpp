#pragma once

#include <string>
#include <vector>

#include "combss/metrics.hpp"
#include "combss/path.hpp"
#include "combss/simulate.hpp"

namespace combss {

/// One method's selected model on one replication, scored against the
/// generating coefficients.
struct MethodOutcome {
  Subset subset;
  Vector coeffs;
  double val_mse = std::numeric_limits<double>::quiet_NaN();
  double pe = std::numeric_limits<double>::quiet_NaN();
  SelectionScores sel;
  bool failed = false;
};

/// Refit on train, score on the holdout and against beta_true (prediction
/// error uses the holdout design).
MethodOutcome evaluate_subset(const Dataset& train, const Dataset& holdout,
                              const Vector& beta_true, const Subset& subset);

/// Full tuning protocol: lambda grid from the training response, one cold
/// fit per lambda, model chosen by holdout MSE.
MethodOutcome run_combss_method(const Dataset& train, const Dataset& holdout,
                                const Vector& beta_true,
                                const CombssConfig& cfg, int grid_count,
                                double grid_factor);

/// Stepwise table over k = 0..k_max, model size chosen by holdout MSE
/// (ties to the smaller size).
MethodOutcome run_stepwise_method(const Dataset& train, const Dataset& holdout,
                                  const Vector& beta_true, int k_max);

/// Exhaustive table over k = 0..k_max, model size chosen by holdout MSE.
MethodOutcome run_exhaustive_method(const Dataset& train,
                                    const Dataset& holdout,
                                    const Vector& beta_true, int k_max);

struct BenchScenario {
  int n = 100;
  int p = 20;
  int k0 = 10;
  double rho = 0.8;
  std::vector<double> snrs;
  std::vector<BetaType> beta_types;
  int replications = 100;
  std::vector<std::string> methods;  // combss | forward_stepwise | exhaustive
                                     // | external:<subset file>
  uint64_t seed = 0;
  int validation_n = 5000;
  int grid_count = 50;
  double grid_factor = 0.8;
  int fs_k_max = 0;  // 0 = min(n, p, 50)

  void check() const;
};

struct BenchRow {
  int beta_type = 0;
  double snr = 0.0;
  int replication = 0;
  std::string method;
  std::string metric;
  double value = 0.0;
};

struct BenchSummaryRow {
  int beta_type = 0;
  double snr = 0.0;
  std::string method;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<BenchSummaryRow> summary;
};

/// Runs every (beta type, snr, replication, method) cell. Replication r of
/// cell c draws train data from substream c*2R + 2r and holdout data from
/// c*2R + 2r + 1, so results do not depend on scheduling.
BenchResult run_bench(const BenchScenario& scenario, int n_threads = 0);

}  // namespace combss
