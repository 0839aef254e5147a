#include "combss/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "combss/baselines.hpp"
#include "combss/parallel.hpp"

namespace combss {

namespace {

Subset support_of(const Vector& beta) {
  Subset s;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) s.push_back(static_cast<int>(j));
  }
  return s;
}

MethodOutcome pick_by_holdout(const Dataset& train, const Dataset& holdout,
                              const Vector& beta_true,
                              const BestSubsetTable& table) {
  int best_k = 0;
  double best_mse = std::numeric_limits<double>::infinity();
  std::vector<RefitResult> refits(table.by_size.size());
  for (std::size_t k = 0; k < table.by_size.size(); ++k) {
    refits[k] = refit_ols(train, table.by_size[k].subset);
    const double mse =
        holdout_mse(holdout, table.by_size[k].subset, refits[k].coeffs);
    if (mse < best_mse) {  // strict: ties keep the smaller size
      best_mse = mse;
      best_k = static_cast<int>(k);
    }
  }
  MethodOutcome out = evaluate_subset(
      train, holdout, beta_true, table.by_size[static_cast<std::size_t>(best_k)].subset);
  return out;
}

}  // namespace

MethodOutcome evaluate_subset(const Dataset& train, const Dataset& holdout,
                              const Vector& beta_true, const Subset& subset) {
  MethodOutcome out;
  out.subset = subset;
  RefitResult refit = refit_ols(train, subset);
  out.coeffs = refit.coeffs;
  out.val_mse = holdout_mse(holdout, subset, refit.coeffs);
  Vector beta_hat = Vector::Zero(train.p());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    beta_hat(subset[k]) = refit.coeffs(static_cast<Eigen::Index>(k));
  }
  out.pe = prediction_error(holdout.x(), beta_hat, beta_true);
  out.sel = scores(confusion(subset, support_of(beta_true), train.p()));
  return out;
}

MethodOutcome run_combss_method(const Dataset& train, const Dataset& holdout,
                                const Vector& beta_true,
                                const CombssConfig& cfg, int grid_count,
                                double grid_factor) {
  const Vector grid =
      lambda_grid(train.y(), train.n(), grid_count, grid_factor);
  SolutionPath path = run_path(train, &holdout, cfg, grid, 1);
  if (path.best_index < 0) {
    MethodOutcome out;
    out.failed = true;
    return out;
  }
  return evaluate_subset(
      train, holdout, beta_true,
      path.records[static_cast<std::size_t>(path.best_index)].subset);
}

MethodOutcome run_stepwise_method(const Dataset& train, const Dataset& holdout,
                                  const Vector& beta_true, int k_max) {
  return pick_by_holdout(train, holdout, beta_true,
                         forward_stepwise(train, k_max));
}

MethodOutcome run_exhaustive_method(const Dataset& train,
                                    const Dataset& holdout,
                                    const Vector& beta_true, int k_max) {
  return pick_by_holdout(train, holdout, beta_true,
                         exhaustive_best_subset(train, k_max));
}

void BenchScenario::check() const {
  auto fail = [](const std::string& msg) {
    throw InvalidInput(ErrorCode::InvalidConfig, msg);
  };
  if (replications < 1) fail("replications must be >= 1");
  if (snrs.empty()) fail("at least one snr value required");
  if (beta_types.empty()) fail("at least one beta type required");
  if (methods.empty()) fail("at least one method required");
  if (validation_n < 1) fail("validation_n must be >= 1");
  for (const std::string& m : methods) {
    if (m == "exhaustive" && p > 20) {
      throw InvalidInput(ErrorCode::DimensionTooLarge,
                         "exhaustive method requires p <= 20 (got p = " +
                             std::to_string(p) + ")");
    }
    if (m != "combss" && m != "forward_stepwise" && m != "exhaustive" &&
        m.rfind("external:", 0) != 0) {
      fail("unknown method '" + m + "'");
    }
  }
  SimSpec probe{n, p, rho, snrs.front(), beta_types.front(), k0, seed};
  probe.check();
}

namespace {

std::vector<Subset> load_external_subsets(const std::string& file, int p,
                                          int replications) {
  std::ifstream in(file);
  if (!in) {
    throw InvalidInput(ErrorCode::Io,
                       "cannot open external subset file '" + file + "'");
  }
  std::vector<Subset> subsets;
  std::string line;
  while (std::getline(in, line)) {
    Subset s;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell.empty()) continue;
      const int j = std::stoi(cell);
      if (j < 0 || j >= p) {
        throw InvalidInput(ErrorCode::Io,
                           "external subset index " + std::to_string(j) +
                               " out of range in '" + file + "'");
      }
      s.push_back(j);
    }
    std::sort(s.begin(), s.end());
    subsets.push_back(std::move(s));
  }
  if (static_cast<int>(subsets.size()) < replications) {
    throw InvalidInput(ErrorCode::Io,
                       "external subset file '" + file + "' has " +
                           std::to_string(subsets.size()) + " lines, need " +
                           std::to_string(replications));
  }
  return subsets;
}

}  // namespace

BenchResult run_bench(const BenchScenario& scenario, int n_threads) {
  scenario.check();
  const int reps = scenario.replications;

  struct Cell {
    BetaType beta_type;
    double snr;
  };
  std::vector<Cell> cells;
  for (BetaType bt : scenario.beta_types) {
    for (double snr : scenario.snrs) cells.push_back({bt, snr});
  }

  // External files are read once up front so a bad file fails fast.
  std::vector<std::vector<Subset>> external_subsets(scenario.methods.size());
  for (std::size_t m = 0; m < scenario.methods.size(); ++m) {
    const std::string& method = scenario.methods[m];
    if (method.rfind("external:", 0) == 0) {
      external_subsets[m] = load_external_subsets(
          method.substr(9), scenario.p, reps);
    }
  }

  const int fs_cap = scenario.fs_k_max > 0
                         ? scenario.fs_k_max
                         : std::min({scenario.n, scenario.p, 50});

  std::vector<std::vector<MethodOutcome>> outcomes(
      cells.size() * static_cast<std::size_t>(reps));

  parallel_for(
      static_cast<int>(cells.size()) * reps,
      [&](int task) {
        const std::size_t cell_idx = static_cast<std::size_t>(task / reps);
        const int rep = task % reps;
        const Cell& cell = cells[cell_idx];

        SimSpec spec{scenario.n,  scenario.p,   scenario.rho, cell.snr,
                     cell.beta_type, scenario.k0, scenario.seed};
        SimSpec val_spec = spec;
        val_spec.n = scenario.validation_n;
        const uint64_t base =
            static_cast<uint64_t>(cell_idx) * 2ULL *
            static_cast<uint64_t>(reps);
        SimData train_data = gen_dataset(spec, base + 2ULL * rep);
        SimData val_data = gen_dataset(val_spec, base + 2ULL * rep + 1ULL);
        Dataset train = validate_dataset(train_data.x, train_data.y);
        Dataset holdout = validate_dataset(val_data.x, val_data.y);

        std::vector<MethodOutcome>& row = outcomes[static_cast<std::size_t>(task)];
        row.resize(scenario.methods.size());
        for (std::size_t m = 0; m < scenario.methods.size(); ++m) {
          const std::string& method = scenario.methods[m];
          if (method == "combss") {
            CombssConfig cfg = default_config(train);
            row[m] = run_combss_method(train, holdout, train_data.beta, cfg,
                                       scenario.grid_count,
                                       scenario.grid_factor);
          } else if (method == "forward_stepwise") {
            row[m] = run_stepwise_method(train, holdout, train_data.beta,
                                         fs_cap);
          } else if (method == "exhaustive") {
            row[m] = run_exhaustive_method(train, holdout, train_data.beta,
                                           scenario.p);
          } else {
            row[m] = evaluate_subset(train, holdout, train_data.beta,
                                     external_subsets[m][static_cast<std::size_t>(rep)]);
          }
        }
      },
      n_threads);

  static const char* kMetrics[] = {"mcc",        "f1",       "sensitivity",
                                   "specificity", "accuracy", "pe"};
  auto metric_value = [](const MethodOutcome& o, const std::string& name) {
    if (name == "mcc") return o.sel.mcc;
    if (name == "f1") return o.sel.f1;
    if (name == "sensitivity") return o.sel.sensitivity;
    if (name == "specificity") return o.sel.specificity;
    if (name == "accuracy") return o.sel.accuracy;
    return o.pe;
  };

  BenchResult result;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int r = 0; r < reps; ++r) {
      const auto& row = outcomes[c * static_cast<std::size_t>(reps) +
                                 static_cast<std::size_t>(r)];
      for (std::size_t m = 0; m < scenario.methods.size(); ++m) {
        for (const char* metric : kMetrics) {
          result.rows.push_back({static_cast<int>(cells[c].beta_type),
                                 cells[c].snr, r, scenario.methods[m], metric,
                                 metric_value(row[m], metric)});
        }
      }
    }
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t m = 0; m < scenario.methods.size(); ++m) {
      for (const char* metric : kMetrics) {
        double sum = 0.0;
        for (int r = 0; r < reps; ++r) {
          sum += metric_value(outcomes[c * static_cast<std::size_t>(reps) +
                                       static_cast<std::size_t>(r)][m],
                              metric);
        }
        const double mean = sum / reps;
        double ss = 0.0;
        for (int r = 0; r < reps; ++r) {
          const double d =
              metric_value(outcomes[c * static_cast<std::size_t>(reps) +
                                    static_cast<std::size_t>(r)][m],
                           metric) -
              mean;
          ss += d * d;
        }
        const double stderr_ =
            reps > 1 ? std::sqrt(ss / (reps - 1)) /
                           std::sqrt(static_cast<double>(reps))
                     : 0.0;
        result.summary.push_back({static_cast<int>(cells[c].beta_type),
                                  cells[c].snr, scenario.methods[m], metric,
                                  mean, stderr_});
      }
    }
  }
  return result;
}

}  // namespace combss
