#include "combss/path.hpp"

#include <chrono>
#include <cmath>

#include "combss/parallel.hpp"

namespace combss {

Vector lambda_grid(const Vector& y, int n, int count, double factor) {
  if (count < 1) {
    throw InvalidInput(ErrorCode::InvalidConfig, "grid count must be >= 1");
  }
  if (!(factor > 0.0 && factor < 1.0)) {
    throw InvalidInput(ErrorCode::InvalidConfig,
                       "grid factor must lie in (0, 1)");
  }
  const double lambda_max = y.squaredNorm() / static_cast<double>(n);
  if (lambda_max == 0.0) {
    throw InvalidInput(ErrorCode::EmptyResponse,
                       "response is identically zero; grid would be zero");
  }
  Vector grid(count);
  double value = lambda_max;
  for (int l = 0; l < count; ++l) {
    grid(l) = value;
    value *= factor;
  }
  return grid;
}

Subset threshold(const Vector& t, double tau) {
  Subset s;
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    if (t(j) > tau) s.push_back(static_cast<int>(j));
  }
  return s;
}

RefitResult refit_ols(const Dataset& data, const Subset& subset) {
  RefitResult out;
  const int n = data.n();
  if (subset.empty()) {
    out.coeffs = Vector();
    out.train_mse = data.y().squaredNorm() / static_cast<double>(n);
    return out;
  }
  Matrix xs(n, static_cast<Eigen::Index>(subset.size()));
  for (std::size_t k = 0; k < subset.size(); ++k) {
    xs.col(static_cast<Eigen::Index>(k)) = data.x().col(subset[k]);
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(xs);
  out.coeffs = cod.solve(data.y());
  out.singular = cod.rank() < static_cast<Eigen::Index>(subset.size()) ||
                 static_cast<int>(subset.size()) > n;
  out.train_mse =
      (data.y() - xs * out.coeffs).squaredNorm() / static_cast<double>(n);
  return out;
}

double holdout_mse(const Dataset& holdout, const Subset& subset,
                   const Vector& coeffs) {
  Vector pred = Vector::Zero(holdout.n());
  for (std::size_t k = 0; k < subset.size(); ++k) {
    pred += holdout.x().col(subset[k]) * coeffs(static_cast<Eigen::Index>(k));
  }
  return (holdout.y() - pred).squaredNorm() /
         static_cast<double>(holdout.n());
}

SolutionPath run_path(const Dataset& train, const Dataset* validation,
                      const CombssConfig& cfg, const Vector& grid,
                      int n_threads, bool warm_across_grid) {
  if (validation && validation->p() != train.p()) {
    throw InvalidInput(ErrorCode::DimensionMismatch,
                       "validation set has a different number of columns");
  }
  SolutionPath path;
  path.config = cfg;
  path.records.resize(static_cast<std::size_t>(grid.size()));

  Vector carry;  // previous solution when chaining across the grid
  auto fit_one = [&](int i) {
    PathRecord& rec = path.records[static_cast<std::size_t>(i)];
    rec.lambda = grid(i);
    const auto start = std::chrono::steady_clock::now();
    try {
      const Vector* w0 = nullptr;
      Vector lifted;
      if (warm_across_grid && carry.size() == train.p()) {
        lifted = carry;
        const double midpoint = std::sqrt(std::log(2.0));
        for (Eigen::Index j = 0; j < lifted.size(); ++j) {
          if (lifted(j) == 0.0) lifted(j) = midpoint;
        }
        w0 = &lifted;
      }
      FitOutput fit = run_fit(train, rec.lambda, cfg, w0);
      if (warm_across_grid) carry = fit.state.w;
      rec.t_final = fit.state.t;
      rec.iters = fit.state.iter;
      rec.terminated_by = fit.state.terminated_by;
      rec.subset = threshold(fit.state.t, cfg.tau);
      RefitResult refit = refit_ols(train, rec.subset);
      rec.coeffs = refit.coeffs;
      rec.train_mse = refit.train_mse;
      rec.singular_refit = refit.singular;
      if (validation) {
        rec.val_mse = holdout_mse(*validation, rec.subset, rec.coeffs);
      }
    } catch (const NumericalError& e) {
      rec.failed = true;
      rec.error = e.what();
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  };

  if (warm_across_grid) {
    for (int i = 0; i < static_cast<int>(grid.size()); ++i) fit_one(i);
  } else {
    parallel_for(static_cast<int>(grid.size()), fit_one, n_threads);
  }

  if (validation) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < path.records.size(); ++i) {
      const PathRecord& rec = path.records[i];
      if (rec.failed) continue;
      if (rec.val_mse < best) {  // strict: ties keep the larger lambda
        best = rec.val_mse;
        path.best_index = static_cast<int>(i);
      }
    }
  }
  return path;
}

}  // namespace combss
