#include "combss/metrics.hpp"

#include <cmath>

namespace combss {

double prediction_error(const Matrix& x, const Vector& beta_hat,
                        const Vector& beta_true) {
  const double denom = (x * beta_true).squaredNorm();
  if (denom == 0.0) {
    throw InvalidInput(ErrorCode::NullSignal,
                       "true signal X beta is identically zero");
  }
  return (x * (beta_hat - beta_true)).squaredNorm() / denom;
}

ConfusionCounts confusion(const Subset& selected, const Subset& true_support,
                          int p) {
  std::vector<bool> sel(static_cast<std::size_t>(p), false);
  std::vector<bool> truth(static_cast<std::size_t>(p), false);
  for (int j : selected) sel[static_cast<std::size_t>(j)] = true;
  for (int j : true_support) truth[static_cast<std::size_t>(j)] = true;
  ConfusionCounts c;
  for (int j = 0; j < p; ++j) {
    const bool s = sel[static_cast<std::size_t>(j)];
    const bool t = truth[static_cast<std::size_t>(j)];
    if (s && t) ++c.tp;
    else if (s && !t) ++c.fp;
    else if (!s && t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

SelectionScores scores(const ConfusionCounts& c) {
  SelectionScores s;
  const double tp = c.tp, fp = c.fp, tn = c.tn, fn = c.fn;
  const double p = tp + fp + tn + fn;

  const double f1_den = 2.0 * tp + fp + fn;
  if (f1_den == 0.0) {
    s.f1 = 0.0;
    s.degenerate = true;
  } else {
    s.f1 = 2.0 * tp / f1_den;
  }

  if (tp + fn == 0.0) {
    s.sensitivity = 0.0;
    s.degenerate = true;
  } else {
    s.sensitivity = tp / (tp + fn);
  }

  if (tn + fp == 0.0) {
    s.specificity = 0.0;
    s.degenerate = true;
  } else {
    s.specificity = tn / (tn + fp);
  }

  s.accuracy = p > 0.0 ? (tp + tn) / p : 0.0;

  const double mcc_fac =
      (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (mcc_fac == 0.0) {
    s.mcc = 0.0;
    s.degenerate = true;
  } else {
    s.mcc = (tp * tn - fp * fn) / std::sqrt(mcc_fac);
  }
  return s;
}

}  // namespace combss
