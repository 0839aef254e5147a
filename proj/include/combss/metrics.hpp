#pragma once

#include "combss/types.hpp"

namespace combss {

/// Feature-level confusion counts; positive means selected.
struct ConfusionCounts {
  int tp = 0;
  int fp = 0;
  int tn = 0;
  int fn = 0;
};

/// |X (beta_hat - beta_true)|^2 / |X beta_true|^2. beta_hat carries refit
/// values at selected indices and zeros elsewhere.
double prediction_error(const Matrix& x, const Vector& beta_hat,
                        const Vector& beta_true);

ConfusionCounts confusion(const Subset& selected, const Subset& true_support,
                          int p);

struct SelectionScores {
  double mcc = 0.0;
  double f1 = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double accuracy = 0.0;
  bool degenerate = false;  // some ratio had an empty denominator
};

/// Standard selection scores. Any 0/0 ratio is reported as 0 with the
/// degenerate flag raised; MCC is 0 whenever a denominator factor vanishes.
SelectionScores scores(const ConfusionCounts& c);

}  // namespace combss
