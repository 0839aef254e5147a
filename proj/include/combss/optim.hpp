#pragma once

#include <vector>

#include "combss/grad.hpp"
#include "combss/types.hpp"

namespace combss {

enum class TerminationReason { Converged, MaxIters, AllFrozen };

const char* to_string(TerminationReason r);

struct IterationRecord {
  int iter = 0;
  double dt_inf = 0.0;  // max-norm change of t over the iteration
  int p_plus = 0;
  int cg_iters_beta = 0;
  int cg_iters_c = 0;
  double objective = 0.0;  // value at the point the gradient was taken
};

/// Optimizer state over the full coordinate range. Frozen coordinates hold
/// w_j = t_j = 0 for the rest of the run; t always equals the map of w.
struct FitState {
  Vector w;
  Vector t;
  std::vector<bool> frozen;
  Vector adam_u;  // first-moment buffer
  Vector adam_v;  // second-moment buffer
  int iter = 0;
  int consecutive_small = 0;
  TerminationReason terminated_by = TerminationReason::MaxIters;
  std::vector<IterationRecord> trace;

  int p() const { return static_cast<int>(w.size()); }
  int p_plus() const;
};

/// Start at the hypercube midpoint: w_j = sqrt(ln 2), so t_j = 1/2. Moments
/// zero, nothing frozen.
FitState init_state(int p);

/// One momentum step with bias correction,
///   u <- xi1 u - (1 - xi1) g,   v <- xi2 v + (1 - xi2) g.g,
///   w <- w + alpha * (u / (1 - xi1^l)) / sqrt(v / (1 - xi2^l) + c).
/// Frozen coordinates are untouched.
void adam_step(FitState& state, const Vector& grad, const CombssConfig& cfg);

/// w <- w - gd_alpha * g; frozen coordinates untouched.
void basic_gd_step(FitState& state, const Vector& grad,
                   const CombssConfig& cfg);

/// Freezes every unfrozen coordinate with t_j < eta: w_j and t_j drop to 0
/// permanently and the momentum buffers are cleared there. Returns the number
/// of newly frozen coordinates.
int truncate(FitState& state, const CombssConfig& cfg);

struct FitOutput {
  FitState state;
  GradientWorkspace workspace;
};

/// Full gradient-descent run at one lambda: gradient, step, truncate, shrink
/// the active design when coordinates freeze. Terminates once the max-norm
/// t-change stays within term_epsilon for term_window consecutive iterations,
/// at max_iters, or immediately when every coordinate freezes.
/// w_init overrides the midpoint start; zero entries there would be stuck
/// (zero gradient), so callers passing a previous solution should lift them
/// first.
FitOutput run_fit(const Dataset& data, double lambda, const CombssConfig& cfg,
                  const Vector* w_init = nullptr);

}  // namespace combss
