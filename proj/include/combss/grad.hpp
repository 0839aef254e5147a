#pragma once

#include <vector>

#include "combss/linop.hpp"
#include "combss/types.hpp"

namespace combss {

/// t_j = 1 - exp(-w_j^2), clamped to [0, kMaxT].
inline double map_w_to_t_scalar(double w) {
  const double t = -std::expm1(-w * w);
  return t < kMaxT ? t : kMaxT;
}

Vector map_w_to_t(const Vector& w);

/// Per-fit scratch for the gradient chain on the active coordinates. After a
/// refresh at t:
///   beta = L_t^{-1} (t . xty)
///   a    = (X^T X / n)(t . beta) - xty
///   b    = a - (delta/n)(t . beta)
///   c    = L_t^{-1} (t . a)
///   d    = (X^T X / n - (delta/n) I)(t . c)
///   zeta = 2 (beta . (a - d)) - 2 (b . c)
/// where xty = X^T y / n restricted to the active set and . is elementwise.
/// zeta does not depend on the sparsity penalty.
struct GradientWorkspace {
  Vector xty;
  double yty_n = 0.0;

  Vector beta;
  Vector a, b, c, d, zeta;
  double resid_term = 0.0;  // (1/n)|y - X_t beta|^2 at the last refresh

  Vector warm_beta, warm_c;  // CG warm starts, sized per the route used
  LtSolveStats beta_stats, c_stats;

  /// Recomputes the cached response projections for a design.
  void bind(const ActiveDesign& design);

  /// Drops coordinates when the active set shrinks from old_active to
  /// design.active(); warm starts in the reduced space are carried over.
  void shrink_to(const Subset& old_active, const ActiveDesign& design);
};

/// Solves for beta on the active coordinates and stores it in ws.beta.
/// Coordinates outside the active set are identically zero and never touched.
Vector beta_tilde(const ActiveDesign& design, const Vector& t,
                  const CombssConfig& cfg, GradientWorkspace& ws);

/// Residual term via the expansion
///   y^T y/n - 2 g^T xty + |X g|^2 / n,  g = t . beta,
/// plus lambda times the sum of t (inactive coordinates contribute zero).
double objective_f(const ActiveDesign& design, const Vector& t, double lambda,
                   const CombssConfig& cfg, GradientWorkspace& ws);

/// Refreshes every workspace buffer at t (two linear solves).
void refresh_workspace(const ActiveDesign& design, const Vector& t,
                       const CombssConfig& cfg, GradientWorkspace& ws);

/// Objective at the state captured by the last refresh.
inline double objective_from_workspace(const GradientWorkspace& ws,
                                       const Vector& t, double lambda) {
  return ws.resid_term + lambda * t.sum();
}

/// Full-length gradient of the unconstrained objective at w:
///   (zeta + lambda 1) . (2 w . exp(-w . w))
/// Frozen coordinates (which must hold w_j = 0) are exactly zero and skipped.
Vector grad_g(const ActiveDesign& design, const Vector& w,
              const std::vector<bool>& frozen, double lambda,
              const CombssConfig& cfg, GradientWorkspace& ws);

}  // namespace combss
