#pragma once

#include <cmath>
#include <vector>

#include "combss/types.hpp"

namespace combss {

/// t may approach but never reach 1; values are clamped below this bound
/// before any operator is built so that 1 - t^2 stays strictly positive.
inline constexpr double kMaxT = 1.0 - 1e-12;

/// Column-subset view of a dataset: the design restricted to the indices
/// whose t-coordinate is still in play. The cached submatrix is a bit-exact
/// column copy of x.
class ActiveDesign {
 public:
  static ActiveDesign full(const Dataset& data);
  static ActiveDesign from_active(const Dataset& data, Subset active);

  const Dataset& data() const { return *data_; }
  const Subset& active() const { return active_; }
  const Matrix& x_active() const { return x_active_; }
  int n() const { return data_->n(); }
  int p_plus() const { return static_cast<int>(active_.size()); }

  /// One pass over the active design: X v (v has p_plus entries).
  Vector apply(const Vector& v) const {
    ++design_passes_;
    return x_active_ * v;
  }

  /// One pass over the active design: X^T u (u has n entries).
  Vector apply_transpose(const Vector& u) const {
    ++design_passes_;
    return x_active_.transpose() * u;
  }

  long design_passes() const { return design_passes_; }
  void reset_design_passes() const { design_passes_ = 0; }

 private:
  ActiveDesign(const Dataset& data, Subset active);

  const Dataset* data_;
  Subset active_;
  Matrix x_active_;
  mutable long design_passes_ = 0;
};

/// Matrix-free symmetric positive-definite operator
///   v -> (1/n) (T X^T X T v + delta (I - T^2) v)
/// on the active coordinates, T = Diag(t). Never forms a p x p matrix; each
/// apply costs exactly two passes over the active design.
struct LtOperator {
  const ActiveDesign& design;
  const Vector& t;  // length p_plus, entries in [0, 1)
  double delta;

  Vector apply(const Vector& v) const {
    const double n = static_cast<double>(design.n());
    Vector tv = t.cwiseProduct(v);
    Vector out = t.cwiseProduct(design.apply_transpose(design.apply(tv)));
    out += delta * (v - t.cwiseProduct(t.cwiseProduct(v)));
    return out / n;
  }
};

/// The n-dimensional companion of LtOperator,
///   v -> v + (1/n) X T S T X^T v,  S = Diag(n / (delta (1 - t_j^2))),
/// used to solve the p_plus-dimensional system through an n-dimensional one.
struct WoodburyOperator {
  const ActiveDesign& design;
  const Vector& t;
  Vector s_diag;  // n / (delta (1 - t_j^2)), finite while t_j < 1

  WoodburyOperator(const ActiveDesign& d, const Vector& t_active, double delta)
      : design(d), t(t_active) {
    const double n = static_cast<double>(d.n());
    s_diag = (delta * (Vector::Ones(t.size()) - t.cwiseProduct(t)))
                 .cwiseInverse() * n;
  }

  Vector apply(const Vector& v) const {
    const double n = static_cast<double>(design.n());
    Vector w = t.cwiseProduct(design.apply_transpose(v));
    w = t.cwiseProduct(s_diag.cwiseProduct(w));
    return v + design.apply(w) / n;
  }
};

struct CgResult {
  int iters = 0;
  double residual = 0.0;  // achieved relative residual
  bool converged = false;
};

/// Conjugate gradient on a symmetric positive-definite operator. z carries
/// the warm start in and the solution out. Stops once the recursive residual
/// satisfies |r| <= tol |u|, or returns the iterate reached at max_iters with
/// the achieved residual flagged as not converged. NaN in an iterate throws.
template <class Apply>
CgResult cg_solve(const Apply& apply, const Vector& u, double tol,
                  int max_iters, Vector& z) {
  const double unorm = u.norm();
  if (z.size() != u.size()) z = Vector::Zero(u.size());
  if (unorm == 0.0) {
    z.setZero();
    return {0, 0.0, true};
  }

  Vector r = u - apply(z);
  double rr = r.squaredNorm();
  if (std::sqrt(rr) <= tol * unorm) return {0, std::sqrt(rr) / unorm, true};

  Vector p = r;
  CgResult res;
  for (int it = 1; it <= max_iters; ++it) {
    Vector q = apply(p);
    const double pq = p.dot(q);
    if (!std::isfinite(pq) || pq <= 0.0) {
      throw NumericalError(ErrorCode::NumericalBreakdown,
                           "cg: operator lost positive-definiteness "
                           "(p^T A p = " + std::to_string(pq) + ")");
    }
    const double alpha = rr / pq;
    z += alpha * p;
    r -= alpha * q;
    const double rr_new = r.squaredNorm();
    if (!std::isfinite(rr_new)) {
      throw NumericalError(ErrorCode::NumericalBreakdown,
                           "cg: non-finite residual at iteration " +
                               std::to_string(it));
    }
    res.iters = it;
    if (std::sqrt(rr_new) <= tol * unorm) {
      res.residual = std::sqrt(rr_new) / unorm;
      res.converged = true;
      return res;
    }
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  res.residual = std::sqrt(rr) / unorm;
  res.converged = false;
  return res;
}

struct LtSolveStats {
  CgResult cg;
  SolveRoute route_used = SolveRoute::Direct;
};

/// Solves L_t z = u on the active coordinates. Direct route runs CG on the
/// p_plus-dimensional operator; the Woodbury route solves the n-dimensional
/// companion system and maps back. Auto picks Woodbury iff p_plus > n.
/// warm, when given, holds the previous solution in the route's space and is
/// updated in place (a size mismatch simply resets it).
Vector solve_lt(const ActiveDesign& design, const Vector& t, double delta,
                const Vector& u, const CombssConfig& cfg,
                Vector* warm = nullptr, LtSolveStats* stats = nullptr,
                SolveRoute route = SolveRoute::Auto);

}  // namespace combss
