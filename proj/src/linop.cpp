#include "combss/linop.hpp"

namespace combss {

ActiveDesign::ActiveDesign(const Dataset& data, Subset active)
    : data_(&data), active_(std::move(active)) {
  x_active_.resize(data.n(), static_cast<Eigen::Index>(active_.size()));
  for (std::size_t k = 0; k < active_.size(); ++k) {
    x_active_.col(static_cast<Eigen::Index>(k)) = data.x().col(active_[k]);
  }
}

ActiveDesign ActiveDesign::full(const Dataset& data) {
  Subset all(static_cast<std::size_t>(data.p()));
  for (int j = 0; j < data.p(); ++j) all[static_cast<std::size_t>(j)] = j;
  return ActiveDesign(data, std::move(all));
}

ActiveDesign ActiveDesign::from_active(const Dataset& data, Subset active) {
  return ActiveDesign(data, std::move(active));
}

Vector solve_lt(const ActiveDesign& design, const Vector& t, double delta,
                const Vector& u, const CombssConfig& cfg, Vector* warm,
                LtSolveStats* stats, SolveRoute route) {
  const int p_plus = design.p_plus();
  const int n = design.n();
  const bool use_woodbury = (route == SolveRoute::Auto)
                                ? (p_plus > n)
                                : (route == SolveRoute::Woodbury);

  Vector local;
  if (!use_woodbury) {
    LtOperator op{design, t, delta};
    Vector& z = warm ? *warm : local;
    if (!cfg.warm_start || z.size() != p_plus) z = Vector::Zero(p_plus);
    const int max_iters = cfg.cg_max_iters > 0 ? cfg.cg_max_iters : p_plus;
    CgResult cg = cg_solve([&op](const Vector& v) { return op.apply(v); }, u,
                           cfg.cg_tol, max_iters, z);
    if (stats) *stats = {cg, SolveRoute::Direct};
    return z;
  }

  WoodburyOperator op(design, t, delta);
  const Vector su = op.s_diag.cwiseProduct(u);
  const Vector rhs = design.apply(t.cwiseProduct(su));
  Vector& z = warm ? *warm : local;
  if (!cfg.warm_start || z.size() != n) z = Vector::Zero(n);
  const int max_iters = cfg.cg_max_iters > 0 ? cfg.cg_max_iters : n;
  CgResult cg = cg_solve([&op](const Vector& v) { return op.apply(v); }, rhs,
                         cfg.cg_tol, max_iters, z);
  if (stats) *stats = {cg, SolveRoute::Woodbury};
  const double nn = static_cast<double>(n);
  return su - op.s_diag.cwiseProduct(t.cwiseProduct(design.apply_transpose(z)))
                  / nn;
}

}  // namespace combss
