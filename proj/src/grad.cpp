#include "combss/grad.hpp"

namespace combss {

Vector map_w_to_t(const Vector& w) {
  Vector t(w.size());
  for (Eigen::Index j = 0; j < w.size(); ++j) t(j) = map_w_to_t_scalar(w(j));
  return t;
}

void GradientWorkspace::bind(const ActiveDesign& design) {
  const double n = static_cast<double>(design.n());
  xty = design.apply_transpose(design.data().y()) / n;
  yty_n = design.data().y().squaredNorm() / n;
  warm_beta.resize(0);
  warm_c.resize(0);
}

namespace {

// Gathers the entries of v at the positions old_active holds new_active.
// new_active must be a subset of old_active; both sorted.
Vector gather_subset(const Subset& old_active, const Subset& new_active,
                     const Vector& v) {
  Vector out(static_cast<Eigen::Index>(new_active.size()));
  std::size_t i = 0;
  for (std::size_t k = 0; k < new_active.size(); ++k) {
    while (i < old_active.size() && old_active[i] < new_active[k]) ++i;
    out(static_cast<Eigen::Index>(k)) = v(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace

void GradientWorkspace::shrink_to(const Subset& old_active,
                                  const ActiveDesign& design) {
  const Subset& now = design.active();
  xty = gather_subset(old_active, now, xty);
  const auto old_size = static_cast<Eigen::Index>(old_active.size());
  if (warm_beta.size() == old_size)
    warm_beta = gather_subset(old_active, now, warm_beta);
  if (warm_c.size() == old_size)
    warm_c = gather_subset(old_active, now, warm_c);
}

Vector beta_tilde(const ActiveDesign& design, const Vector& t,
                  const CombssConfig& cfg, GradientWorkspace& ws) {
  if (ws.xty.size() != design.p_plus()) ws.bind(design);
  const Vector rhs = t.cwiseProduct(ws.xty);
  ws.beta = solve_lt(design, t, cfg.delta, rhs, cfg, &ws.warm_beta,
                     &ws.beta_stats, cfg.route);
  return ws.beta;
}

double objective_f(const ActiveDesign& design, const Vector& t, double lambda,
                   const CombssConfig& cfg, GradientWorkspace& ws) {
  beta_tilde(design, t, cfg, ws);
  const double n = static_cast<double>(design.n());
  const Vector gamma = t.cwiseProduct(ws.beta);
  const double quad = design.apply(gamma).squaredNorm() / n;
  ws.resid_term = ws.yty_n - 2.0 * gamma.dot(ws.xty) + quad;
  return ws.resid_term + lambda * t.sum();
}

void refresh_workspace(const ActiveDesign& design, const Vector& t,
                       const CombssConfig& cfg, GradientWorkspace& ws) {
  beta_tilde(design, t, cfg, ws);
  const double n = static_cast<double>(design.n());
  const double ridge = cfg.delta / n;

  const Vector gamma = t.cwiseProduct(ws.beta);
  const Vector gram_gamma =
      design.apply_transpose(design.apply(gamma)) / n;
  ws.a = gram_gamma - ws.xty;
  ws.b = ws.a - ridge * gamma;
  ws.c = solve_lt(design, t, cfg.delta, Vector(t.cwiseProduct(ws.a)), cfg,
                  &ws.warm_c, &ws.c_stats, cfg.route);
  const Vector tc = t.cwiseProduct(ws.c);
  ws.d = design.apply_transpose(design.apply(tc)) / n - ridge * tc;
  ws.zeta = 2.0 * ws.beta.cwiseProduct(ws.a - ws.d) -
            2.0 * ws.b.cwiseProduct(ws.c);

  // Residual term falls out of buffers already in hand:
  // g^T (X^T X / n) g = g . (a + xty).
  ws.resid_term = ws.yty_n - gamma.dot(ws.xty) + gamma.dot(ws.a);
}

Vector grad_g(const ActiveDesign& design, const Vector& w,
              const std::vector<bool>& frozen, double lambda,
              const CombssConfig& cfg, GradientWorkspace& ws) {
  const Subset& act = design.active();
  Vector t_act(static_cast<Eigen::Index>(act.size()));
  for (std::size_t k = 0; k < act.size(); ++k) {
    const int j = act[k];
    t_act(static_cast<Eigen::Index>(k)) =
        frozen[static_cast<std::size_t>(j)] ? 0.0 : map_w_to_t_scalar(w(j));
  }
  refresh_workspace(design, t_act, cfg, ws);

  Vector g = Vector::Zero(w.size());
  for (std::size_t k = 0; k < act.size(); ++k) {
    const int j = act[k];
    if (frozen[static_cast<std::size_t>(j)]) continue;
    const double wj = w(j);
    g(j) = (ws.zeta(static_cast<Eigen::Index>(k)) + lambda) * 2.0 * wj *
           std::exp(-wj * wj);
  }
  return g;
}

}  // namespace combss
