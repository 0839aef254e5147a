#include "combss/optim.hpp"

#include <cmath>
#include <string>

namespace combss {

const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::Converged: return "converged";
    case TerminationReason::MaxIters: return "max_iters";
    case TerminationReason::AllFrozen: return "all_frozen";
  }
  return "unknown";
}

int FitState::p_plus() const {
  int count = 0;
  for (bool f : frozen)
    if (!f) ++count;
  return count;
}

FitState init_state(int p) {
  if (p < 1) {
    throw InvalidInput(ErrorCode::InvalidDimension,
                       "state dimension must be at least 1");
  }
  FitState st;
  st.w = Vector::Constant(p, std::sqrt(std::log(2.0)));
  st.t = map_w_to_t(st.w);
  st.frozen.assign(static_cast<std::size_t>(p), false);
  st.adam_u = Vector::Zero(p);
  st.adam_v = Vector::Zero(p);
  return st;
}

namespace {

void check_finite_update(const FitState& state, int j) {
  if (!std::isfinite(state.w(j))) {
    throw NumericalError(ErrorCode::NonFiniteUpdate,
                         "non-finite w at coordinate " + std::to_string(j) +
                             ", iteration " + std::to_string(state.iter));
  }
}

}  // namespace

void adam_step(FitState& state, const Vector& grad, const CombssConfig& cfg) {
  state.iter += 1;
  const double corr1 = 1.0 - std::pow(cfg.adam_xi1, state.iter);
  const double corr2 = 1.0 - std::pow(cfg.adam_xi2, state.iter);
  for (int j = 0; j < state.p(); ++j) {
    if (state.frozen[static_cast<std::size_t>(j)]) continue;
    const double g = grad(j);
    state.adam_u(j) = cfg.adam_xi1 * state.adam_u(j) - (1.0 - cfg.adam_xi1) * g;
    state.adam_v(j) =
        cfg.adam_xi2 * state.adam_v(j) + (1.0 - cfg.adam_xi2) * g * g;
    const double u_hat = state.adam_u(j) / corr1;
    const double v_hat = state.adam_v(j) / corr2;
    state.w(j) += cfg.adam_alpha * u_hat / std::sqrt(v_hat + cfg.adam_c);
    check_finite_update(state, j);
    state.t(j) = map_w_to_t_scalar(state.w(j));
  }
}

void basic_gd_step(FitState& state, const Vector& grad,
                   const CombssConfig& cfg) {
  state.iter += 1;
  for (int j = 0; j < state.p(); ++j) {
    if (state.frozen[static_cast<std::size_t>(j)]) continue;
    state.w(j) -= cfg.gd_alpha * grad(j);
    check_finite_update(state, j);
    state.t(j) = map_w_to_t_scalar(state.w(j));
  }
}

int truncate(FitState& state, const CombssConfig& cfg) {
  int newly_frozen = 0;
  for (int j = 0; j < state.p(); ++j) {
    if (state.frozen[static_cast<std::size_t>(j)]) continue;
    if (state.t(j) < cfg.eta) {
      state.frozen[static_cast<std::size_t>(j)] = true;
      state.w(j) = 0.0;
      state.t(j) = 0.0;
      state.adam_u(j) = 0.0;
      state.adam_v(j) = 0.0;
      ++newly_frozen;
    }
  }
  return newly_frozen;
}

FitOutput run_fit(const Dataset& data, double lambda, const CombssConfig& cfg,
                  const Vector* w_init) {
  cfg.check();
  FitOutput out;
  FitState& st = out.state;
  st = init_state(data.p());
  if (w_init) {
    if (w_init->size() != data.p()) {
      throw InvalidInput(ErrorCode::DimensionMismatch,
                         "initial w has the wrong length");
    }
    st.w = *w_init;
    st.t = map_w_to_t(st.w);
  }
  st.trace.reserve(static_cast<std::size_t>(cfg.max_iters));

  ActiveDesign design = ActiveDesign::full(data);
  GradientWorkspace& ws = out.workspace;
  ws.bind(design);

  Vector t_prev = st.t;
  while (st.iter < cfg.max_iters) {
    const Vector g = grad_g(design, st.w, st.frozen, lambda, cfg, ws);
    const double f_here = objective_from_workspace(ws, st.t, lambda);

    if (cfg.optimizer == Optimizer::Adam) {
      adam_step(st, g, cfg);
    } else {
      basic_gd_step(st, g, cfg);
    }

    const int newly_frozen = truncate(st, cfg);
    if (newly_frozen > 0) {
      Subset old_active = design.active();
      Subset still;
      still.reserve(old_active.size());
      for (int j : old_active) {
        if (!st.frozen[static_cast<std::size_t>(j)]) still.push_back(j);
      }
      design = ActiveDesign::from_active(data, std::move(still));
      ws.shrink_to(old_active, design);
    }

    const double dt = (st.t - t_prev).cwiseAbs().maxCoeff();
    st.trace.push_back({st.iter, dt, design.p_plus(),
                        ws.beta_stats.cg.iters, ws.c_stats.cg.iters, f_here});
    t_prev = st.t;

    if (design.p_plus() == 0) {
      st.terminated_by = TerminationReason::AllFrozen;
      return out;
    }
    if (dt <= cfg.term_epsilon) {
      if (++st.consecutive_small >= cfg.term_window) {
        st.terminated_by = TerminationReason::Converged;
        return out;
      }
    } else {
      st.consecutive_small = 0;
    }
  }
  st.terminated_by = TerminationReason::MaxIters;
  return out;
}

}  // namespace combss
