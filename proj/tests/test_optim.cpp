#include <doctest.h>

#include <cmath>

#include "combss/optim.hpp"
#include "combss/path.hpp"
#include "combss/simulate.hpp"
#include "oracles.hpp"

using namespace combss;

TEST_SUITE_BEGIN("optim");

TEST_CASE("initial state sits at the hypercube midpoint") {
  FitState st = init_state(3);
  for (int j = 0; j < 3; ++j) CHECK(st.t(j) == doctest::Approx(0.5).epsilon(1e-15));

  FitState one = init_state(1);
  CHECK(one.w(0) == doctest::Approx(0.8325546111576977).epsilon(1e-15));

  CHECK_THROWS_AS(init_state(0), InvalidInput);
}

TEST_CASE("first momentum step moves against the gradient sign") {
  CombssConfig cfg;
  FitState st = init_state(2);
  Vector g(2);
  g << 3.0, -0.5;
  const Vector w0 = st.w;
  adam_step(st, g, cfg);
  // Bias correction makes the first-step ratio essentially -sign(g).
  CHECK(st.adam_u(0) == doctest::Approx(-(1 - cfg.adam_xi1) * 3.0));
  CHECK(st.w(0) - w0(0) == doctest::Approx(-cfg.adam_alpha).epsilon(1e-6));
  CHECK(st.w(1) - w0(1) == doctest::Approx(cfg.adam_alpha).epsilon(1e-5));
}

TEST_CASE("zero gradient with zero moments is a fixed point") {
  CombssConfig cfg;
  FitState st = init_state(3);
  const Vector w0 = st.w;
  adam_step(st, Vector::Zero(3), cfg);
  CHECK(st.iter == 1);
  CHECK((st.w - w0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("momentum recursion matches a scalar transcript") {
  CombssConfig cfg;
  FitState st = init_state(2);
  std::vector<Vector> grads;
  Rng rng(5);
  for (int l = 0; l < 3; ++l) grads.push_back(oracle::random_vector(2, rng));

  // Independent scalar rewrite of the same recursions.
  double w[2] = {st.w(0), st.w(1)};
  double u[2] = {0, 0}, v[2] = {0, 0};
  for (int l = 1; l <= 3; ++l) {
    for (int j = 0; j < 2; ++j) {
      const double g = grads[static_cast<std::size_t>(l - 1)](j);
      u[j] = cfg.adam_xi1 * u[j] - (1 - cfg.adam_xi1) * g;
      v[j] = cfg.adam_xi2 * v[j] + (1 - cfg.adam_xi2) * g * g;
      const double uh = u[j] / (1 - std::pow(cfg.adam_xi1, l));
      const double vh = v[j] / (1 - std::pow(cfg.adam_xi2, l));
      w[j] += cfg.adam_alpha * uh / std::sqrt(vh + cfg.adam_c);
    }
  }
  for (const Vector& g : grads) adam_step(st, g, cfg);
  CHECK(std::abs(st.w(0) - w[0]) <= 1e-12);
  CHECK(std::abs(st.w(1) - w[1]) <= 1e-12);
}

TEST_CASE("plain descent step arithmetic and freezing") {
  CombssConfig cfg;
  cfg.gd_alpha = 0.1;
  FitState st = init_state(2);
  st.w << 1.0, 1.0;
  Vector g(2);
  g << 2.0, -2.0;
  basic_gd_step(st, g, cfg);
  CHECK(st.w(0) == doctest::Approx(0.8));
  CHECK(st.w(1) == doctest::Approx(1.2));

  FitState frozen_state = init_state(2);
  frozen_state.frozen[0] = true;
  frozen_state.w << 0.0, 1.0;
  frozen_state.t = map_w_to_t(frozen_state.w);
  Vector g2(2);
  g2 << 5.0, 1.0;
  basic_gd_step(frozen_state, g2, cfg);
  CHECK(frozen_state.w(0) == 0.0);
  CHECK(frozen_state.w(1) == doctest::Approx(0.9));

  basic_gd_step(frozen_state, Vector::Zero(2), cfg);
  CHECK(frozen_state.w(1) == doctest::Approx(0.9));
}

TEST_CASE("truncation freezes small coordinates permanently") {
  CombssConfig cfg;
  cfg.eta = 0.001;
  FitState st = init_state(2);
  st.w(0) = 0.02;  // t ~ 4e-4 < eta
  st.t = map_w_to_t(st.w);
  CHECK(truncate(st, cfg) == 1);
  CHECK(st.frozen[0]);
  CHECK_FALSE(st.frozen[1]);
  CHECK(st.t(0) == 0.0);
  CHECK(st.adam_u(0) == 0.0);

  CHECK(truncate(st, cfg) == 0);  // idempotent above the threshold

  CombssConfig off = cfg;
  off.eta = 0.0;
  FitState st2 = init_state(2);
  st2.w(0) = 1e-8;
  st2.t = map_w_to_t(st2.w);
  CHECK(truncate(st2, off) == 0);
}

TEST_CASE("a penalty at the grid ceiling drives out every coordinate") {
  SimSpec spec{40, 8, 0.5, 2.0, BetaType::Type2, 3, 77};
  SimData data = gen_dataset(spec, 0);
  Dataset d = validate_dataset(data.x, data.y);
  CombssConfig cfg = default_config(d);
  const double lambda_max = d.y().squaredNorm() / d.n();
  FitOutput out = run_fit(d, lambda_max, cfg);
  CHECK(out.state.terminated_by == TerminationReason::AllFrozen);
  CHECK(threshold(out.state.t, cfg.tau).empty());
}

TEST_CASE("no penalty on a well-conditioned tall design keeps everything") {
  SimSpec spec{80, 5, 0.0, 20.0, BetaType::Type2, 5, 3};
  SimData data = gen_dataset(spec, 0);
  Dataset d = validate_dataset(data.x, data.y);
  CombssConfig cfg = default_config(d);
  FitOutput out = run_fit(d, 0.0, cfg);
  for (int j = 0; j < 5; ++j) CHECK(out.state.t(j) >= 0.99);
}

TEST_CASE("the two-feature example keeps only the true coordinate") {
  oracle::Example1 ex = oracle::example1(100, 42);
  Dataset d = validate_dataset(ex.x, ex.y);
  CombssConfig cfg = default_config(d);
  FitOutput out = run_fit(d, 1.5, cfg);
  Subset s = threshold(out.state.t, cfg.tau);
  CHECK(s == Subset{0});
}

TEST_CASE("active set never grows and freezes are permanent") {
  SimSpec spec{50, 20, 0.8, 4.0, BetaType::Type1, 5, 9};
  SimData data = gen_dataset(spec, 0);
  Dataset d = validate_dataset(data.x, data.y);
  CombssConfig cfg = default_config(d);
  FitOutput out = run_fit(d, 0.3, cfg);
  int prev = d.p();
  for (const IterationRecord& rec : out.state.trace) {
    CHECK(rec.p_plus <= prev);
    prev = rec.p_plus;
  }
  for (int j = 0; j < d.p(); ++j) {
    if (out.state.frozen[static_cast<std::size_t>(j)]) {
      CHECK(out.state.w(j) == 0.0);
      CHECK(out.state.t(j) == 0.0);
    }
  }
}

TEST_CASE("forced routes produce the same fit at tight solver tolerance") {
  for (uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    SimSpec spec{20, 35, 0.6, 4.0, BetaType::Type1, 5, seed};
    SimData data = gen_dataset(spec, 0);
    Dataset d = validate_dataset(data.x, data.y);
    CombssConfig direct = default_config(d);
    direct.cg_tol = 1e-12;
    direct.route = SolveRoute::Direct;
    CombssConfig woodbury = direct;
    woodbury.route = SolveRoute::Woodbury;
    FitOutput a = run_fit(d, 0.2, direct);
    FitOutput b = run_fit(d, 0.2, woodbury);
    CHECK(a.state.iter == b.state.iter);
    CHECK((a.state.t - b.state.t).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(threshold(a.state.t, 0.5) == threshold(b.state.t, 0.5));
  }
}

TEST_CASE("identical inputs give bit-identical runs") {
  SimSpec spec{60, 15, 0.5, 3.0, BetaType::Type1, 5, 21};
  SimData data = gen_dataset(spec, 0);
  Dataset d = validate_dataset(data.x, data.y);
  CombssConfig cfg = default_config(d);
  FitOutput a = run_fit(d, 0.25, cfg);
  FitOutput b = run_fit(d, 0.25, cfg);
  REQUIRE(a.state.iter == b.state.iter);
  CHECK((a.state.w - b.state.w).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(a.state.trace.size() == b.state.trace.size());
  for (std::size_t i = 0; i < a.state.trace.size(); ++i) {
    CHECK(a.state.trace[i].dt_inf == b.state.trace[i].dt_inf);
    CHECK(a.state.trace[i].objective == b.state.trace[i].objective);
  }
}

TEST_CASE("converged runs really did settle for the whole window") {
  SimSpec spec{60, 10, 0.0, 5.0, BetaType::Type2, 3, 30};
  SimData data = gen_dataset(spec, 0);
  Dataset d = validate_dataset(data.x, data.y);
  CombssConfig cfg = default_config(d);
  FitOutput out = run_fit(d, 0.2, cfg);
  REQUIRE(out.state.terminated_by == TerminationReason::Converged);
  const auto& trace = out.state.trace;
  REQUIRE(trace.size() >= static_cast<std::size_t>(cfg.term_window));
  for (std::size_t i = trace.size() - static_cast<std::size_t>(cfg.term_window);
       i < trace.size(); ++i) {
    CHECK(trace[i].dt_inf <= cfg.term_epsilon);
  }
}

TEST_CASE("small-step plain descent does not increase the objective") {
  SimSpec spec{70, 8, 0.0, 8.0, BetaType::Type2, 3, 31};
  SimData data = gen_dataset(spec, 0);
  Dataset d = validate_dataset(data.x, data.y);
  CombssConfig cfg = default_config(d);
  cfg.optimizer = Optimizer::BasicGd;
  cfg.gd_alpha = 0.01;
  cfg.cg_tol = 1e-10;
  FitOutput out = run_fit(d, 0.1, cfg);
  const auto& trace = out.state.trace;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i].objective <= trace[i - 1].objective + 1e-8);
  }
}

TEST_SUITE_END();
