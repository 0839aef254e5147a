#include <doctest.h>

#include <cmath>

#include "combss/grad.hpp"
#include "combss/simulate.hpp"
#include "oracles.hpp"

using namespace combss;

namespace {

Dataset random_dataset(int n, int p, uint64_t seed) {
  Rng rng(seed);
  return validate_dataset(oracle::random_matrix(n, p, rng),
                          oracle::random_vector(n, rng));
}

CombssConfig tight_config(const Dataset& d) {
  CombssConfig cfg = default_config(d);
  cfg.cg_tol = 1e-12;
  return cfg;
}

// Interior representation of a binary corner: selected coordinates sit just
// below 1, the rest are removed from the active set.
Vector corner_t(int count) { return Vector::Constant(count, kMaxT); }

}  // namespace

TEST_SUITE_BEGIN("grad");

TEST_CASE("map endpoints and evenness") {
  Vector w(4);
  w << 0.0, std::sqrt(std::log(2.0)), 1.0, -1.0;
  Vector t = map_w_to_t(w);
  CHECK(t(0) == 0.0);
  CHECK(t(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t(2) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(t(2) == t(3));
  // Saturation clamps strictly below 1.
  Vector big(1);
  big << 40.0;
  CHECK(map_w_to_t(big)(0) == kMaxT);
}

TEST_CASE("beta is empty on an empty active set") {
  Dataset d = random_dataset(10, 4, 1);
  ActiveDesign design = ActiveDesign::from_active(d, {});
  GradientWorkspace ws;
  ws.bind(design);
  Vector beta = beta_tilde(design, Vector(), tight_config(d), ws);
  CHECK(beta.size() == 0);
}

TEST_CASE("corner beta reproduces the least-squares fit") {
  Dataset d = random_dataset(30, 6, 2);
  GradientWorkspace ws;
  Subset s = {0, 2, 5};
  ActiveDesign design = ActiveDesign::from_active(d, s);
  ws.bind(design);
  Vector beta = beta_tilde(design, corner_t(3), tight_config(d), ws);
  Matrix xs = oracle::take_columns(d.x(), s);
  oracle::DenseOls ols = oracle::dense_ols(xs, d.y());
  // Fitted values agree even though the estimators differ slightly in form.
  CHECK((xs * beta - xs * ols.coeffs).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("near the all-ones corner the fit approaches full least squares") {
  Dataset d = random_dataset(100, 2, 3);
  GradientWorkspace ws;
  ActiveDesign design = ActiveDesign::full(d);
  ws.bind(design);
  oracle::DenseOls ols = oracle::dense_ols(d.x(), d.y());
  double prev_gap = std::numeric_limits<double>::infinity();
  for (double eps : {1e-3, 1e-6, 1e-9}) {
    Vector t = Vector::Constant(2, 1.0 - eps);
    Vector beta = beta_tilde(design, t, tight_config(d), ws);
    const double gap =
        (d.x() * t.cwiseProduct(beta) - d.x() * ols.coeffs).norm();
    CHECK(gap < prev_gap + 1e-12);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-6);
}

TEST_CASE("objective at t = 0 is the null-model error") {
  Dataset d = random_dataset(12, 5, 4);
  ActiveDesign design = ActiveDesign::from_active(d, {});
  GradientWorkspace ws;
  ws.bind(design);
  const double f = objective_f(design, Vector(), 0.7, tight_config(d), ws);
  CHECK(f == doctest::Approx(d.y().squaredNorm() / 12.0).epsilon(1e-12));
}

TEST_CASE("objective at a corner equals the refit error plus penalty") {
  Dataset d = random_dataset(40, 7, 5);
  Subset s = {1, 3, 4};
  ActiveDesign design = ActiveDesign::from_active(d, s);
  GradientWorkspace ws;
  ws.bind(design);
  const double f = objective_f(design, corner_t(3), 0.0, tight_config(d), ws);
  oracle::DenseOls ols = oracle::dense_ols(oracle::take_columns(d.x(), s), d.y());
  CHECK(f == doctest::Approx(ols.rss_n).epsilon(1e-9));
}

TEST_CASE("objective matches the dense pipeline at interior t") {
  Dataset d = random_dataset(25, 6, 6);
  ActiveDesign design = ActiveDesign::full(d);
  GradientWorkspace ws;
  ws.bind(design);
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    Vector t(6);
    for (int j = 0; j < 6; ++j) t(j) = 0.05 + 0.9 * rng.uniform();
    const double f = objective_f(design, t, 0.3, tight_config(d), ws);
    const double expect = oracle::dense_objective(d.x(), d.y(), t, 25.0, 0.3);
    CHECK(f == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("gradient is zero where w is zero") {
  Dataset d = random_dataset(20, 5, 8);
  ActiveDesign design = ActiveDesign::full(d);
  GradientWorkspace ws;
  ws.bind(design);
  Vector w = Vector::Constant(5, 0.7);
  w(2) = 0.0;
  std::vector<bool> frozen(5, false);
  Vector g = grad_g(design, w, frozen, 0.4, tight_config(d), ws);
  CHECK(g(2) == 0.0);
}

TEST_CASE("slope of f in t_j tends to lambda as t_j vanishes") {
  Dataset d = random_dataset(30, 4, 9);
  ActiveDesign design = ActiveDesign::full(d);
  GradientWorkspace ws;
  ws.bind(design);
  CombssConfig cfg = tight_config(d);
  // zeta(j) -> 0, so the slope of f in t_j tends to the bare penalty weight.
  Vector t = Vector::Constant(4, 0.5);
  double prev = std::numeric_limits<double>::infinity();
  for (double tj : {1e-2, 1e-4, 1e-6}) {
    t(1) = tj;
    refresh_workspace(design, t, cfg, ws);
    const double gap = std::abs(ws.zeta(1));
    CHECK(gap < prev + 1e-12);
    prev = gap;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("gradient agrees with central differences of the dense objective") {
  Rng point_rng(10);
  for (uint64_t inst = 0; inst < 2; ++inst) {
    Dataset d = random_dataset(30, 10, 20 + inst);
    ActiveDesign design = ActiveDesign::full(d);
    GradientWorkspace ws;
    ws.bind(design);
    CombssConfig cfg = tight_config(d);
    const double lambda = 0.25;
    std::vector<bool> frozen(10, false);
    for (int pt = 0; pt < 5; ++pt) {
      Vector w(10);
      for (int j = 0; j < 10; ++j) w(j) = 0.3 + 1.2 * point_rng.uniform();
      Vector g = grad_g(design, w, frozen, lambda, cfg, ws);
      Vector fd = oracle::fd_grad_g(d.x(), d.y(), w, cfg.delta, lambda);
      for (int j = 0; j < 10; ++j) {
        const double scale = std::max(std::abs(fd(j)), 1e-4);
        CHECK(std::abs(g(j) - fd(j)) / scale < 1e-4);
      }
    }
  }
}

TEST_CASE("gradient through the companion route also matches differences") {
  // Wide design, so every solve goes through the n-dimensional system.
  for (uint64_t seed : {1ULL, 2ULL}) {
    Rng rng(seed);
    Dataset d = validate_dataset(oracle::random_matrix(15, 40, rng),
                                 oracle::random_vector(15, rng));
    CombssConfig cfg = default_config(d);
    cfg.cg_tol = 1e-12;
    ActiveDesign design = ActiveDesign::full(d);
    GradientWorkspace ws;
    ws.bind(design);
    std::vector<bool> frozen(40, false);
    for (int pt = 0; pt < 5; ++pt) {
      Vector w(40);
      for (int j = 0; j < 40; ++j) w(j) = 0.3 + 1.2 * rng.uniform();
      Vector g = grad_g(design, w, frozen, 0.25, cfg, ws);
      REQUIRE(ws.beta_stats.route_used == SolveRoute::Woodbury);
      Vector fd = oracle::fd_grad_g(d.x(), d.y(), w, cfg.delta, 0.25);
      for (int j = 0; j < 40; ++j) {
        CHECK(std::abs(g(j) - fd(j)) <=
              std::max(1e-4 * std::abs(fd(j)), 1e-8));
      }
    }
  }
}

TEST_CASE("corner objective equals refit error across every corner") {
  Dataset d = random_dataset(40, 6, 11);
  CombssConfig cfg = tight_config(d);
  for (double lambda : {0.0, 0.5}) {
    for (unsigned mask = 0; mask < 64; ++mask) {
      Subset s;
      for (int j = 0; j < 6; ++j) {
        if (mask & (1u << j)) s.push_back(j);
      }
      ActiveDesign design = ActiveDesign::from_active(d, s);
      GradientWorkspace ws;
      ws.bind(design);
      const double f = objective_f(design, corner_t(static_cast<int>(s.size())),
                                   lambda, cfg, ws);
      oracle::DenseOls ols =
          oracle::dense_ols(oracle::take_columns(d.x(), s), d.y());
      const double expect =
          (s.empty() ? d.y().squaredNorm() / 40.0 : ols.rss_n) +
          lambda * static_cast<double>(s.size());
      CHECK(std::abs(f - expect) <= 1e-8);
    }
  }
}

TEST_CASE("objective is continuous approaching a corner") {
  Dataset d = random_dataset(35, 5, 12);
  ActiveDesign design = ActiveDesign::full(d);
  GradientWorkspace ws;
  ws.bind(design);
  CombssConfig cfg = tight_config(d);
  const double lambda = 0.3;
  Vector s(5);
  s << 1, 0, 1, 1, 0;

  // Corner value computed on the reduced design.
  Subset sel = {0, 2, 3};
  ActiveDesign corner_design = ActiveDesign::from_active(d, sel);
  GradientWorkspace corner_ws;
  corner_ws.bind(corner_design);
  const double corner_value =
      objective_f(corner_design, corner_t(3), lambda, cfg, corner_ws);

  double prev_gap = std::numeric_limits<double>::infinity();
  double gap = 0.0;
  for (int l = 5; l <= 20; ++l) {
    const double step = std::pow(2.0, -l);
    Vector t(5);
    for (int j = 0; j < 5; ++j) {
      t(j) = s(j) > 0.5 ? 1.0 - step : 0.5 * step;
    }
    const double f = objective_f(design, t, lambda, cfg, ws);
    gap = std::abs(f - corner_value);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
  CHECK(gap <= 1e-6);
}

TEST_CASE("reduced and full designs give identical survivors") {
  Dataset d = random_dataset(60, 30, 13);
  CombssConfig cfg = tight_config(d);
  cfg.cg_tol = 1e-14;
  const double lambda = 0.2;
  Rng rng(14);

  Vector w_full(30);
  for (int j = 0; j < 30; ++j) w_full(j) = 0.4 + 0.8 * rng.uniform();
  Subset kept;
  for (int j = 0; j < 30; ++j) {
    if (j % 3 == 0) {
      w_full(j) = 0.0;  // ten zeroed coordinates
    } else {
      kept.push_back(j);
    }
  }

  ActiveDesign full = ActiveDesign::full(d);
  GradientWorkspace ws_full;
  ws_full.bind(full);
  std::vector<bool> no_freeze(30, false);
  Vector g_full = grad_g(full, w_full, no_freeze, lambda, cfg, ws_full);
  Vector t_full = map_w_to_t(w_full);
  const double f_full = objective_f(full, t_full, lambda, cfg, ws_full);

  ActiveDesign reduced = ActiveDesign::from_active(d, kept);
  GradientWorkspace ws_red;
  ws_red.bind(reduced);
  Vector g_red = grad_g(reduced, w_full, no_freeze, lambda, cfg, ws_red);
  Vector t_red(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    t_red(static_cast<Eigen::Index>(k)) = t_full(kept[k]);
  }
  const double f_red = objective_f(reduced, t_red, lambda, cfg, ws_red);

  CHECK(std::abs(f_full - f_red) <= 1e-10);
  for (int j : kept) {
    CHECK(std::abs(g_full(j) - g_red(j)) <= 1e-10);
  }
}

TEST_CASE("zeta ignores the penalty weight") {
  Dataset d = random_dataset(20, 6, 15);
  ActiveDesign design = ActiveDesign::full(d);
  CombssConfig cfg = tight_config(d);
  Vector w = Vector::Constant(6, 0.9);
  std::vector<bool> frozen(6, false);

  Vector zeta_ref;
  for (double lambda : {0.0, 1.0, 10.0}) {
    GradientWorkspace ws;
    ws.bind(design);
    grad_g(design, w, frozen, lambda, cfg, ws);
    if (zeta_ref.size() == 0) {
      zeta_ref = ws.zeta;
    } else {
      for (int j = 0; j < 6; ++j) CHECK(ws.zeta(j) == zeta_ref(j));
    }
  }
}

TEST_SUITE_END();
