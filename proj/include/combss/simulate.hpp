#pragma once

#include <cstdint>
#include <utility>

#include "combss/rng.hpp"
#include "combss/types.hpp"

namespace combss {

enum class BetaType { Type1 = 1, Type2 = 2 };

/// Synthetic-data recipe: rows drawn from N(0, S) with S_ij = rho^|i-j|,
/// k0 unit coefficients placed by beta_type, noise variance set from the
/// requested signal-to-noise ratio.
struct SimSpec {
  int n = 100;
  int p = 20;
  double rho = 0.0;
  double snr = 1.0;
  BetaType beta_type = BetaType::Type1;
  int k0 = 10;
  uint64_t seed = 0;

  void check() const;
};

/// Type1: ones at round((j-1)(p-1)/(k0-1)) for j = 1..k0, endpoints
/// inclusive. Type2: ones at the first k0 positions.
Vector gen_beta(const SimSpec& spec);

/// Each row independently N(0, S) through the order-one recursion
///   x_1 = z_1,  x_j = rho x_{j-1} + sqrt(1 - rho^2) z_j,
/// which realizes this covariance exactly in O(np) without a factorization.
Matrix gen_design(const SimSpec& spec, Rng& rng);

/// y = X beta + iid N(0, sigma2) noise, with sigma2 = beta' S beta / snr
/// computed from the analytic covariance, not a sample estimate. Returns
/// (y, sigma2).
std::pair<Vector, double> gen_response(const Matrix& x, const Vector& beta,
                                       const SimSpec& spec, Rng& rng);

struct SimData {
  Matrix x;
  Vector y;
  Vector beta;
  double sigma2 = 0.0;
};

/// One dataset from the given substream of spec.seed (see Rng::substream).
/// Convention used throughout: replication r draws its training data from
/// stream 2r and its validation data from stream 2r + 1.
SimData gen_dataset(const SimSpec& spec, uint64_t stream);

}  // namespace combss
