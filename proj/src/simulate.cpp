#include "combss/simulate.hpp"

#include <cmath>

namespace combss {

void SimSpec::check() const {
  auto fail = [](const std::string& msg) {
    throw InvalidInput(ErrorCode::InvalidConfig, msg);
  };
  if (n < 1) fail("n must be >= 1");
  if (p < 1) fail("p must be >= 1");
  if (!(rho > -1.0 && rho < 1.0)) fail("rho must lie in (-1, 1)");
  if (!(snr > 0.0)) fail("snr must be positive");
  if (k0 < 1 || k0 > p) fail("k0 must lie in [1, p]");
}

Vector gen_beta(const SimSpec& spec) {
  spec.check();
  Vector beta = Vector::Zero(spec.p);
  if (spec.beta_type == BetaType::Type2) {
    for (int j = 0; j < spec.k0; ++j) beta(j) = 1.0;
    return beta;
  }
  if (spec.k0 == 1) {
    beta(0) = 1.0;
    return beta;
  }
  for (int j = 0; j < spec.k0; ++j) {
    const double pos = static_cast<double>(j) *
                       static_cast<double>(spec.p - 1) /
                       static_cast<double>(spec.k0 - 1);
    beta(static_cast<int>(std::lround(pos))) = 1.0;
  }
  return beta;
}

Matrix gen_design(const SimSpec& spec, Rng& rng) {
  spec.check();
  Matrix x(spec.n, spec.p);
  const double carry = spec.rho;
  const double fresh = std::sqrt(1.0 - spec.rho * spec.rho);
  for (int i = 0; i < spec.n; ++i) {
    x(i, 0) = rng.normal();
    for (int j = 1; j < spec.p; ++j) {
      x(i, j) = carry * x(i, j - 1) + fresh * rng.normal();
    }
  }
  return x;
}

std::pair<Vector, double> gen_response(const Matrix& x, const Vector& beta,
                                       const SimSpec& spec, Rng& rng) {
  spec.check();
  if (x.cols() != beta.size() || x.rows() != spec.n) {
    throw InvalidInput(ErrorCode::DimensionMismatch,
                       "design/beta dimensions do not match the spec");
  }
  // beta' S beta over the support, S_ij = rho^|i-j|.
  double signal_var = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (beta(i) == 0.0) continue;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      if (beta(j) == 0.0) continue;
      signal_var +=
          beta(i) * beta(j) * std::pow(spec.rho, std::abs(double(i - j)));
    }
  }
  const double sigma2 = signal_var / spec.snr;
  const double sigma = std::sqrt(sigma2);
  Vector y = x * beta;
  for (int i = 0; i < spec.n; ++i) y(i) += sigma * rng.normal();
  return {std::move(y), sigma2};
}

SimData gen_dataset(const SimSpec& spec, uint64_t stream) {
  SimData out;
  Rng rng = Rng::substream(spec.seed, stream);
  out.beta = gen_beta(spec);
  out.x = gen_design(spec, rng);
  auto [y, sigma2] = gen_response(out.x, out.beta, spec, rng);
  out.y = std::move(y);
  out.sigma2 = sigma2;
  return out;
}

}  // namespace combss
