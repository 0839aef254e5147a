#include "combss/types.hpp"

#include <cmath>
#include <sstream>

namespace combss {

Dataset Dataset::validate(Matrix x, Vector y) {
  if (x.rows() < 1 || x.cols() < 1) {
    throw InvalidInput(ErrorCode::InvalidDimension,
                       "design matrix must have at least one row and column");
  }
  if (x.rows() != y.size()) {
    std::ostringstream os;
    os << "row count mismatch: x has " << x.rows() << " rows, y has "
       << y.size() << " entries";
    throw InvalidInput(ErrorCode::DimensionMismatch, os.str());
  }
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (!std::isfinite(x(i, j))) {
        std::ostringstream os;
        os << "non-finite entry in x at (" << i << ", " << j << ")";
        throw InvalidInput(ErrorCode::NonFiniteEntry, os.str());
      }
    }
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y(i))) {
      std::ostringstream os;
      os << "non-finite entry in y at (" << i << ")";
      throw InvalidInput(ErrorCode::NonFiniteEntry, os.str());
    }
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset validate_dataset(Matrix x, Vector y) {
  return Dataset::validate(std::move(x), std::move(y));
}

void CombssConfig::check() const {
  auto fail = [](const std::string& msg) {
    throw InvalidInput(ErrorCode::InvalidConfig, msg);
  };
  if (!(delta > 0)) fail("delta must be positive");
  if (!(lambda >= 0)) fail("lambda must be nonnegative");
  if (!(tau > 0 && tau < 1)) fail("tau must lie strictly inside (0, 1)");
  if (!(eta >= 0 && eta < 1)) fail("eta must lie in [0, 1)");
  if (!(eta < tau)) fail("eta must be smaller than tau");
  if (!(adam_alpha > 0)) fail("adam_alpha must be positive");
  if (!(adam_xi1 >= 0 && adam_xi1 < 1)) fail("adam_xi1 must lie in [0, 1)");
  if (!(adam_xi2 >= 0 && adam_xi2 < 1)) fail("adam_xi2 must lie in [0, 1)");
  if (!(adam_c > 0)) fail("adam_c must be positive");
  if (!(term_epsilon > 0)) fail("term_epsilon must be positive");
  if (term_window < 1) fail("term_window must be a positive integer");
  if (max_iters < 1) fail("max_iters must be a positive integer");
  if (!(cg_tol > 0)) fail("cg_tol must be positive");
  if (cg_max_iters < 0) fail("cg_max_iters must be nonnegative");
  if (!(gd_alpha > 0)) fail("gd_alpha must be positive");
}

CombssConfig default_config(const Dataset& data) {
  CombssConfig cfg;
  cfg.delta = static_cast<double>(data.n());
  return cfg;
}

}  // namespace combss
