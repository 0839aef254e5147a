#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace combss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sorted, strictly increasing feature indices, all < p.
using Subset = std::vector<int>;

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteEntry,
  InvalidDimension,
  InvalidConfig,
  EmptyResponse,
  NullSignal,
  DimensionTooLarge,
  NumericalBreakdown,
  NonFiniteUpdate,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Bad user input: dimensions, non-finite data, out-of-range settings.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Numerical failure mid-computation (NaN/Inf in an iterate).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Immutable fit input: design matrix x (n rows, p columns) and response y.
class Dataset {
 public:
  static Dataset validate(Matrix x, Vector y);

  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }
  int n() const { return static_cast<int>(x_.rows()); }
  int p() const { return static_cast<int>(x_.cols()); }

 private:
  Dataset(Matrix x, Vector y) : x_(std::move(x)), y_(std::move(y)) {}
  Matrix x_;
  Vector y_;
};

Dataset validate_dataset(Matrix x, Vector y);

enum class Optimizer { Adam, BasicGd };

/// Which linear-system route solve_lt takes. Auto picks the n-dimensional
/// companion system whenever the active dimension exceeds n.
enum class SolveRoute { Auto, Direct, Woodbury };

struct CombssConfig {
  double delta = 1.0;        // shrinkage weight on inactive directions
  double lambda = 0.0;       // sparsity penalty weight
  double tau = 0.5;          // final threshold mapping t to a subset
  double eta = 0.001;        // truncation level; 0 disables truncation
  double adam_alpha = 0.1;
  double adam_xi1 = 0.9;
  double adam_xi2 = 0.999;
  double adam_c = 1e-8;
  double term_epsilon = 0.001;
  int term_window = 10;
  int max_iters = 1000;
  double cg_tol = 1e-5;      // relative residual
  int cg_max_iters = 0;      // 0 = dimension of the system
  Optimizer optimizer = Optimizer::Adam;
  double gd_alpha = 0.1;
  SolveRoute route = SolveRoute::Auto;
  bool warm_start = true;

  void check() const;  // throws InvalidInput on out-of-range values
};

/// Defaults with delta = n, the scale that keeps the objective surface
/// comparable across sample sizes.
CombssConfig default_config(const Dataset& data);

}  // namespace combss
