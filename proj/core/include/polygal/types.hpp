#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace polygal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexSet = std::vector<int>;

enum class ErrorCode {
  InvalidArgument,
  NumericalFailure,
  UnboundedRegion,
  DuplicateRow,
  ZeroRow,
  BadDimension,
  UnboundedSpace,
  ComplexityLimit,
  EmptyPolytope,
  ExteriorCoordinates,
  UnboundedBody,
  DegenerateBody,
  BadLevel,
  InfeasibleLevel,
  SchemaError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Numerical thresholds shared by every module. All values are multiplied
/// by `scale`, which the CLI exposes as --tol-scale.
struct Tolerances {
  double scale = 1.0;

  // LP feasibility slack is feasibility * (1 + |b_i|).
  double feasibility = 1e-9;
  double rank = 1e-10;
  double pivot = 1e-9;
  double vertex_dedup = 1e-8;
  // Classification band is classification * (1 + ||b||_inf).
  double classification = 1e-9;
  double duality = 1e-7;

  double feas(double rhs) const { return scale * feasibility * (1.0 + std::abs(rhs)); }
  double rank_tol() const { return scale * rank; }
  double pivot_tol() const { return scale * pivot; }
  double dedup() const { return scale * vertex_dedup; }
  double classify_band(double b_inf) const { return scale * classification * (1.0 + b_inf); }
  double duality_tol(double value) const { return scale * duality * (1.0 + std::abs(value)); }
};

}  // namespace polygal
