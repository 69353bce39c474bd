#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace pmiprof {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VecRef = Eigen::Ref<Eigen::VectorXd>;
using CVecRef = Eigen::Ref<const Eigen::VectorXd>;
using CMatRef = Eigen::Ref<const Eigen::MatrixXd>;

// Raised when a point/sample does not match a distribution's dimensions.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when numerics cannot proceed (non-PSD covariance, NaN inputs, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a distribution/map spec file cannot be interpreted.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check_finite(const CVecRef& v, const char* what) {
  if (!v.allFinite()) throw NumericError(std::string(what) + ": non-finite input");
}

}  // namespace pmiprof
