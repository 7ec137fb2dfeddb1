#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace equitile {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Base of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: size mismatch, invalid partition, inadmissible weights.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A block of a side matrix does not have full column rank.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// A dense decomposition (eigen/SVD) did not converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

enum class Side { front, rear };

inline const char* to_string(Side side) {
  return side == Side::front ? "front" : "rear";
}

}  // namespace equitile
