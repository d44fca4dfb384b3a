#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace tomo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Domain error raised by every module (bad input, unsupported case, numerical breakdown).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature gave up; carries what it had reached.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : Error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

/// Worker count for parallel loops; honours TOMO_THREADS when set.
int thread_count();

}  // namespace tomo
