#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qtt {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

enum class ErrorCode {
  invalid_argument,
  grid_mismatch,
  site_mismatch,
  non_finite,
  overflow,
  too_coarse,
  not_converged,
  numerical,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Truncation knobs. Both tolerances bound the squared norm of the
/// discarded component relative to the squared norm of the input.
struct Tolerances {
  double svd_tol = 1e-28;
  Index max_bond = 0;  // 0 means unbounded
  double simplify_tol = 1e-30;
};

}  // namespace qtt
