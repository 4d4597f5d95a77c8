#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "cyclesync/error.hpp"

namespace cyclesync {

// Sample standard deviation (n-1 denominator).
template <typename Derived>
typename Derived::Scalar sample_sd(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = x.size();
  require(n >= 2, errc::too_short, "sample_sd needs at least 2 values");
  Scalar mean = x.mean();
  Scalar ss = (x.array() - mean).square().sum();
  return std::sqrt(ss / Scalar(n - 1));
}

template <typename Derived>
Eigen::VectorX<typename Derived::Scalar> standardize(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Scalar mean = x.mean();
  Scalar sd = sample_sd(x);
  require(sd > Scalar(0), errc::all_degenerate, "zero-variance series cannot be standardized");
  return ((x.array() - mean) / sd).matrix();
}

}  // namespace cyclesync
