#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace isoflat::detail {

// Scaling and squaring with a Pade core.
template <int N>
Eigen::Matrix<double, N, N> expm(const Eigen::Matrix<double, N, N>& a) {
  return a.exp();
}

}  // namespace isoflat::detail
