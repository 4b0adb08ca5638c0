#pragma once

#include <Eigen/Dense>
#include <vector>

namespace dppsim {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;

// Per-commodity stack of n-by-n link matrices. Layer c holds the values for
// commodity column c (schedules mu, weights W). Entries off the link set are
// always zero.
using CommodityTensor = std::vector<Matrix>;

inline CommodityTensor zero_tensor(int n, int m) {
  return CommodityTensor(static_cast<std::size_t>(m), Matrix::Zero(n, n));
}

inline double tensor_abs_max(const CommodityTensor& t) {
  double v = 0.0;
  for (const Matrix& layer : t) v = std::max(v, layer.cwiseAbs().maxCoeff());
  return v;
}

}  // namespace dppsim
