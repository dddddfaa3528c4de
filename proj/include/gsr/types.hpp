#pragma once

#include <Eigen/Core>

namespace gsr {

using Vec = Eigen::VectorXd;
// Measurement matrices are stored row-major: the forward product walks rows
// contiguously and the adjoint kernel can still stream row segments.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace gsr
