#pragma once

#include <Eigen/Dense>

namespace mwk::detail {

// Columns are the four vertices of a tetrahedron on S^2. No feasibility check.
double exact3d_columns(const Eigen::MatrixXd& V);

bool origin_strictly_inside(const Eigen::MatrixXd& V);

}  // namespace mwk::detail
