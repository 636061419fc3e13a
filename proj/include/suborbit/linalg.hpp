#pragma once

#include <Eigen/Dense>

namespace suborbit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Counter-clockwise rotation of the plane by `angle` radians.
Eigen::Matrix2d rotation2d(double angle);

/// Largest absolute entry; zero for empty matrices.
double max_abs(const Mat& m);

/// Orthonormalize columns with Householder QR, signs fixed so diag(R) > 0.
Mat orthonormalize_columns(const Mat& m);

/// Integer matrix power by repeated squaring.
Mat matrix_power(const Mat& m, long long exponent);

}  // namespace suborbit
