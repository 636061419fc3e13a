#include "suborbit/linalg.hpp"

#include <cmath>

#include "suborbit/error.hpp"

namespace suborbit {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid_input";
        case ErrorKind::DimensionMismatch: return "dimension_mismatch";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::Infeasible: return "infeasible";
        case ErrorKind::Exhausted: return "exhausted";
        case ErrorKind::Parse: return "parse_error";
        case ErrorKind::UnknownCommand: return "unknown_command";
    }
    return "unknown";
}

Eigen::Matrix2d rotation2d(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
}

double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Mat orthonormalize_columns(const Mat& m) {
    Eigen::HouseholderQR<Mat> qr(m);
    Mat q = qr.householderQ() * Mat::Identity(m.rows(), m.cols());
    const Mat r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

Mat matrix_power(const Mat& m, long long exponent) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix_power: matrix is not square");
    }
    Mat result = Mat::Identity(m.rows(), m.cols());
    Mat base = m;
    while (exponent > 0) {
        if (exponent & 1) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

}  // namespace suborbit
