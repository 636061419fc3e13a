#include "suborbit/group_certificate.hpp"

#include <cmath>
#include <numbers>

#include "suborbit/error.hpp"
#include "suborbit/primes.hpp"

namespace suborbit::cert {

void RepresentationPair::validate() const {
    if (g.rows() != g.cols() || h.rows() != h.cols() || g.rows() != h.rows() || g.rows() < 1) {
        throw Error(ErrorKind::DimensionMismatch, "representation matrices must be square of equal size");
    }
    const Mat id = Mat::Identity(g.rows(), g.cols());
    if (max_abs(g.transpose() * g - id) > 1e-10 || max_abs(h.transpose() * h - id) > 1e-10) {
        throw Error(ErrorKind::DimensionMismatch, "representation matrices must be orthogonal");
    }
}

DependenceParameters dependence_parameters(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                           const Eigen::Vector2d& c) {
    constexpr double kCoincident = 1e-12;
    if ((a - b).norm() < kCoincident || (a - c).norm() < kCoincident || (b - c).norm() < kCoincident) {
        throw Error(ErrorKind::InvalidInput, "coincident points");
    }
    Eigen::Matrix<double, 2, 3> m;
    m << a, b, c;
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>> svd(m, Eigen::ComputeFullV);
    Eigen::Vector3d v = svd.matrixV().col(2).normalized();
    for (int i = 0; i < 3; ++i) {
        if (std::abs(v(i)) > 1e-14) {
            if (v(i) < 0.0) v = -v;
            break;
        }
    }
    return {v(0), v(1), v(2)};
}

double certificate_residual(const Eigen::Vector3d& params, const RepresentationPair& rep) {
    rep.validate();
    const Mat m = params(0) * Mat::Identity(rep.g.rows(), rep.g.cols()) + params(1) * rep.g + params(2) * rep.h;
    return m.determinant();
}

double certificate_residual(const DependenceParameters& params, const RepresentationPair& rep) {
    return certificate_residual(params.vector(), rep);
}

HarnessResult orbit_triple_harness(int p, long long j, long long k, int blocks) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidInput, "p must be prime");
    if (blocks < 1) throw Error(ErrorKind::InvalidInput, "blocks must be positive");
    const long long jm = ((j % p) + p) % p;
    const long long km = ((k % p) + p) % p;
    if (jm == 0 || km == 0 || jm == km) throw Error(ErrorKind::InvalidInput, "repeated indices");

    const int n = 2 * blocks;
    RepresentationPair rep{Mat::Zero(n, n), Mat::Zero(n, n)};
    for (int b = 0; b < blocks; ++b) {
        const double base = 2.0 * std::numbers::pi * (b + 1) / p;
        rep.g.block<2, 2>(2 * b, 2 * b) = rotation2d(base * static_cast<double>(jm));
        rep.h.block<2, 2>(2 * b, 2 * b) = rotation2d(base * static_cast<double>(km));
    }
    const Eigen::Vector2d a(1.0, 0.0);
    const Eigen::Vector2d bp = rep.g.topLeftCorner<2, 2>() * a;
    const Eigen::Vector2d cp = rep.h.topLeftCorner<2, 2>() * a;
    HarnessResult out{dependence_parameters(a, bp, cp), rep, 0.0};
    out.residual = certificate_residual(out.params, out.rep);
    return out;
}

}  // namespace suborbit::cert
