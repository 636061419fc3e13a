#include "suborbit/torus_gap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "suborbit/error.hpp"
#include "suborbit/quadrature.hpp"

namespace suborbit::torus {

TorusOrbitSpec::TorusOrbitSpec(Vec radii) : radii_(std::move(radii)) {
    if (radii_.size() < 1) throw Error(ErrorKind::InvalidInput, "torus orbit needs at least one radius");
    if (!radii_.allFinite() || radii_.minCoeff() < 0.0) {
        throw Error(ErrorKind::InvalidInput, "torus orbit radii must be finite and nonnegative");
    }
}

SubspaceIsometry::SubspaceIsometry(Mat map) : map_(std::move(map)) {
    if (map_.cols() != 3 || map_.rows() < 2 || map_.rows() % 2 != 0) {
        throw Error(ErrorKind::DimensionMismatch, "subspace isometry must be 2n x 3");
    }
    if (max_abs(map_.transpose() * map_ - Mat::Identity(3, 3)) > 1e-12) {
        throw Error(ErrorKind::InvalidInput, "subspace isometry columns are not orthonormal");
    }
}

SubspaceIsometry SubspaceIsometry::random(int n, Rng& rng) {
    if (n < 2) throw Error(ErrorKind::InvalidInput, "a 3-dimensional subspace needs n >= 2");
    Mat g(2 * n, 3);
    for (Eigen::Index j = 0; j < 3; ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
    }
    return SubspaceIsometry(orthonormalize_columns(g));
}

Eigen::VectorXcd SubspaceIsometry::apply(const Eigen::Vector3d& v) const {
    const Vec r = map_ * v;
    Eigen::VectorXcd z(n());
    for (Eigen::Index i = 0; i < n(); ++i) z(i) = {r(2 * i), r(2 * i + 1)};
    return z;
}

double dist_to_orbit(const Eigen::VectorXcd& z, const TorusOrbitSpec& c) {
    if (z.size() != c.n()) throw Error(ErrorKind::DimensionMismatch, "point and orbit dimensions differ");
    double s = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double d = std::abs(z(i)) - c.radii()(i);
        s += d * d;
    }
    return std::sqrt(s);
}

double chord_variance_integral(double c) {
    return 2.0 / 3.0 + c * c - c * std::numbers::pi / 2.0;
}

double chord_variance_quadrature(double c, int nodes) {
    const QuadratureRule rule = gauss_legendre(nodes, 0.0, 0.5 * std::numbers::pi);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double ct = std::cos(rule.nodes[i]);
        const double d = ct - c;
        s += rule.weights[i] * d * d * ct;
    }
    return s;
}

namespace {

Eigen::Vector3d fix_sign(Eigen::Vector3d e) {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(e(i)) > 1e-14) {
            if (e(i) < 0.0) e = -e;
            break;
        }
    }
    return e;
}

struct BlockFrame {
    Eigen::Vector3d e, b1, b2;
};

BlockFrame block_frame(const Block& block) {
    if (block.cwiseAbs().maxCoeff() == 0.0) {
        return {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()};
    }
    const Mat dense = block;
    Eigen::JacobiSVD<Mat> svd(dense, Eigen::ComputeFullV);
    const Mat& v = svd.matrixV();
    return {fix_sign(v.col(2)), v.col(0), v.col(1)};
}

}  // namespace

Eigen::Vector3d kernel_direction(const Block& block) {
    return block_frame(block).e;
}

Eigen::Vector3d archimedes_sample(const Eigen::Vector3d& e, Rng& rng) {
    // Orthonormal basis of the plane orthogonal to e.
    const Eigen::Vector3d helper = std::abs(e(0)) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d b1 = (helper - helper.dot(e) * e).normalized();
    const Eigen::Vector3d b2 = e.cross(b1);
    const double t = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Eigen::Vector3d u = std::cos(phi) * b1 + std::sin(phi) * b2;
    return (t * e + std::sqrt(1.0 - t * t) * u).normalized();
}

BlockMoments exact_block_moments(const Block& block) {
    const Mat dense = block;
    Eigen::JacobiSVD<Mat> svd(dense);
    const double s1 = svd.singularValues()(0);
    const double s2 = svd.singularValues()(1);
    BlockMoments m;
    if (s1 > 0.0) {
        const double k = std::sqrt(std::max(0.0, 1.0 - (s2 / s1) * (s2 / s1)));
        m.mean_abs = 0.5 * s1 * std::comp_ellint_2(k);
    }
    m.mean_sq = (s1 * s1 + s2 * s2) / 3.0;
    m.variance = m.mean_sq - m.mean_abs * m.mean_abs;
    return m;
}

VarianceReport component_variance_report(const SubspaceIsometry& lambda, const QuadratureSpec& q) {
    const Eigen::Index n = lambda.n();
    VarianceReport report;
    report.blocks.resize(static_cast<std::size_t>(n));

    if (q.method == QuadratureSpec::Method::ProductGauss) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const Block b = lambda.block(i);
            const BlockFrame f = block_frame(b);
            double m1 = 0.0, m2 = 0.0;
            for (const SphereNode& node : sphere_product_rule(f.e, f.b1, f.b2, q.axial_nodes, q.angle_nodes)) {
                const double r = (b * node.v).norm();
                m1 += node.weight * r;
                m2 += node.weight * r * r;
            }
            report.blocks[static_cast<std::size_t>(i)] = {m1, m2, m2 - m1 * m1};
        }
    } else {
        if (q.samples < 1) throw Error(ErrorKind::InvalidInput, "Monte Carlo needs at least one sample");
        Rng rng(q.seed);
        std::vector<double> m1(static_cast<std::size_t>(n), 0.0), m2(static_cast<std::size_t>(n), 0.0);
        const Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
        for (long long s = 0; s < q.samples; ++s) {
            const Eigen::Vector3d v = archimedes_sample(axis, rng);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double r = (lambda.block(i) * v).norm();
                m1[static_cast<std::size_t>(i)] += r;
                m2[static_cast<std::size_t>(i)] += r * r;
            }
        }
        const double inv = 1.0 / static_cast<double>(q.samples);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = m1[static_cast<std::size_t>(i)] * inv;
            const double b = m2[static_cast<std::size_t>(i)] * inv;
            report.blocks[static_cast<std::size_t>(i)] = {a, b, b - a * a};
        }
    }

    report.optimal_radii = Vec(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& bm = report.blocks[static_cast<std::size_t>(i)];
        report.optimal_radii(i) = bm.mean_abs;
        report.total += bm.variance;
        report.second_moment_sum += bm.mean_sq;
    }
    return report;
}

namespace {

double orbit_distance_sq(const SubspaceIsometry& lambda, const Vec& c, const Eigen::Vector3d& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda.n(); ++i) {
        const double d = (lambda.block(i) * v).norm() - c(i);
        s += d * d;
    }
    return s;
}

Eigen::Vector3d orbit_distance_sq_gradient(const SubspaceIsometry& lambda, const Vec& c, const Eigen::Vector3d& v) {
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    for (Eigen::Index i = 0; i < lambda.n(); ++i) {
        const Block b = lambda.block(i);
        const Eigen::Vector2d w = b * v;
        const double r = w.norm();
        if (r < 1e-15) continue;
        g += 2.0 * (r - c(i)) / r * (b.transpose() * w);
    }
    return g;
}

}  // namespace

FarPoint far_point(const SubspaceIsometry& lambda, const TorusOrbitSpec& c, int max_iterations) {
    if (c.n() != lambda.n()) throw Error(ErrorKind::DimensionMismatch, "orbit and isometry dimensions differ");
    const Vec& radii = c.radii();

    Eigen::Vector3d best = Eigen::Vector3d::UnitX();
    double best_val = -1.0;
    for (const auto& v : icosphere(3)) {
        const double val = orbit_distance_sq(lambda, radii, v);
        if (val > best_val) {
            best_val = val;
            best = v;
        }
    }

    FarPoint out{best, std::sqrt(best_val), 0};
    double step = 0.5;
    for (int it = 0; it < max_iterations && step > 1e-14; ++it) {
        Eigen::Vector3d g = orbit_distance_sq_gradient(lambda, radii, best);
        g -= g.dot(best) * best;
        if (g.norm() < 1e-14) break;
        while (step > 1e-14) {
            const Eigen::Vector3d cand = (best + step * g).normalized();
            const double val = orbit_distance_sq(lambda, radii, cand);
            if (val > best_val) {
                best = cand;
                best_val = val;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        out.iterations = it + 1;
    }
    out.v = best;
    out.distance = std::sqrt(best_val);
    return out;
}

}  // namespace suborbit::torus
