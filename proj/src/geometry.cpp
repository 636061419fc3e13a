#include "suborbit/geometry.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "suborbit/error.hpp"

namespace suborbit {

PointConfiguration::PointConfiguration(std::vector<Vec> points, std::vector<std::string> labels,
                                       bool on_unit_sphere)
    : points_(std::move(points)), labels_(std::move(labels)), on_unit_sphere_(on_unit_sphere) {
    if (points_.empty()) {
        throw Error(ErrorKind::InvalidInput, "point configuration needs at least one point");
    }
    if (labels_.size() != points_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "label count differs from point count");
    }
    const Eigen::Index n = points_.front().size();
    if (n < 1) throw Error(ErrorKind::InvalidInput, "points must have dimension >= 1");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != n) {
            throw Error(ErrorKind::DimensionMismatch, "points do not share one dimension");
        }
        if (!points_[i].allFinite()) {
            throw Error(ErrorKind::InvalidInput, "non-finite coordinate in point " + labels_[i]);
        }
        if (!seen.insert(labels_[i]).second) {
            throw Error(ErrorKind::InvalidInput, "duplicate label " + labels_[i]);
        }
        if (on_unit_sphere_ && std::abs(points_[i].norm() - 1.0) > kSphereTolerance) {
            throw Error(ErrorKind::InvalidInput, "point " + labels_[i] + " is not on the unit sphere");
        }
    }
}

PointConfiguration PointConfiguration::with_index_labels(std::vector<Vec> points, bool on_unit_sphere) {
    std::vector<std::string> labels;
    labels.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) labels.push_back(std::to_string(i));
    return PointConfiguration(std::move(points), std::move(labels), on_unit_sphere);
}

std::optional<std::size_t> PointConfiguration::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) return i;
    }
    return std::nullopt;
}

const Vec& PointConfiguration::point(const std::string& label) const {
    const auto i = index_of(label);
    if (!i) throw Error(ErrorKind::InvalidInput, "unknown label " + label);
    return points_[*i];
}

PointConfiguration PointConfiguration::select(const std::vector<std::string>& labels) const {
    std::vector<Vec> pts;
    pts.reserve(labels.size());
    for (const auto& l : labels) pts.push_back(point(l));
    return PointConfiguration(std::move(pts), labels, on_unit_sphere_);
}

Mat PointConfiguration::as_rows() const {
    Mat rows(static_cast<Eigen::Index>(size()), dim());
    for (std::size_t i = 0; i < size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = points_[i].transpose();
    return rows;
}

SquaredDistanceMatrix::SquaredDistanceMatrix(Mat values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols() || values_.rows() < 1) {
        throw Error(ErrorKind::DimensionMismatch, "squared distance matrix must be square and nonempty");
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        if (values_(i, i) != 0.0) throw Error(ErrorKind::InvalidInput, "nonzero diagonal in distance matrix");
        for (Eigen::Index j = 0; j < values_.cols(); ++j) {
            if (!std::isfinite(values_(i, j)) || values_(i, j) < 0.0) {
                throw Error(ErrorKind::InvalidInput, "squared distances must be finite and nonnegative");
            }
            if (values_(i, j) != values_(j, i)) {
                throw Error(ErrorKind::InvalidInput, "distance matrix is not symmetric");
            }
        }
    }
}

SquaredDistanceMatrix SquaredDistanceMatrix::from_triangle(double x, double y, double z) {
    Mat d = Mat::Zero(3, 3);
    d(0, 1) = d(1, 0) = x;
    d(0, 2) = d(2, 0) = y;
    d(1, 2) = d(2, 1) = z;
    return SquaredDistanceMatrix(d);
}

SquaredDistanceMatrix squared_distances(const PointConfiguration& config) {
    const auto m = static_cast<Eigen::Index>(config.size());
    Mat d = Mat::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double v = (config.point(static_cast<std::size_t>(i)) -
                              config.point(static_cast<std::size_t>(j))).squaredNorm();
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return SquaredDistanceMatrix(d);
}

GramResult gram_of_unit_config(const SquaredDistanceMatrix& sides) {
    const Eigen::Index m = sides.size();
    Mat g = Mat::Ones(m, m) - 0.5 * sides.matrix();
    Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    return {std::move(g), lo, lo >= -kPsdTolerance};
}

Mat centered_gram(const SquaredDistanceMatrix& sides) {
    const Eigen::Index m = sides.size();
    const Mat c = Mat::Identity(m, m) - Mat::Constant(m, m, 1.0 / static_cast<double>(m));
    Mat g = -0.5 * c * sides.matrix() * c;
    return 0.5 * (g + g.transpose());
}

std::vector<Vec> realize_distances(const SquaredDistanceMatrix& sides) {
    const Eigen::Index m = sides.size();
    std::vector<Vec> points;
    if (m == 1) {
        points.push_back(Vec::Zero(1));
        return points;
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(centered_gram(sides));
    // Eigenvalues ascend; the smallest belongs to the all-ones direction.
    const Eigen::Index k = m - 1;
    Mat coords(m, k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const Eigen::Index src = m - 1 - c;
        const double lam = std::max(eig.eigenvalues()(src), 0.0);
        coords.col(c) = std::sqrt(lam) * eig.eigenvectors().col(src);
    }
    for (Eigen::Index i = 0; i < m; ++i) points.emplace_back(coords.row(i).transpose());
    return points;
}

PointConfiguration direct_sum(const std::vector<WeightedPart>& parts, bool spherical) {
    if (parts.empty()) throw Error(ErrorKind::InvalidInput, "direct_sum needs at least one part");
    const auto& labels = parts.front().config.labels();
    Eigen::Index total_dim = 0;
    double weight_sq = 0.0;
    for (const auto& part : parts) {
        if (part.config.size() != labels.size()) {
            throw Error(ErrorKind::InvalidInput, "direct_sum parts have different label sets");
        }
        for (const auto& l : labels) {
            if (!part.config.index_of(l)) {
                throw Error(ErrorKind::InvalidInput, "direct_sum parts have different label sets");
            }
        }
        total_dim += part.config.dim();
        weight_sq += part.weight * part.weight;
    }
    if (spherical && std::abs(weight_sq - 1.0) > 1e-12) {
        throw Error(ErrorKind::InvalidInput, "spherical direct sum needs squared weights summing to 1");
    }
    std::vector<Vec> points;
    points.reserve(labels.size());
    for (const auto& l : labels) {
        Vec v(total_dim);
        Eigen::Index offset = 0;
        for (const auto& part : parts) {
            const Eigen::Index n = part.config.dim();
            v.segment(offset, n) = part.weight * part.config.point(l);
            offset += n;
        }
        points.push_back(std::move(v));
    }
    return PointConfiguration(std::move(points), labels, spherical);
}

PointConfiguration regular_pgon(int p, double radius, double phase) {
    if (p < 2) throw Error(ErrorKind::InvalidInput, "regular_pgon needs p >= 2");
    std::vector<Vec> points;
    points.reserve(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) {
        const double a = phase + 2.0 * std::numbers::pi * k / p;
        Vec v(2);
        v << radius * std::cos(a), radius * std::sin(a);
        points.push_back(std::move(v));
    }
    return PointConfiguration::with_index_labels(std::move(points));
}

double pgon_chord_sq(int p, long long steps) {
    long long s = steps % p;
    if (s < 0) s += p;
    s = std::min(s, p - s);
    const double h = std::sin(std::numbers::pi * static_cast<double>(s) / p);
    return 4.0 * h * h;
}

}  // namespace suborbit
