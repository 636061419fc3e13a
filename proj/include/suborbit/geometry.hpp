#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "suborbit/linalg.hpp"

namespace suborbit {

/// Labeled finite point set in R^N. Immutable after construction.
///
/// All points share one dimension N >= 1 and carry distinct labels. When
/// `on_unit_sphere` is set every point has norm 1 within 1e-9. Modules pair
/// points across configurations by label, never by position.
class PointConfiguration {
  public:
    static constexpr double kSphereTolerance = 1e-9;

    PointConfiguration(std::vector<Vec> points, std::vector<std::string> labels,
                       bool on_unit_sphere = false);

    /// Labels "0", "1", ... in point order.
    static PointConfiguration with_index_labels(std::vector<Vec> points,
                                                bool on_unit_sphere = false);

    std::size_t size() const { return points_.size(); }
    Eigen::Index dim() const { return points_.front().size(); }
    bool on_unit_sphere() const { return on_unit_sphere_; }

    const std::vector<Vec>& points() const { return points_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Vec& point(std::size_t i) const { return points_.at(i); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    std::optional<std::size_t> index_of(const std::string& label) const;
    /// Throws InvalidInput if the label is absent.
    const Vec& point(const std::string& label) const;

    /// Same points in the order of `labels` (which must be a permutation of a
    /// subset of this configuration's labels).
    PointConfiguration select(const std::vector<std::string>& labels) const;

    /// m x N matrix with one point per row.
    Mat as_rows() const;

  private:
    std::vector<Vec> points_;
    std::vector<std::string> labels_;
    bool on_unit_sphere_ = false;
};

/// Symmetric matrix of squared distances with an exactly zero diagonal.
class SquaredDistanceMatrix {
  public:
    /// Validates exact symmetry, zero diagonal and nonnegative entries.
    explicit SquaredDistanceMatrix(Mat values);

    /// Triangle (A, B, C) with X = |AB|^2, Y = |AC|^2, Z = |BC|^2.
    static SquaredDistanceMatrix from_triangle(double x, double y, double z);

    Eigen::Index size() const { return values_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }
    const Mat& matrix() const { return values_; }

  private:
    Mat values_;
};

SquaredDistanceMatrix squared_distances(const PointConfiguration& config);

struct GramResult {
    Mat gram;
    double min_eigenvalue = 0.0;
    bool psd = false;
};

inline constexpr double kPsdTolerance = 1e-9;

/// Gram matrix of m unit vectors with the given squared distances:
/// 1 on the diagonal, 1 - d(i,j)/2 off it. PSD iff min eigenvalue >= -1e-9.
GramResult gram_of_unit_config(const SquaredDistanceMatrix& sides);

/// Centered Gram matrix -1/2 C D C with C the centering projector. Its
/// eigenvalues decide whether D is a Euclidean distance matrix.
Mat centered_gram(const SquaredDistanceMatrix& sides);

/// Points in R^{m-1} realizing a Euclidean distance matrix (classical MDS);
/// tiny negative eigenvalues are clamped to zero.
std::vector<Vec> realize_distances(const SquaredDistanceMatrix& sides);

struct WeightedPart {
    PointConfiguration config;
    double weight = 1.0;
};

/// Concatenation of weight-scaled parts, paired by label. The output label
/// order follows the first part. With `spherical` set the squared weights
/// must sum to 1 within 1e-12 and the result is flagged on the unit sphere.
PointConfiguration direct_sum(const std::vector<WeightedPart>& parts, bool spherical = false);

/// p points at angles phase + 2 pi k / p on a circle of the given radius,
/// labeled "0".."p-1".
PointConfiguration regular_pgon(int p, double radius = 1.0, double phase = 0.0);

/// Squared chord between p-gon vertices s steps apart on the unit circle.
double pgon_chord_sq(int p, long long steps);

}  // namespace suborbit
