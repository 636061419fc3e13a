#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "suborbit/expression.hpp"
#include "suborbit/geometry.hpp"
#include "suborbit/parallel.hpp"
#include "suborbit/random.hpp"
#include "suborbit/witness.hpp"

namespace suborbit::knaster {

/// n x k matrix with orthonormal columns (a point of the Stiefel manifold).
class Frame {
  public:
    static constexpr double kTolerance = 1e-12;

    /// Validates orthonormality within kTolerance.
    explicit Frame(Mat columns);
    /// QR re-orthonormalization of an arbitrary full-rank n x k matrix.
    static Frame retract(const Mat& m);
    static Frame random(int n, int k, Rng& rng);

    const Mat& matrix() const { return m_; }
    Eigen::Index n() const { return m_.rows(); }
    Eigen::Index k() const { return m_.cols(); }
    double orthonormality_error() const;

  private:
    Frame() = default;
    Mat m_;
};

/// f: R^n -> R^d from a small evaluable family.
class TestMap {
  public:
    struct Linear {
        Mat a;  // d x n
    };
    struct Quadratic {
        std::vector<Mat> q;  // d symmetric n x n; f_i(x) = x^T Q_i x
    };
    struct Expressions {
        std::vector<Expression> e;
        int n = 0;
    };

    static TestMap linear(Mat a);
    /// Each matrix is symmetrized; throws DimensionMismatch on shape errors.
    static TestMap quadratic(std::vector<Mat> q);
    static TestMap expressions(std::vector<Expression> e, int n);
    /// Parses one expression per output coordinate over x1..xn.
    static TestMap parse(const std::vector<std::string>& texts, int n);

    static TestMap random_linear(int d, int n, Rng& rng);
    static TestMap random_quadratic(int d, int n, Rng& rng);

    int input_dim() const;
    int output_dim() const;

    Vec operator()(const Vec& x) const;
    /// Analytic d x n Jacobian.
    Mat jacobian(const Vec& x) const;
    /// Central differences with step h.
    Mat jacobian_fd(const Vec& x, double h = 1e-6) const;

    /// Same map with every output multiplied by s.
    TestMap scaled(double s) const;

    const std::variant<Linear, Quadratic, Expressions>& descriptor() const { return map_; }

  private:
    explicit TestMap(std::variant<Linear, Quadratic, Expressions> map) : map_(std::move(map)) {}
    std::variant<Linear, Quadratic, Expressions> map_;
};

/// Phi = sum_x |f(F x + offset) - mean|^2; an empty offset means none.
/// Throws DimensionMismatch.
double spread_objective(const Mat& frame, const PointConfiguration& x, const TestMap& f, const Vec& offset = {});
double spread_objective(const Frame& frame, const PointConfiguration& x, const TestMap& f);

struct SpreadGradient {
    double phi = 0.0;
    Mat frame;   // dPhi/dF, n x k
    Vec offset;  // dPhi/d offset, n
};

enum class GradientMethod { Analytic, FiniteDifference };

SpreadGradient spread_gradient(const Mat& frame, const PointConfiguration& x, const TestMap& f,
                               const Vec& offset = {}, GradientMethod method = GradientMethod::Analytic);

struct SearchOptions {
    int restarts = 64;
    int iterations = 500;
    double tol = 1e-8;
    std::uint64_t seed = 42;
    bool translate = false;
    GradientMethod gradient = GradientMethod::Analytic;
    /// Restarts run in fixed-size batches; the search stops after the first
    /// batch whose best Phi is below tol.
    int batch = 16;
    Execution execution = Execution::Parallel;
};

struct SearchReport {
    Mat frame;
    Vec offset;
    double phi = 0.0;
    int restarts = 0;
    int best_restart = -1;
    long long iterations = 0;  // summed over all restarts
    std::uint64_t seed = 0;
    std::vector<Vec> images;
    bool success = false;
    int n = 0;
    double dimension_bound = 0.0;  // d(q - 1) + k
    std::vector<std::string> warnings;
};

/// Multi-start Riemannian gradient descent over frames in R^n.
SearchReport minimize_spread(const PointConfiguration& x, const TestMap& f, const SearchOptions& opts = {});

/// Validates the witness (X must be on the unit sphere and certified by it),
/// warns when n is below d(q - 1) + k, then runs minimize_spread.
SearchReport search_constant_configuration(const PointConfiguration& x, const GroupWitness& witness,
                                           const TestMap& f, int n, const SearchOptions& opts = {});

struct EuclideanSetup {
    GroupWitness witness;
    PointConfiguration centered;  // orbit coordinates in R^k', origin at the orbit center
    double radius = 0.0;
    int k = 0;                    // realized orbit dimension k'
    int p = 0;
    int n = 0;                    // d(q - 1) + k' with q = |X|
};

/// Runs embed_simplex and reduces the centered orbit to its span.
EuclideanSetup euclidean_setup(const PointConfiguration& x, int p, int d);

/// Search on the sphere of the centered orbit in R^n, n = f.input_dim() >= k'
/// (normally setup.n; smaller n only adds a warning).
SearchReport euclidean_search(const EuclideanSetup& setup, const TestMap& f, const SearchOptions& opts = {});

}  // namespace suborbit::knaster
