#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "suborbit/linalg.hpp"
#include "suborbit/random.hpp"

namespace suborbit::torus {

using Block = Eigen::Matrix<double, 2, 3>;

/// Orbit {z in C^n : |z_i| = c_i} of the standard torus action.
class TorusOrbitSpec {
  public:
    explicit TorusOrbitSpec(Vec radii);
    const Vec& radii() const { return radii_; }
    Eigen::Index n() const { return radii_.size(); }

  private:
    Vec radii_;
};

/// Linear isometry R^3 -> C^n stored as a 2n x 3 real matrix with
/// orthonormal columns; rows 2i, 2i+1 are the real and imaginary parts of
/// the complex coordinate i.
class SubspaceIsometry {
  public:
    explicit SubspaceIsometry(Mat map);
    /// Orthonormalized Gaussian 2n x 3 matrix.
    static SubspaceIsometry random(int n, Rng& rng);

    Eigen::Index n() const { return map_.rows() / 2; }
    const Mat& matrix() const { return map_; }
    Block block(Eigen::Index i) const { return map_.block<2, 3>(2 * i, 0); }
    Eigen::VectorXcd apply(const Eigen::Vector3d& v) const;

  private:
    Mat map_;
};

/// sqrt(sum_i (|z_i| - c_i)^2)
double dist_to_orbit(const Eigen::VectorXcd& z, const TorusOrbitSpec& c);

/// Closed form of int_0^1 (sqrt(1 - t^2) - c)^2 dt = 2/3 + c^2 - c pi / 2.
double chord_variance_integral(double c);
/// The same integral by Gauss-Legendre after t = sin(theta).
double chord_variance_quadrature(double c, int nodes = 64);

/// Unit vector spanning the kernel of a 2x3 block: the right singular vector
/// of the smallest singular value, first nonzero coordinate positive. The
/// zero block returns (1, 0, 0).
Eigen::Vector3d kernel_direction(const Block& block);

/// Uniform point of S^2 drawn as t e + sqrt(1 - t^2) u with t uniform on
/// [-1, 1] and u uniform on the circle orthogonal to e.
Eigen::Vector3d archimedes_sample(const Eigen::Vector3d& e, Rng& rng);

struct QuadratureSpec {
    enum class Method { ProductGauss, MonteCarlo };
    Method method = Method::ProductGauss;
    int axial_nodes = 64;
    int angle_nodes = 256;
    long long samples = 200000;
    std::uint64_t seed = 42;
};

struct BlockMoments {
    double mean_abs = 0.0;
    double mean_sq = 0.0;
    double variance = 0.0;
};

struct VarianceReport {
    std::vector<BlockMoments> blocks;
    /// c_i = E|lambda_i(v)|, the minimizer of each coordinate's term.
    Vec optimal_radii;
    /// sum_i Var|lambda_i(v)|: the least expected squared orbit distance.
    double total = 0.0;
    /// sum_i E|lambda_i(v)|^2, equal to 1 for an isometry.
    double second_moment_sum = 0.0;
};

VarianceReport component_variance_report(const SubspaceIsometry& lambda, const QuadratureSpec& q = {});

/// E|B v| and E|B v|^2 over uniform v in S^2 in closed form: with singular
/// values s1 >= s2 of B, E|Bv| = (s1 / 2) E(k), k^2 = 1 - (s2/s1)^2, where E
/// is the complete elliptic integral of the second kind, and
/// E|Bv|^2 = (s1^2 + s2^2) / 3.
BlockMoments exact_block_moments(const Block& block);

struct FarPoint {
    Eigen::Vector3d v;
    double distance = 0.0;
    int iterations = 0;
};

/// Point of the unit sphere of the subspace far from the orbit: best vertex of
/// a level-3 icosphere, then projected gradient ascent with step halving.
FarPoint far_point(const SubspaceIsometry& lambda, const TorusOrbitSpec& c, int max_iterations = 200);

}  // namespace suborbit::torus
