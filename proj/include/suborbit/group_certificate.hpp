#pragma once

#include <vector>

#include "suborbit/linalg.hpp"

namespace suborbit::cert {

/// Unit (a, b, c) with a A + b B + c C = 0, first nonzero entry positive.
struct DependenceParameters {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    Eigen::Vector3d vector() const { return {a, b, c}; }
};

/// B = G A and C = H A for orthogonal G, H.
struct RepresentationPair {
    Mat g;
    Mat h;

    /// Throws DimensionMismatch unless G, H are square of equal size and
    /// orthogonal within 1e-10.
    void validate() const;
};

/// Kernel of the 2 x 3 matrix [A B C] from the smallest right singular
/// vector. Throws InvalidInput when two points coincide.
DependenceParameters dependence_parameters(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                           const Eigen::Vector2d& c);

/// det(a I + b G + c H) for unscaled params (a, b, c).
double certificate_residual(const Eigen::Vector3d& params, const RepresentationPair& rep);
double certificate_residual(const DependenceParameters& params, const RepresentationPair& rep);

struct HarnessResult {
    DependenceParameters params;
    RepresentationPair rep;
    double residual = 0.0;
};

/// Triple A = e_1, B = R(2 pi j / p) A, C = R(2 pi k / p) A on the first
/// plane; with blocks > 1 the representation is block diagonal, block b
/// rotating by (b + 1) times the base angle. Throws InvalidInput unless
/// p is prime and 0, j, k are distinct mod p.
HarnessResult orbit_triple_harness(int p, long long j, long long k, int blocks = 1);

}  // namespace suborbit::cert
