#pragma once

#include <vector>

#include <Eigen/Dense>

namespace suborbit {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

struct SphereNode {
    Eigen::Vector3d v;
    double weight = 0.0;
};

/// Product rule for the uniform probability measure on S^2 built on the
/// Archimedes factorization v = t e + sqrt(1 - t^2) (cos(phi) b1 + sin(phi) b2).
/// The axial coordinate is integrated as t = sin(theta) with Gauss-Legendre in
/// theta; the angle uses Gauss-Legendre on the four quadrants bounded by
/// +-b1, +-b2. Weights sum to 1. angle_nodes must be a multiple of 4.
std::vector<SphereNode> sphere_product_rule(const Eigen::Vector3d& e, const Eigen::Vector3d& b1,
                                            const Eigen::Vector3d& b2, int axial_nodes, int angle_nodes);

/// Vertices of the icosahedron subdivided `level` times, projected to S^2.
std::vector<Eigen::Vector3d> icosphere(int level);

}  // namespace suborbit
