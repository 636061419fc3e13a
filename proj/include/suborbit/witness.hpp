#pragma once

#include <string>
#include <vector>

#include "suborbit/geometry.hpp"

namespace suborbit {

/// Exponent vector in Z_p^alpha, one entry per generator.
using Word = std::vector<long long>;

/// Explicit p-torus action certifying that `claimed` is a suborbit.
///
/// The group is generated by commuting orthogonal matrices of order p that
/// fix `center`. The point labeled `claimed.label(i)` is reproduced as
/// center + g_1^{w_1} ... g_a^{w_a} (base - center) with w = words[i].
struct GroupWitness {
    int p = 2;
    std::vector<Mat> generators;
    Vec center;
    Vec base;
    std::vector<Word> words;
    PointConfiguration claimed;

    Eigen::Index dim() const { return base.size(); }
    std::size_t rank() const { return generators.size(); }

    /// Group element g^w as an N x N matrix.
    Mat element(const Word& w) const;
    Vec apply(const Word& w) const;
    const Word& word(const std::string& label) const;

    /// Orbit points for the claimed labels, in claimed order.
    PointConfiguration realize() const;
};

struct VerificationReport {
    double max_point_error = 0.0;
    double max_distance_error = 0.0;
    double group_axiom_error = 0.0;
    bool pass = false;
};

/// Checks the group axioms (orthogonality, commutation, g^p = I, fixed
/// center) and that every word reproduces its claimed point. Distance error
/// compares squared distances. Throws DimensionMismatch on malformed input.
VerificationReport verify_witness(const GroupWitness& w, double tol);

/// Worst |d^2_realized - d^2_target| over label pairs of `target`; the
/// target may live in any dimension.
double distance_error_against(const GroupWitness& w, const PointConfiguration& target);

/// Z_p acting by rotation through 2 pi / p on a circle of the given radius in
/// R^2 around the origin; claimed points are the requested vertex indices.
GroupWitness pgon_witness(int p, double radius, const std::vector<long long>& vertices,
                          const std::vector<std::string>& labels);

Mat block_diagonal(const Mat& a, const Mat& b);

}  // namespace suborbit
