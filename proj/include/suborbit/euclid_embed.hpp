#pragma once

#include <optional>
#include <string>
#include <vector>

#include "suborbit/geometry.hpp"
#include "suborbit/witness.hpp"

namespace suborbit::euclid {

/// How a Z_p orbit containing a pair {0, t} is realized.
///   Simplex: vertices of a regular (p-1)-simplex of side t in R^p, Z_p acting
///            by cyclic coordinate permutation (for p = 2: the pair -t/2, t/2
///            in R^1 under negation).
///   Polygon: a regular p-gon with side t in R^2, Z_p acting by rotation.
/// Both contain the pair as the orbit points of words 0 and 1. Polygon keeps
/// composite witnesses at two dimensions per factor regardless of p.
enum class TwoPointModel { Simplex, Polygon };

/// Witness for the pair {0, t}, labels "0" and "1".
GroupWitness two_point_orbit(int p, double t, TwoPointModel model = TwoPointModel::Simplex);

struct ProductSelection {
    std::string left;
    std::string right;
    std::string label;
};

/// Componentwise action of G_a x G_b on V_a x V_b. Without a selection the
/// claimed set is the full Cartesian product with labels "(a,b)".
GroupWitness product_witness(const GroupWitness& a, const GroupWitness& b,
                             const std::optional<std::vector<ProductSelection>>& selection = std::nullopt);

struct ArcPointSet {
    int p = 0;
    std::vector<long long> indices;
    double radius = 0.0;
    double scale = 0.0;
    PointConfiguration points;
    /// max |dist(b_i, b_j) - |i - j| * scale|
    double deviation = 0.0;
};

/// m consecutive vertices of the regular p-gon whose side is `step_length`.
ArcPointSet consecutive_arc_points(int p, int m, double step_length);

struct GridApproximation {
    int resolution = 0;
    /// Target points rounded to the grid lo + (L/s) Z^k (original coordinates).
    PointConfiguration grid_points;
    /// Suborbit in R^{2k}: coordinate c of grid index j becomes arc point b_j.
    PointConfiguration realized;
    GroupWitness witness;
    double max_grid_offset = 0.0;
    /// max |dist_realized(i,j) - dist_target(i,j)|
    double max_distance_error = 0.0;
};

/// Product of per-coordinate arc point sets at grid resolution s. Returns
/// nullopt when s + 1 > p.
std::optional<GridApproximation> grid_at_resolution(const PointConfiguration& target, int p,
                                                    int resolution);

/// Grid approximation whose grid offsets and realized distances are within
/// `delta` of the target. nullopt when p is too small for delta.
std::optional<GridApproximation> try_grid_approximation(const PointConfiguration& target,
                                                        double delta, int p);
/// Throws Infeasible when p is too small for delta.
GridApproximation grid_approximation(const PointConfiguration& target, double delta, int p);

struct Cut {
    /// Member indices, ascending. The last point is never a member.
    std::vector<int> members;
    double weight = 0.0;

    bool separates(int i, int j) const;
};

struct CutDecomposition {
    int size = 0;
    std::vector<Cut> cuts;

    /// Sum of the cut semimetrics.
    Mat reconstruct() const;
};

inline constexpr int kMaxBrickPoints = 8;

/// Nonnegative combination of cut semimetrics equal to `target`, or nullopt
/// when the matrix is outside the cut cone. Among feasible decompositions the
/// LP minimizes sum of weight * min(|S|, m - |S|).
std::optional<CutDecomposition> try_brick_embed(const SquaredDistanceMatrix& target);
CutDecomposition brick_embed(const SquaredDistanceMatrix& target);

/// Product over cuts of two-point orbits with t_S = sqrt(s_S); point i picks
/// vertex 1 of factor S iff i is in S.
GroupWitness brick_witness(const CutDecomposition& cuts, int p, const std::vector<std::string>& labels,
                           TwoPointModel model = TwoPointModel::Polygon);

struct IsoscelesEmbedding {
    GroupWitness witness;
    double t = 0.0;
    double apex_angle = 0.0;
    /// Measured apex angle of three consecutive p-gon vertices.
    double consecutive_angle = 0.0;
};

/// Apex angle at the middle of three consecutive vertices of a regular p-gon.
double consecutive_pgon_angle(int p);

/// Isosceles triangle A, B, C with apex A and apex angle alpha, realized as
/// (A, t), (B, 0), (C, 0) in (three consecutive p-gon points) x {0, t}.
/// Throws Infeasible when alpha exceeds consecutive_pgon_angle(p).
IsoscelesEmbedding isosceles_with_apex_angle(double alpha, int p);

struct EmbedOptions {
    bool allow_raise_p = true;
    long long p_max = 1'000'003;
    double tolerance = 1e-7;
};

struct SimplexEmbedding {
    GroupWitness witness;
    int p = 0;
    double eta = 0.0;
    int resolution = 0;
    CutDecomposition cuts;
    double distance_error = 0.0;
    int attempts = 0;
};

/// Exact isometric copy of an affinely independent set inside a p-torus
/// orbit: the near-regular part D - (D - eta(J - I)) goes to a brick, the
/// shifted simplex to a grid of arc points, and the product carries both.
/// Throws Degenerate for affinely dependent input and Infeasible when p (or
/// p_max when raising is allowed) is too small.
SimplexEmbedding embed_simplex(const PointConfiguration& target, int p, const EmbedOptions& opts = {});
std::optional<SimplexEmbedding> try_embed_simplex(const PointConfiguration& target, int p,
                                                  const EmbedOptions& opts = {});

inline constexpr int kExhaustivePrimeScan = 10'007;

/// Smallest prime p <= p_max for which embed_simplex succeeds at fixed p.
/// Primes up to kExhaustivePrimeScan are tried one by one; above that the
/// search brackets by doubling and bisects, which relies on success being
/// monotone in p (finer arcs and a longer resolution ladder).
std::optional<SimplexEmbedding> min_prime_for(const PointConfiguration& target, int p_max);

}  // namespace suborbit::euclid
