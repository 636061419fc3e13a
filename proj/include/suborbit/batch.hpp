#pragma once

#include <cstdint>
#include <vector>

#include "suborbit/parallel.hpp"
#include "suborbit/sphere_triangles.hpp"
#include "suborbit/torus_gap.hpp"

/// Embarrassingly parallel sweeps. Trial i draws from Rng::split(seed, i) and
/// results are aggregated in index order, so Serial and Parallel agree
/// bit for bit.
namespace suborbit::batch {

struct TorusGapTrial {
    int n = 0;
    double total = 0.0;
    double second_moment_sum = 0.0;
};

struct TorusGapBatch {
    std::vector<TorusGapTrial> trials;
    double min_total = 0.0;
    std::size_t argmin = 0;
};

/// Trial i uses n = ns[i % ns.size()] and a random isometry R^3 -> C^n.
TorusGapBatch torus_gap_batch(const std::vector<int>& ns, int trials, std::uint64_t seed,
                              const torus::QuadratureSpec& q, Execution execution);

struct FarPointTrial {
    int n = 0;
    double distance = 0.0;
};

struct FarPointBatch {
    std::vector<FarPointTrial> trials;
    double min_distance = 0.0;
};

/// Random isometry and radii c_i uniform on [0, 1].
FarPointBatch far_point_batch(const std::vector<int>& ns, int trials, std::uint64_t seed, Execution execution);

struct HarnessEntry {
    int p = 0;
    int j = 0;
    int k = 0;
    double residual = 0.0;
};

struct HarnessSweep {
    std::vector<HarnessEntry> entries;
    double max_abs_residual = 0.0;
};

/// Every prime p <= p_max (p >= 3) and every ordered pair of distinct
/// nonzero steps (j, k).
HarnessSweep orbit_harness_sweep(int p_max, int blocks, Execution execution);

struct CrossCheck {
    long long triples = 0;        // arc triples examined (sorted, lowest terms)
    long long not_subtoral = 0;   // classified not_subtoral
    long long lp_solves = 0;
    std::vector<sphere::ArcTriple> contradictions;  // not_subtoral yet LP-feasible
};

/// For every arc triple a <= b <= c with common denominator <= max_den the
/// exact classifier runs; each not_subtoral verdict is checked against LP
/// infeasibility of decompose_in_Rp for all primes <= p_max.
CrossCheck not_subtoral_cross_check(int max_den, int p_max, Execution execution);

}  // namespace suborbit::batch
