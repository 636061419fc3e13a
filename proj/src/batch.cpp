#include "suborbit/batch.hpp"

#include <algorithm>
#include <numeric>

#include "suborbit/error.hpp"
#include "suborbit/group_certificate.hpp"
#include "suborbit/primes.hpp"

namespace suborbit::batch {

TorusGapBatch torus_gap_batch(const std::vector<int>& ns, int trials, std::uint64_t seed,
                              const torus::QuadratureSpec& q, Execution execution) {
    if (ns.empty() || trials < 1) throw Error(ErrorKind::InvalidInput, "need at least one n and one trial");
    TorusGapBatch out;
    out.trials = map_indexed(static_cast<std::size_t>(trials), execution, [&](std::size_t i) {
        const int n = ns[i % ns.size()];
        Rng rng = Rng::split(seed, i);
        const auto lambda = torus::SubspaceIsometry::random(n, rng);
        torus::QuadratureSpec spec = q;
        spec.seed = splitmix64(seed ^ i);
        const auto report = torus::component_variance_report(lambda, spec);
        return TorusGapTrial{n, report.total, report.second_moment_sum};
    });
    out.min_total = out.trials.front().total;
    for (std::size_t i = 1; i < out.trials.size(); ++i) {
        if (out.trials[i].total < out.min_total) {
            out.min_total = out.trials[i].total;
            out.argmin = i;
        }
    }
    return out;
}

FarPointBatch far_point_batch(const std::vector<int>& ns, int trials, std::uint64_t seed, Execution execution) {
    if (ns.empty() || trials < 1) throw Error(ErrorKind::InvalidInput, "need at least one n and one trial");
    FarPointBatch out;
    out.trials = map_indexed(static_cast<std::size_t>(trials), execution, [&](std::size_t i) {
        const int n = ns[i % ns.size()];
        Rng rng = Rng::split(seed, i);
        const auto lambda = torus::SubspaceIsometry::random(n, rng);
        Vec c(n);
        for (int j = 0; j < n; ++j) c(j) = rng.uniform();
        return FarPointTrial{n, torus::far_point(lambda, torus::TorusOrbitSpec(c)).distance};
    });
    out.min_distance = out.trials.front().distance;
    for (const auto& t : out.trials) out.min_distance = std::min(out.min_distance, t.distance);
    return out;
}

HarnessSweep orbit_harness_sweep(int p_max, int blocks, Execution execution) {
    std::vector<HarnessEntry> jobs;
    for (int p : primes_up_to(p_max)) {
        if (p < 3) continue;
        for (int j = 1; j < p; ++j) {
            for (int k = 1; k < p; ++k) {
                if (j != k) jobs.push_back({p, j, k, 0.0});
            }
        }
    }
    HarnessSweep out;
    out.entries = map_indexed(jobs.size(), execution, [&](std::size_t i) {
        HarnessEntry e = jobs[i];
        e.residual = cert::orbit_triple_harness(e.p, e.j, e.k, blocks).residual;
        return e;
    });
    for (const auto& e : out.entries) out.max_abs_residual = std::max(out.max_abs_residual, std::abs(e.residual));
    return out;
}

CrossCheck not_subtoral_cross_check(int max_den, int p_max, Execution execution) {
    std::vector<std::array<long long, 4>> jobs;  // a, b, c, q
    for (long long q = 1; q <= max_den; ++q) {
        for (long long a = 0; a <= q; ++a) {
            for (long long b = a; a + b <= q; ++b) {
                const long long c = q - a - b;
                if (c < b) continue;
                if (std::gcd(std::gcd(a, b), std::gcd(c, q)) != 1) continue;
                jobs.push_back({a, b, c, q});
            }
        }
    }
    const std::vector<int> primes = primes_up_to(p_max);

    struct Outcome {
        bool not_subtoral = false;
        long long solves = 0;
        bool contradiction = false;
    };
    const auto outcomes = map_indexed(jobs.size(), execution, [&](std::size_t i) {
        const auto [a, b, c, q] = jobs[i];
        const sphere::ArcTriple arcs(sphere::Rational(a, q), sphere::Rational(b, q), sphere::Rational(c, q));
        Outcome o;
        if (sphere::classify_circle_triangle(arcs).verdict != sphere::CircleVerdict::NotSubtoral) return o;
        o.not_subtoral = true;
        const auto sides = sphere::sides_from_arcs(arcs);
        for (int p : primes) {
            ++o.solves;
            if (sphere::decompose_in_Rp(sides, p)) {
                o.contradiction = true;
                break;
            }
        }
        return o;
    });

    CrossCheck out;
    out.triples = static_cast<long long>(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        out.not_subtoral += outcomes[i].not_subtoral;
        out.lp_solves += outcomes[i].solves;
        if (outcomes[i].contradiction) {
            const auto [a, b, c, q] = jobs[i];
            out.contradictions.emplace_back(sphere::Rational(a, q), sphere::Rational(b, q), sphere::Rational(c, q));
        }
    }
    return out;
}

}  // namespace suborbit::batch
