#pragma once

#include "suborbit/linalg.hpp"

namespace suborbit::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status s);

struct Options {
    double feasibility_tol = 1e-10;
    double pivot_tol = 1e-12;
    int max_iterations = 50000;
};

struct Result {
    Status status = Status::Infeasible;
    Vec x;
    double objective = 0.0;
    /// max |A x - b| after the final basis solve.
    double residual = 0.0;
    /// Phase-one optimum: total artificial mass left when feasibility was
    /// decided. Zero (to tolerance) on feasible problems.
    double infeasibility = 0.0;
    int iterations = 0;
};

/// Dense two-phase tableau simplex for
///   minimize cost . x  subject to  A x = b, x >= 0.
/// Entering columns are priced by most negative reduced cost; after 50
/// consecutive degenerate pivots the run falls back to Bland's rule (lowest
/// eligible index enters), so it never cycles. Ratio ties leave by lowest
/// basic index. Runs are deterministic.
/// The basic solution is re-solved from the original columns at the end.
/// An empty `cost` means pure feasibility.
Result solve(const Mat& a, const Vec& b, const Vec& cost, const Options& opts = {});

}  // namespace suborbit::lp
