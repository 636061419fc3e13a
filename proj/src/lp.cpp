#include "suborbit/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "suborbit/error.hpp"

namespace suborbit::lp {

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::IterationLimit: return "iteration_limit";
    }
    return "unknown";
}

namespace {

// Tableau layout: rows 0..m-1 are constraints, row m is the reduced-cost
// row; the last column holds the right-hand side.
class Tableau {
  public:
    Tableau(Mat t, std::vector<Eigen::Index> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

    Eigen::Index rows() const { return t_.rows() - 1; }
    Eigen::Index rhs_col() const { return t_.cols() - 1; }
    Mat& data() { return t_; }
    const std::vector<Eigen::Index>& basis() const { return basis_; }

    void pivot(Eigen::Index row, Eigen::Index col) {
        t_.row(row) /= t_(row, col);
        for (Eigen::Index r = 0; r < t_.rows(); ++r) {
            if (r == row) continue;
            const double f = t_(r, col);
            if (f != 0.0) t_.row(r) -= f * t_.row(row);
        }
        basis_[static_cast<std::size_t>(row)] = col;
    }

    // Pivots over columns [0, ncols) with Dantzig pricing, switching to
    // Bland's rule for the rest of the run after a streak of degenerate
    // pivots (which rules out cycling). Returns Optimal, Unbounded or
    // IterationLimit.
    Status run(Eigen::Index ncols, const Options& opts, int& iterations) {
        constexpr int kDegenerateStreak = 50;
        const Eigen::Index m = rows();
        bool bland = false;
        int degenerate = 0;
        while (true) {
            if (iterations >= opts.max_iterations) return Status::IterationLimit;
            Eigen::Index enter = -1;
            double most_negative = -opts.pivot_tol;
            for (Eigen::Index j = 0; j < ncols; ++j) {
                if (t_(m, j) < most_negative) {
                    enter = j;
                    if (bland) break;
                    most_negative = t_(m, j);
                }
            }
            if (enter < 0) return Status::Optimal;
            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index r = 0; r < m; ++r) {
                const double a = t_(r, enter);
                if (a <= opts.pivot_tol) continue;
                const double ratio = t_(r, rhs_col()) / a;
                if (leave < 0 || ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 && basis_[r] < basis_[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
            if (leave < 0) return Status::Unbounded;
            degenerate = best <= 1e-15 ? degenerate + 1 : 0;
            if (degenerate >= kDegenerateStreak) bland = true;
            pivot(leave, enter);
            ++iterations;
        }
    }

  private:
    Mat t_;
    std::vector<Eigen::Index> basis_;
};

}  // namespace

Result solve(const Mat& a, const Vec& b, const Vec& cost, const Options& opts) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (b.size() != m || (cost.size() != 0 && cost.size() != n)) {
        throw Error(ErrorKind::DimensionMismatch, "lp::solve: inconsistent problem dimensions");
    }

    // Phase one: artificials n..n+m-1, rows flipped so b >= 0.
    Mat t = Mat::Zero(m + 1, n + m + 1);
    std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
    for (Eigen::Index r = 0; r < m; ++r) {
        const double sign = b(r) < 0.0 ? -1.0 : 1.0;
        t.row(r).head(n) = sign * a.row(r);
        t(r, n + r) = 1.0;
        t(r, n + m) = sign * b(r);
        basis[static_cast<std::size_t>(r)] = n + r;
    }
    for (Eigen::Index r = 0; r < m; ++r) t.row(m) -= t.row(r);
    for (Eigen::Index r = 0; r < m; ++r) t(m, n + r) = 0.0;

    Tableau tab(std::move(t), std::move(basis));
    Result result;
    Status st = tab.run(n + m, opts, result.iterations);
    if (st == Status::IterationLimit) {
        result.status = st;
        return result;
    }
    result.infeasibility = -tab.data()(m, n + m);
    if (result.infeasibility > opts.feasibility_tol) {
        result.status = Status::Infeasible;
        return result;
    }

    // Drive zero-level artificials out of the basis where possible.
    for (Eigen::Index r = 0; r < m; ++r) {
        if (tab.basis()[static_cast<std::size_t>(r)] < n) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(tab.data()(r, j)) > 1e-9) {
                tab.pivot(r, j);
                break;
            }
        }
    }

    // Phase two on the original columns only.
    Mat& data = tab.data();
    data.row(m).setZero();
    if (cost.size() == n) {
        data.row(m).head(n) = cost.transpose();
        for (Eigen::Index r = 0; r < m; ++r) {
            const Eigen::Index bc = tab.basis()[static_cast<std::size_t>(r)];
            if (bc < n && cost(bc) != 0.0) data.row(m) -= cost(bc) * data.row(r);
        }
        // Artificials may not re-enter.
        st = tab.run(n, opts, result.iterations);
        if (st != Status::Optimal) {
            result.status = st;
            return result;
        }
    }

    // Re-solve the basic variables from the original columns.
    std::vector<Eigen::Index> cols;
    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::Index bc = tab.basis()[static_cast<std::size_t>(r)];
        if (bc < n) cols.push_back(bc);
    }
    Vec x = Vec::Zero(n);
    if (!cols.empty()) {
        Mat basic(m, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) basic.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
        const Vec xb = basic.colPivHouseholderQr().solve(b);
        for (std::size_t c = 0; c < cols.size(); ++c) x(cols[c]) = xb(static_cast<Eigen::Index>(c));
    }
    result.residual = m == 0 ? 0.0 : (a * x - b).cwiseAbs().maxCoeff();
    if (x.size() > 0 && x.minCoeff() < -opts.feasibility_tol) {
        result.status = Status::Infeasible;
        return result;
    }
    x = x.cwiseMax(0.0);
    result.residual = m == 0 ? 0.0 : (a * x - b).cwiseAbs().maxCoeff();
    result.status = result.residual <= std::max(opts.feasibility_tol, 1e-12) * (1.0 + b.cwiseAbs().maxCoeff())
                        ? Status::Optimal
                        : Status::Infeasible;
    result.objective = cost.size() == n ? cost.dot(x) : 0.0;
    result.x = std::move(x);
    return result;
}

}  // namespace suborbit::lp
