#include "suborbit/knaster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "suborbit/euclid_embed.hpp"

namespace suborbit::knaster {

Frame::Frame(Mat columns) : m_(std::move(columns)) {
    if (m_.rows() < 1 || m_.cols() < 1 || m_.cols() > m_.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "frame must be n x k with 1 <= k <= n");
    }
    if (orthonormality_error() > kTolerance) {
        throw Error(ErrorKind::InvalidInput, "frame columns are not orthonormal");
    }
}

Frame Frame::retract(const Mat& m) {
    if (m.rows() < 1 || m.cols() < 1 || m.cols() > m.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "frame must be n x k with 1 <= k <= n");
    }
    Eigen::ColPivHouseholderQR<Mat> qr(m);
    qr.setThreshold(1e-12);
    if (qr.rank() < m.cols()) throw Error(ErrorKind::Degenerate, "frame columns are linearly dependent");
    Frame f;
    f.m_ = orthonormalize_columns(m);
    return f;
}

Frame Frame::random(int n, int k, Rng& rng) {
    Mat m(n, k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < n; ++i) m(i, j) = rng.normal();
    }
    return retract(m);
}

double Frame::orthonormality_error() const {
    return max_abs(m_.transpose() * m_ - Mat::Identity(m_.cols(), m_.cols()));
}

// --- test maps -------------------------------------------------------------

TestMap TestMap::linear(Mat a) {
    if (a.rows() < 1 || a.cols() < 1) throw Error(ErrorKind::DimensionMismatch, "linear map must be d x n");
    return TestMap(Linear{std::move(a)});
}

TestMap TestMap::quadratic(std::vector<Mat> q) {
    if (q.empty()) throw Error(ErrorKind::DimensionMismatch, "quadratic map needs at least one form");
    const Eigen::Index n = q.front().rows();
    for (auto& m : q) {
        if (m.rows() != n || m.cols() != n || n < 1) {
            throw Error(ErrorKind::DimensionMismatch, "quadratic forms must be n x n");
        }
        m = (0.5 * (m + m.transpose())).eval();
    }
    return TestMap(Quadratic{std::move(q)});
}

TestMap TestMap::expressions(std::vector<Expression> e, int n) {
    if (e.empty() || n < 1) throw Error(ErrorKind::DimensionMismatch, "expression map needs d >= 1 and n >= 1");
    return TestMap(Expressions{std::move(e), n});
}

TestMap TestMap::parse(const std::vector<std::string>& texts, int n) {
    std::vector<Expression> e;
    e.reserve(texts.size());
    for (const auto& t : texts) e.push_back(Expression::parse(t, n));
    return expressions(std::move(e), n);
}

TestMap TestMap::random_linear(int d, int n, Rng& rng) {
    Mat a(d, n);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    }
    return linear(std::move(a));
}

TestMap TestMap::random_quadratic(int d, int n, Rng& rng) {
    std::vector<Mat> q;
    for (int c = 0; c < d; ++c) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
        }
        q.push_back(m);
    }
    return quadratic(std::move(q));
}

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

int TestMap::input_dim() const {
    return std::visit(overloaded{[](const Linear& m) { return static_cast<int>(m.a.cols()); },
                                 [](const Quadratic& m) { return static_cast<int>(m.q.front().rows()); },
                                 [](const Expressions& m) { return m.n; }},
                      map_);
}

int TestMap::output_dim() const {
    return std::visit(overloaded{[](const Linear& m) { return static_cast<int>(m.a.rows()); },
                                 [](const Quadratic& m) { return static_cast<int>(m.q.size()); },
                                 [](const Expressions& m) { return static_cast<int>(m.e.size()); }},
                      map_);
}

Vec TestMap::operator()(const Vec& x) const {
    if (x.size() != input_dim()) throw Error(ErrorKind::DimensionMismatch, "test map input has wrong dimension");
    return std::visit(overloaded{[&](const Linear& m) -> Vec { return m.a * x; },
                                 [&](const Quadratic& m) -> Vec {
                                     Vec y(static_cast<Eigen::Index>(m.q.size()));
                                     for (std::size_t i = 0; i < m.q.size(); ++i) y(i) = x.dot(m.q[i] * x);
                                     return y;
                                 },
                                 [&](const Expressions& m) -> Vec {
                                     Vec y(static_cast<Eigen::Index>(m.e.size()));
                                     for (std::size_t i = 0; i < m.e.size(); ++i) y(i) = m.e[i].evaluate(x);
                                     return y;
                                 }},
                      map_);
}

Mat TestMap::jacobian(const Vec& x) const {
    if (x.size() != input_dim()) throw Error(ErrorKind::DimensionMismatch, "test map input has wrong dimension");
    return std::visit(overloaded{[&](const Linear& m) -> Mat { return m.a; },
                                 [&](const Quadratic& m) -> Mat {
                                     Mat j(static_cast<Eigen::Index>(m.q.size()), x.size());
                                     for (std::size_t i = 0; i < m.q.size(); ++i) {
                                         j.row(i) = (2.0 * (m.q[i] * x)).transpose();
                                     }
                                     return j;
                                 },
                                 [&](const Expressions& m) -> Mat {
                                     Mat j(static_cast<Eigen::Index>(m.e.size()), x.size());
                                     Vec g;
                                     for (std::size_t i = 0; i < m.e.size(); ++i) {
                                         m.e[i].evaluate(x, g);
                                         j.row(i) = g.transpose();
                                     }
                                     return j;
                                 }},
                      map_);
}

Mat TestMap::jacobian_fd(const Vec& x, double h) const {
    Mat j(output_dim(), x.size());
    Vec xp = x;
    for (Eigen::Index c = 0; c < x.size(); ++c) {
        xp(c) = x(c) + h;
        const Vec fp = (*this)(xp);
        xp(c) = x(c) - h;
        const Vec fm = (*this)(xp);
        xp(c) = x(c);
        j.col(c) = (fp - fm) / (2.0 * h);
    }
    return j;
}

TestMap TestMap::scaled(double s) const {
    return std::visit(overloaded{[&](const Linear& m) { return linear(s * m.a); },
                                 [&](const Quadratic& m) {
                                     std::vector<Mat> q;
                                     for (const auto& qi : m.q) q.push_back(s * qi);
                                     return quadratic(std::move(q));
                                 },
                                 [&](const Expressions& m) {
                                     std::vector<Expression> e;
                                     for (const auto& ei : m.e) {
                                         e.push_back(Expression::parse(
                                             Expression::constant(s).to_string() + "*(" + ei.to_string() + ")", m.n));
                                     }
                                     return expressions(std::move(e), m.n);
                                 }},
                      map_);
}

// --- objective -------------------------------------------------------------

namespace {

void check_shapes(const Mat& frame, const PointConfiguration& x, const TestMap& f, const Vec& offset) {
    if (frame.cols() != x.dim()) throw Error(ErrorKind::DimensionMismatch, "frame has k != dim(X)");
    if (frame.rows() != f.input_dim()) throw Error(ErrorKind::DimensionMismatch, "frame has n != input dimension of f");
    if (offset.size() != 0 && offset.size() != frame.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "offset has wrong dimension");
    }
}

Vec place(const Mat& frame, const Vec& point, const Vec& offset) {
    Vec y = frame * point;
    if (offset.size() != 0) y += offset;
    return y;
}

double spread_of(const std::vector<Vec>& images) {
    Vec mean = Vec::Zero(images.front().size());
    for (const auto& v : images) mean += v;
    mean /= static_cast<double>(images.size());
    double phi = 0.0;
    for (const auto& v : images) phi += (v - mean).squaredNorm();
    return phi;
}

std::vector<Vec> images_of(const Mat& frame, const PointConfiguration& x, const TestMap& f, const Vec& offset) {
    std::vector<Vec> out;
    out.reserve(x.size());
    for (const auto& pt : x.points()) out.push_back(f(place(frame, pt, offset)));
    return out;
}

}  // namespace

double spread_objective(const Mat& frame, const PointConfiguration& x, const TestMap& f, const Vec& offset) {
    check_shapes(frame, x, f, offset);
    return spread_of(images_of(frame, x, f, offset));
}

double spread_objective(const Frame& frame, const PointConfiguration& x, const TestMap& f) {
    return spread_objective(frame.matrix(), x, f);
}

SpreadGradient spread_gradient(const Mat& frame, const PointConfiguration& x, const TestMap& f, const Vec& offset,
                               GradientMethod method) {
    check_shapes(frame, x, f, offset);
    const std::vector<Vec> images = images_of(frame, x, f, offset);
    Vec mean = Vec::Zero(images.front().size());
    for (const auto& v : images) mean += v;
    mean /= static_cast<double>(images.size());

    SpreadGradient g;
    g.frame = Mat::Zero(frame.rows(), frame.cols());
    g.offset = Vec::Zero(frame.rows());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Vec y = place(frame, x.point(i), offset);
        const Vec r = images[i] - mean;
        g.phi += r.squaredNorm();
        const Mat j = method == GradientMethod::Analytic ? f.jacobian(y) : f.jacobian_fd(y);
        const Vec v = 2.0 * (j.transpose() * r);
        g.frame += v * x.point(i).transpose();
        g.offset += v;
    }
    if (offset.size() == 0) g.offset.resize(0);
    return g;
}

// --- search ----------------------------------------------------------------

namespace {

struct RestartResult {
    Mat frame;
    Vec offset;
    double phi = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

double inner(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

/// Riemannian gradient descent on the Stiefel manifold (embedded metric)
/// with Barzilai-Borwein step guesses, Armijo step halving and QR retraction.
RestartResult descend(const PointConfiguration& x, const TestMap& f, const SearchOptions& opts, Rng rng) {
    const int n = f.input_dim();
    const int k = static_cast<int>(x.dim());
    const double target = opts.tol * 1e-4;

    RestartResult r;
    r.frame = Frame::random(n, k, rng).matrix();
    if (opts.translate) r.offset = Vec::Zero(n);

    SpreadGradient g = spread_gradient(r.frame, x, f, r.offset, opts.gradient);
    r.phi = g.phi;

    auto riemannian = [&](const Mat& frame, const SpreadGradient& grad) {
        const Mat s = frame.transpose() * grad.frame;
        return Mat(grad.frame - frame * (0.5 * (s + s.transpose())));
    };

    Mat rg = riemannian(r.frame, g);
    double step = 0.5;
    for (int it = 0; it < opts.iterations && r.phi > target; ++it) {
        const double norm2 = rg.squaredNorm() + (opts.translate ? g.offset.squaredNorm() : 0.0);
        if (norm2 < 1e-300) break;

        bool accepted = false;
        Mat next_frame;
        Vec next_offset;
        SpreadGradient next;
        for (int halving = 0; halving < 60; ++halving) {
            next_frame = orthonormalize_columns(r.frame - step * rg);
            if (opts.translate) next_offset = r.offset - step * g.offset;
            next = spread_gradient(next_frame, x, f, next_offset, opts.gradient);
            if (std::isfinite(next.phi) && next.phi <= r.phi - 1e-4 * step * norm2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++r.iterations;
        if (!accepted) break;

        const Mat next_rg = riemannian(next_frame, next);
        const Mat s = next_frame - r.frame;
        const Mat y = next_rg - rg;
        double ss = s.squaredNorm();
        double sy = inner(s, y);
        if (opts.translate) {
            const Vec so = next_offset - r.offset;
            ss += so.squaredNorm();
            sy += so.dot(next.offset - g.offset);
        }
        step = (sy != 0.0) ? std::clamp(std::abs(ss / sy), 1e-10, 1e6) : std::min(step * 2.0, 1e6);

        r.frame = std::move(next_frame);
        r.offset = std::move(next_offset);
        g = std::move(next);
        rg = next_rg;
        r.phi = g.phi;
    }
    return r;
}

double dimension_bound(int d, double q, int k) { return d * (q - 1.0) + k; }

}  // namespace

SearchReport minimize_spread(const PointConfiguration& x, const TestMap& f, const SearchOptions& opts) {
    if (opts.restarts < 1 || opts.iterations < 0 || opts.batch < 1) {
        throw Error(ErrorKind::InvalidInput, "restarts and batch must be positive, iterations nonnegative");
    }
    if (f.input_dim() < x.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "input dimension of f is smaller than dim(X)");
    }

    SearchReport report;
    report.seed = opts.seed;
    report.n = f.input_dim();
    report.phi = std::numeric_limits<double>::infinity();

    RestartResult best;
    for (int start = 0; start < opts.restarts; start += opts.batch) {
        const int count = std::min(opts.batch, opts.restarts - start);
        const auto results = map_indexed(static_cast<std::size_t>(count), opts.execution, [&](std::size_t i) {
            return descend(x, f, opts, Rng::split(opts.seed, static_cast<std::uint64_t>(start) + i));
        });
        for (int i = 0; i < count; ++i) {
            report.iterations += results[i].iterations;
            // Strict comparison keeps the lowest restart index among ties.
            if (results[i].phi < report.phi || report.best_restart < 0) {
                report.phi = results[i].phi;
                report.best_restart = start + i;
                best = results[i];
            }
        }
        report.restarts = start + count;
        if (report.phi < opts.tol) break;
    }

    report.frame = best.frame;
    report.offset = best.offset;
    report.images = images_of(best.frame, x, f, best.offset);
    report.phi = spread_of(report.images);
    report.success = report.phi < opts.tol;
    if (!report.success) report.warnings.push_back("budget exhausted before reaching tolerance");
    return report;
}

SearchReport search_constant_configuration(const PointConfiguration& x, const GroupWitness& witness,
                                           const TestMap& f, int n, const SearchOptions& opts) {
    for (const auto& pt : x.points()) {
        if (std::abs(pt.norm() - 1.0) > PointConfiguration::kSphereTolerance) {
            throw Error(ErrorKind::InvalidInput, "X must lie on the unit sphere");
        }
    }
    if (n != f.input_dim()) throw Error(ErrorKind::DimensionMismatch, "n differs from the input dimension of f");
    if (witness.dim() != x.dim()) throw Error(ErrorKind::InvalidInput, "invalid witness: dimension differs from X");
    const VerificationReport check = verify_witness(witness, 1e-7);
    if (!check.pass) throw Error(ErrorKind::InvalidInput, "invalid witness: verification failed");
    if (witness.center.norm() > 1e-9) throw Error(ErrorKind::InvalidInput, "invalid witness: center is not the origin");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!witness.claimed.index_of(x.label(i))) {
            throw Error(ErrorKind::InvalidInput, "invalid witness: label '" + x.label(i) + "' is not claimed");
        }
        if ((witness.apply(witness.word(x.label(i))) - x.point(i)).norm() > 1e-7) {
            throw Error(ErrorKind::InvalidInput, "invalid witness: point '" + x.label(i) + "' is not reproduced");
        }
    }

    SearchReport report = minimize_spread(x, f, opts);
    const double q = std::pow(static_cast<double>(witness.p), static_cast<double>(witness.rank()));
    report.dimension_bound = dimension_bound(f.output_dim(), q, static_cast<int>(x.dim()));
    if (n < report.dimension_bound) {
        std::ostringstream os;
        os << "n = " << n << " is below d(q-1)+k = " << report.dimension_bound << "; no constant placement is guaranteed";
        report.warnings.insert(report.warnings.begin(), os.str());
    }
    return report;
}

EuclideanSetup euclidean_setup(const PointConfiguration& x, int p, int d) {
    if (d < 1) throw Error(ErrorKind::InvalidInput, "d must be positive");
    euclid::SimplexEmbedding emb = euclid::embed_simplex(x, p);
    const PointConfiguration orbit = emb.witness.realize();

    Mat y(emb.witness.dim(), static_cast<Eigen::Index>(orbit.size()));
    for (std::size_t i = 0; i < orbit.size(); ++i) y.col(static_cast<Eigen::Index>(i)) = orbit.point(i) - emb.witness.center;

    // Orthonormal basis of span{y_i}; the rank is the realized orbit dimension.
    Eigen::ColPivHouseholderQR<Mat> qr(y);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = std::max<Eigen::Index>(qr.rank(), 1);
    const Mat q = Mat(qr.householderQ()).leftCols(rank);
    std::vector<Vec> coords;
    double radius = 0.0;
    for (Eigen::Index i = 0; i < y.cols(); ++i) {
        coords.push_back(q.transpose() * y.col(i));
        radius = std::max(radius, coords.back().norm());
    }

    const int m = static_cast<int>(x.size());
    return EuclideanSetup{
        .witness = std::move(emb.witness),
        .centered = PointConfiguration(std::move(coords), orbit.labels()),
        .radius = radius,
        .k = static_cast<int>(rank),
        .p = emb.p,
        .n = static_cast<int>(dimension_bound(d, m, static_cast<int>(rank))),
    };
}

SearchReport euclidean_search(const EuclideanSetup& setup, const TestMap& f, const SearchOptions& opts) {
    if (f.input_dim() < setup.k) throw Error(ErrorKind::DimensionMismatch, "input dimension of f is below k'");
    SearchReport report = minimize_spread(setup.centered, f, opts);
    report.dimension_bound = dimension_bound(f.output_dim(), static_cast<double>(setup.centered.size()), setup.k);
    if (report.n < report.dimension_bound) {
        std::ostringstream os;
        os << "n = " << report.n << " is below d(|X|-1)+k' = " << report.dimension_bound;
        report.warnings.insert(report.warnings.begin(), os.str());
    }
    return report;
}

}  // namespace suborbit::knaster
