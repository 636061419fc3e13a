#include "suborbit/euclid_embed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "suborbit/error.hpp"
#include "suborbit/lp.hpp"
#include "suborbit/primes.hpp"

namespace suborbit::euclid {

namespace {

Vec concat(const Vec& a, const Vec& b) {
    Vec out(a.size() + b.size());
    out << a, b;
    return out;
}

// Zero-generator witness: every claimed point is the base itself.
GroupWitness trivial_witness(int p, const Vec& point, const std::vector<std::string>& labels) {
    std::vector<Vec> pts(labels.size(), point);
    return GroupWitness{.p = p,
                        .generators = {},
                        .center = point,
                        .base = point,
                        .words = std::vector<Word>(labels.size()),
                        .claimed = PointConfiguration(std::move(pts), labels)};
}

// Claimed points of `w` picked by source label and renamed.
GroupWitness relabel_select(const GroupWitness& w,
                            const std::vector<std::pair<std::string, std::string>>& picks) {
    std::vector<Vec> pts;
    std::vector<std::string> labels;
    std::vector<Word> words;
    for (const auto& [src, dst] : picks) {
        pts.push_back(w.claimed.point(src));
        words.push_back(w.word(src));
        labels.push_back(dst);
    }
    return GroupWitness{.p = w.p,
                        .generators = w.generators,
                        .center = w.center,
                        .base = w.base,
                        .words = std::move(words),
                        .claimed = PointConfiguration(std::move(pts), std::move(labels))};
}

struct GridLayout {
    int resolution = 0;
    double radius = 0.0;
    Vec lo;
    double step = 0.0;
    std::vector<std::vector<long long>> indices;  // [coordinate][point]
    std::vector<Vec> realized;
    std::vector<Vec> grid_points;
};

double extent(const PointConfiguration& target, Vec& lo) {
    const Mat rows = target.as_rows();
    lo = rows.colwise().minCoeff().transpose();
    const Vec hi = rows.colwise().maxCoeff().transpose();
    return (hi - lo).maxCoeff();
}

std::optional<GridLayout> layout_grid(const PointConfiguration& target, int p, int s) {
    if (s < 1 || s + 1 > p) return std::nullopt;
    GridLayout g;
    const double len = extent(target, g.lo);
    g.resolution = s;
    g.step = len / s;
    g.radius = g.step / (2.0 * std::sin(std::numbers::pi / p));
    const Eigen::Index k = target.dim();
    const std::size_t m = target.size();
    g.indices.assign(static_cast<std::size_t>(k), std::vector<long long>(m));
    for (std::size_t i = 0; i < m; ++i) {
        Vec realized(2 * k);
        Vec grid(k);
        for (Eigen::Index c = 0; c < k; ++c) {
            long long j = std::llround((target.point(i)(c) - g.lo(c)) / g.step);
            j = std::clamp<long long>(j, 0, s);
            g.indices[static_cast<std::size_t>(c)][i] = j;
            grid(c) = g.lo(c) + static_cast<double>(j) * g.step;
            const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / p;
            realized(2 * c) = g.radius * std::cos(a);
            realized(2 * c + 1) = g.radius * std::sin(a);
        }
        g.realized.push_back(std::move(realized));
        g.grid_points.push_back(std::move(grid));
    }
    return g;
}

GroupWitness grid_witness(const GridLayout& g, int p, const std::vector<std::string>& labels) {
    std::vector<ProductSelection> same;
    for (const auto& l : labels) same.push_back({l, l, l});
    GroupWitness acc = pgon_witness(p, g.radius, g.indices.front(), labels);
    for (std::size_t c = 1; c < g.indices.size(); ++c) {
        acc = product_witness(acc, pgon_witness(p, g.radius, g.indices[c], labels), same);
    }
    return acc;
}

double max_distance_error(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            worst = std::max(worst, std::abs((a[i] - a[j]).norm() - (b[i] - b[j]).norm()));
        }
    }
    return worst;
}

bool all_coincide(const PointConfiguration& target) {
    for (std::size_t i = 1; i < target.size(); ++i) {
        if (target.point(i) != target.point(0)) return false;
    }
    return true;
}

}  // namespace

GroupWitness two_point_orbit(int p, double t, TwoPointModel model) {
    if (p < 2) throw Error(ErrorKind::InvalidInput, "two_point_orbit needs p >= 2");
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidInput, "two_point_orbit needs t > 0");
    const std::vector<std::string> labels{"0", "1"};
    if (p == 2) {
        // Antipodal pair about the origin so that the negation fixes the center.
        Vec base(1), far(1);
        base << -t / 2.0;
        far << t / 2.0;
        return GroupWitness{.p = 2,
                            .generators = {Mat::Constant(1, 1, -1.0)},
                            .center = Vec::Zero(1),
                            .base = base,
                            .words = {{0}, {1}},
                            .claimed = PointConfiguration({base, far}, labels)};
    }
    if (model == TwoPointModel::Polygon) {
        return pgon_witness(p, t / (2.0 * std::sin(std::numbers::pi / p)), {0, 1}, labels);
    }
    const double a = t / std::numbers::sqrt2;
    Mat shift = Mat::Zero(p, p);
    for (int i = 0; i < p; ++i) shift((i + 1) % p, i) = 1.0;
    Vec v0 = Vec::Zero(p);
    Vec v1 = Vec::Zero(p);
    v0(0) = a;
    v1(1) = a;
    return GroupWitness{.p = p,
                        .generators = {shift},
                        .center = Vec::Constant(p, a / p),
                        .base = v0,
                        .words = {{0}, {1}},
                        .claimed = PointConfiguration({v0, v1}, labels)};
}

GroupWitness product_witness(const GroupWitness& a, const GroupWitness& b,
                             const std::optional<std::vector<ProductSelection>>& selection) {
    if (a.p != b.p) throw Error(ErrorKind::InvalidInput, "product_witness: primes differ");
    const Eigen::Index na = a.dim();
    const Eigen::Index nb = b.dim();
    std::vector<Mat> gens;
    gens.reserve(a.rank() + b.rank());
    for (const auto& g : a.generators) gens.push_back(block_diagonal(g, Mat::Identity(nb, nb)));
    for (const auto& h : b.generators) gens.push_back(block_diagonal(Mat::Identity(na, na), h));

    std::vector<ProductSelection> picks;
    if (selection) {
        picks = *selection;
    } else {
        for (const auto& la : a.claimed.labels()) {
            for (const auto& lb : b.claimed.labels()) picks.push_back({la, lb, "(" + la + "," + lb + ")"});
        }
    }
    std::vector<Vec> pts;
    std::vector<std::string> labels;
    std::vector<Word> words;
    for (const auto& s : picks) {
        pts.push_back(concat(a.claimed.point(s.left), b.claimed.point(s.right)));
        Word w = a.word(s.left);
        const Word& wb = b.word(s.right);
        w.insert(w.end(), wb.begin(), wb.end());
        words.push_back(std::move(w));
        labels.push_back(s.label);
    }
    return GroupWitness{.p = a.p,
                        .generators = std::move(gens),
                        .center = concat(a.center, b.center),
                        .base = concat(a.base, b.base),
                        .words = std::move(words),
                        .claimed = PointConfiguration(std::move(pts), std::move(labels))};
}

ArcPointSet consecutive_arc_points(int p, int m, double step_length) {
    if (p < 2) throw Error(ErrorKind::InvalidInput, "consecutive_arc_points needs p >= 2");
    if (m < 2 || m > p) throw Error(ErrorKind::InvalidInput, "consecutive_arc_points needs 2 <= m <= p");
    if (!(step_length > 0.0)) throw Error(ErrorKind::InvalidInput, "step length must be positive");
    const double radius = step_length / (2.0 * std::sin(std::numbers::pi / p));
    std::vector<long long> indices;
    std::vector<Vec> pts;
    for (int i = 0; i < m; ++i) {
        indices.push_back(i);
        const double a = 2.0 * std::numbers::pi * i / p;
        Vec v(2);
        v << radius * std::cos(a), radius * std::sin(a);
        pts.push_back(std::move(v));
    }
    double dev = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            dev = std::max(dev, std::abs((pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).norm() -
                                         (j - i) * step_length));
        }
    }
    return ArcPointSet{.p = p,
                       .indices = std::move(indices),
                       .radius = radius,
                       .scale = step_length,
                       .points = PointConfiguration::with_index_labels(std::move(pts)),
                       .deviation = dev};
}

std::optional<GridApproximation> grid_at_resolution(const PointConfiguration& target, int p,
                                                    int resolution) {
    if (all_coincide(target)) {
        const GroupWitness w = trivial_witness(p, target.point(0), target.labels());
        return GridApproximation{.resolution = 0,
                                 .grid_points = target,
                                 .realized = w.claimed,
                                 .witness = w,
                                 .max_grid_offset = 0.0,
                                 .max_distance_error = 0.0};
    }
    const auto layout = layout_grid(target, p, resolution);
    if (!layout) return std::nullopt;
    GroupWitness w = grid_witness(*layout, p, target.labels());
    double offset = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        offset = std::max(offset, (layout->grid_points[i] - target.point(i)).norm());
    }
    const double derr = max_distance_error(layout->realized, target.points());
    PointConfiguration realized = w.claimed;
    return GridApproximation{.resolution = resolution,
                             .grid_points = PointConfiguration(layout->grid_points, target.labels()),
                             .realized = std::move(realized),
                             .witness = std::move(w),
                             .max_grid_offset = offset,
                             .max_distance_error = derr};
}

std::optional<GridApproximation> try_grid_approximation(const PointConfiguration& target, double delta,
                                                        int p) {
    if (!(delta > 0.0)) throw Error(ErrorKind::InvalidInput, "grid_approximation needs delta > 0");
    if (all_coincide(target)) return grid_at_resolution(target, p, 1);
    Vec lo;
    const double len = extent(target, lo);
    const double needed = 2.0 * len * std::sqrt(static_cast<double>(target.dim())) / delta;
    const int s_max = static_cast<int>(std::min(std::ceil(needed), 1e9));
    // Coarse resolutions first: points already on a coarse grid need no
    // curvature budget at all.
    for (int s = 1;; s = std::min(2 * s, s_max)) {
        if (s + 1 > p) return std::nullopt;
        const auto layout = layout_grid(target, p, s);
        double offset = 0.0;
        for (std::size_t i = 0; i < target.size(); ++i) {
            offset = std::max(offset, (layout->grid_points[i] - target.point(i)).norm());
        }
        if (offset <= delta && max_distance_error(layout->realized, target.points()) <= delta) {
            return grid_at_resolution(target, p, s);
        }
        if (s >= s_max) return std::nullopt;
    }
}

GridApproximation grid_approximation(const PointConfiguration& target, double delta, int p) {
    auto g = try_grid_approximation(target, delta, p);
    if (!g) {
        throw Error(ErrorKind::Infeasible,
                    "grid_approximation: p = " + std::to_string(p) + " is too small for the requested delta");
    }
    return std::move(*g);
}

bool Cut::separates(int i, int j) const {
    const bool in_i = std::binary_search(members.begin(), members.end(), i);
    const bool in_j = std::binary_search(members.begin(), members.end(), j);
    return in_i != in_j;
}

Mat CutDecomposition::reconstruct() const {
    Mat d = Mat::Zero(size, size);
    for (const auto& cut : cuts) {
        for (int i = 0; i < size; ++i) {
            for (int j = i + 1; j < size; ++j) {
                if (cut.separates(i, j)) {
                    d(i, j) += cut.weight;
                    d(j, i) += cut.weight;
                }
            }
        }
    }
    return d;
}

std::optional<CutDecomposition> try_brick_embed(const SquaredDistanceMatrix& target) {
    const int m = static_cast<int>(target.size());
    if (m > kMaxBrickPoints) {
        throw Error(ErrorKind::InvalidInput, "brick_embed supports at most 8 points");
    }
    CutDecomposition out{.size = m, .cuts = {}};
    if (m == 1) return out;

    const int ncuts = (1 << (m - 1)) - 1;
    const int npairs = m * (m - 1) / 2;
    Mat a = Mat::Zero(npairs, ncuts);
    Vec b(npairs);
    Vec cost(ncuts);
    for (int mask = 1; mask <= ncuts; ++mask) {
        const int size = __builtin_popcount(static_cast<unsigned>(mask));
        cost(mask - 1) = std::min(size, m - size);
    }
    int row = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j, ++row) {
            b(row) = target(i, j);
            for (int mask = 1; mask <= ncuts; ++mask) {
                const bool in_i = i < m - 1 && ((mask >> i) & 1);
                const bool in_j = j < m - 1 && ((mask >> j) & 1);
                if (in_i != in_j) a(row, mask - 1) = 1.0;
            }
        }
    }
    const lp::Result res = lp::solve(a, b, cost);
    if (res.status != lp::Status::Optimal) return std::nullopt;
    for (int mask = 1; mask <= ncuts; ++mask) {
        const double w = res.x(mask - 1);
        if (w < 1e-12) continue;
        Cut cut;
        for (int i = 0; i < m - 1; ++i) {
            if ((mask >> i) & 1) cut.members.push_back(i);
        }
        cut.weight = w;
        out.cuts.push_back(std::move(cut));
    }
    if (max_abs(out.reconstruct() - target.matrix()) > 1e-9) return std::nullopt;
    return out;
}

CutDecomposition brick_embed(const SquaredDistanceMatrix& target) {
    auto c = try_brick_embed(target);
    if (!c) throw Error(ErrorKind::Infeasible, "brick_embed: matrix is outside the cut cone");
    return std::move(*c);
}

GroupWitness brick_witness(const CutDecomposition& cuts, int p, const std::vector<std::string>& labels,
                           TwoPointModel model) {
    if (static_cast<int>(labels.size()) != cuts.size) {
        throw Error(ErrorKind::DimensionMismatch, "brick_witness: one label per point is required");
    }
    if (cuts.cuts.empty()) return trivial_witness(p, Vec::Zero(1), labels);

    auto vertex = [](const Cut& c, int i) {
        return std::binary_search(c.members.begin(), c.members.end(), i) ? std::string("1") : std::string("0");
    };
    const Cut& first = cuts.cuts.front();
    std::vector<std::pair<std::string, std::string>> picks;
    for (int i = 0; i < cuts.size; ++i) picks.emplace_back(vertex(first, i), labels[static_cast<std::size_t>(i)]);
    GroupWitness acc = relabel_select(two_point_orbit(p, std::sqrt(first.weight), model), picks);
    for (std::size_t c = 1; c < cuts.cuts.size(); ++c) {
        const Cut& cut = cuts.cuts[c];
        std::vector<ProductSelection> sel;
        for (int i = 0; i < cuts.size; ++i) {
            const auto& l = labels[static_cast<std::size_t>(i)];
            sel.push_back({l, vertex(cut, i), l});
        }
        acc = product_witness(acc, two_point_orbit(p, std::sqrt(cut.weight), model), sel);
    }
    return acc;
}

double consecutive_pgon_angle(int p) {
    if (p < 3) throw Error(ErrorKind::InvalidInput, "three consecutive vertices need p >= 3");
    const PointConfiguration poly = regular_pgon(p);
    const Vec u = poly.point(1) - poly.point(0);
    const Vec w = poly.point(static_cast<std::size_t>(p - 1)) - poly.point(0);
    const double cross = u(0) * w(1) - u(1) * w(0);
    return std::atan2(std::abs(cross), u.dot(w));
}

IsoscelesEmbedding isosceles_with_apex_angle(double alpha, int p) {
    if (!(alpha > 0.0 && alpha < std::numbers::pi)) {
        throw Error(ErrorKind::InvalidInput, "apex angle must lie in (0, pi)");
    }
    const double widest = consecutive_pgon_angle(p);
    if (alpha > widest + 1e-12) {
        throw Error(ErrorKind::Infeasible, "apex angle exceeds the consecutive-vertex angle for p = " +
                                               std::to_string(p) + "; raise p");
    }
    GroupWitness tri = pgon_witness(p, 1.0, {0, 1, p - 1}, {"A", "B", "C"});
    const Vec ab = tri.claimed.point("B") - tri.claimed.point("A");
    const Vec ac = tri.claimed.point("C") - tri.claimed.point("A");
    const double c = std::cos(alpha);
    const double t_sq = std::max(0.0, (ab.squaredNorm() * c - ab.dot(ac)) / (1.0 - c));
    // At alpha = consecutive angle t^2 is rounding noise; snap it to zero.
    const double t = t_sq <= 1e-14 ? 0.0 : std::sqrt(t_sq);

    GroupWitness w = t > 1e-12
                         ? product_witness(tri, two_point_orbit(p, t, TwoPointModel::Polygon),
                                           std::vector<ProductSelection>{{"A", "1", "A"}, {"B", "0", "B"}, {"C", "0", "C"}})
                         : tri;
    const Vec u = w.claimed.point("B") - w.claimed.point("A");
    const Vec v = w.claimed.point("C") - w.claimed.point("A");
    const double angle = std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
    return IsoscelesEmbedding{.witness = std::move(w),
                              .t = t > 1e-12 ? t : 0.0,
                              .apex_angle = angle,
                              .consecutive_angle = widest};
}

namespace {

std::optional<SimplexEmbedding> embed_at_prime(const PointConfiguration& target, const SquaredDistanceMatrix& d,
                                               double eta, const std::optional<PointConfiguration>& shifted, int p,
                                               double tol, int& attempts) {
    const auto& labels = target.labels();
    std::vector<ProductSelection> same;
    for (const auto& l : labels) same.push_back({l, l, l});

    auto finish = [&](const CutDecomposition& cuts, const std::optional<GridLayout>& grid)
        -> std::optional<SimplexEmbedding> {
        GroupWitness brick = brick_witness(cuts, p, labels);
        GroupWitness w = grid ? product_witness(brick, grid_witness(*grid, p, labels), same) : brick;
        const double err = distance_error_against(w, target);
        if (err > tol) return std::nullopt;
        return SimplexEmbedding{.witness = std::move(w),
                                .p = p,
                                .eta = eta,
                                .resolution = grid ? grid->resolution : 0,
                                .cuts = cuts,
                                .distance_error = err,
                                .attempts = attempts};
    };

    if (!shifted) {
        ++attempts;
        const auto cuts = try_brick_embed(d);
        if (!cuts) return std::nullopt;
        return finish(*cuts, std::nullopt);
    }

    std::vector<int> ladder;
    for (long long s = 1; s + 1 <= p; s *= 2) ladder.push_back(static_cast<int>(s));
    if (p - 1 >= 1 && (ladder.empty() || ladder.back() != p - 1)) ladder.push_back(p - 1);

    const auto m = d.size();
    for (int s : ladder) {
        ++attempts;
        const auto grid = layout_grid(*shifted, p, s);
        if (!grid) continue;
        Mat rest = d.matrix();
        bool negative = false;
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = i + 1; j < m; ++j) {
                const double g = (grid->realized[static_cast<std::size_t>(i)] -
                                  grid->realized[static_cast<std::size_t>(j)]).squaredNorm();
                double r = d(i, j) - g;
                if (r < -1e-12) negative = true;
                r = std::max(r, 0.0);
                rest(i, j) = r;
                rest(j, i) = r;
            }
        }
        if (negative) continue;
        const auto cuts = try_brick_embed(SquaredDistanceMatrix(rest));
        if (!cuts) continue;
        if (auto done = finish(*cuts, grid)) return done;
    }
    return std::nullopt;
}

}  // namespace

std::optional<SimplexEmbedding> try_embed_simplex(const PointConfiguration& target, int p,
                                                  const EmbedOptions& opts) {
    if (p < 2 || !is_prime(p)) throw Error(ErrorKind::InvalidInput, "embed_simplex needs a prime p");
    const auto m = static_cast<Eigen::Index>(target.size());
    if (m > kMaxBrickPoints) throw Error(ErrorKind::InvalidInput, "embed_simplex supports at most 8 points");
    if (m == 1) {
        return SimplexEmbedding{.witness = trivial_witness(p, target.point(0), target.labels()),
                                .p = p,
                                .eta = 0.0,
                                .resolution = 0,
                                .cuts = CutDecomposition{.size = 1, .cuts = {}},
                                .distance_error = 0.0,
                                .attempts = 0};
    }
    const SquaredDistanceMatrix d = squared_distances(target);
    Eigen::SelfAdjointEigenSolver<Mat> eig(centered_gram(d), Eigen::EigenvaluesOnly);
    const double lambda = eig.eigenvalues()(1);
    if (lambda <= 1e-9) throw Error(ErrorKind::Degenerate, "embed_simplex: target is affinely dependent");

    const double eta = 2.0 * lambda;
    Mat shifted_d = d.matrix() - eta * (Mat::Ones(m, m) - Mat::Identity(m, m));
    shifted_d = shifted_d.cwiseMax(0.0);
    shifted_d.diagonal().setZero();
    std::optional<PointConfiguration> shifted;
    if (shifted_d.maxCoeff() > 1e-14 * (1.0 + d.matrix().maxCoeff())) {
        shifted.emplace(realize_distances(SquaredDistanceMatrix(shifted_d)), target.labels());
    }

    int attempts = 0;
    long long prime = p;
    while (true) {
        auto done = embed_at_prime(target, d, eta, shifted, static_cast<int>(prime), opts.tolerance, attempts);
        if (done) return done;
        if (!opts.allow_raise_p) return std::nullopt;
        prime = next_prime(2 * prime);
        if (prime > opts.p_max) return std::nullopt;
    }
}

SimplexEmbedding embed_simplex(const PointConfiguration& target, int p, const EmbedOptions& opts) {
    auto r = try_embed_simplex(target, p, opts);
    if (!r) {
        throw Error(ErrorKind::Infeasible,
                    "embed_simplex: brick stage infeasible at every grid resolution up to p = " +
                        std::to_string(opts.allow_raise_p ? opts.p_max : p));
    }
    return std::move(*r);
}

std::optional<SimplexEmbedding> min_prime_for(const PointConfiguration& target, int p_max) {
    EmbedOptions opts;
    opts.allow_raise_p = false;
    const int scan = std::min(p_max, kExhaustivePrimeScan);
    for (int p : primes_up_to(scan)) {
        if (auto r = try_embed_simplex(target, p, opts)) return r;
    }
    if (p_max <= scan) return std::nullopt;

    // Beyond the scan: bisect on x for the smallest x whose first prime >= x
    // succeeds, after bracketing by doubling.
    std::map<long long, std::optional<SimplexEmbedding>> memo;
    auto at = [&](long long x) -> const std::optional<SimplexEmbedding>& {
        const long long q = is_prime(x) ? x : next_prime(x);
        auto it = memo.find(q);
        if (it == memo.end()) {
            std::optional<SimplexEmbedding> r;
            if (q <= p_max) r = try_embed_simplex(target, static_cast<int>(q), opts);
            it = memo.emplace(q, std::move(r)).first;
        }
        return it->second;
    };
    long long lo = scan;  // at(lo + 1) is the first untried prime
    long long hi = scan;
    do {
        lo = hi;
        if (hi >= p_max) return std::nullopt;
        hi = std::min<long long>(2 * hi, p_max);
    } while (!at(hi));
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        if (at(mid)) hi = mid;
        else lo = mid;
    }
    return at(hi);
}

}  // namespace suborbit::euclid
