#include "suborbit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "suborbit/error.hpp"

namespace suborbit {

namespace {

long long reduce_mod(long long e, int p) {
    long long r = e % p;
    return r < 0 ? r + p : r;
}

void check_shapes(const GroupWitness& w) {
    const Eigen::Index n = w.base.size();
    if (w.p < 2) throw Error(ErrorKind::InvalidInput, "witness prime must be >= 2");
    if (w.center.size() != n) throw Error(ErrorKind::DimensionMismatch, "center and base dimensions differ");
    for (const auto& g : w.generators) {
        if (g.rows() != n || g.cols() != n) {
            throw Error(ErrorKind::DimensionMismatch, "generator size differs from base dimension");
        }
    }
    if (w.claimed.dim() != n) {
        throw Error(ErrorKind::DimensionMismatch, "claimed points differ in dimension from the action");
    }
    if (w.words.size() != w.claimed.size()) {
        throw Error(ErrorKind::DimensionMismatch, "one word per claimed point is required");
    }
    for (const auto& word : w.words) {
        if (word.size() != w.generators.size()) {
            throw Error(ErrorKind::DimensionMismatch, "word length differs from generator count");
        }
    }
}

}  // namespace

Mat GroupWitness::element(const Word& w) const {
    if (w.size() != generators.size()) {
        throw Error(ErrorKind::DimensionMismatch, "word length differs from generator count");
    }
    Mat g = Mat::Identity(dim(), dim());
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const long long e = reduce_mod(w[i], p);
        if (e != 0) g = matrix_power(generators[i], e) * g;
    }
    return g;
}

Vec GroupWitness::apply(const Word& w) const {
    return center + element(w) * (base - center);
}

const Word& GroupWitness::word(const std::string& label) const {
    const auto i = claimed.index_of(label);
    if (!i) throw Error(ErrorKind::InvalidInput, "witness has no label " + label);
    return words.at(*i);
}

PointConfiguration GroupWitness::realize() const {
    check_shapes(*this);
    std::vector<Vec> pts;
    pts.reserve(words.size());
    for (const auto& w : words) pts.push_back(apply(w));
    return PointConfiguration(std::move(pts), claimed.labels());
}

VerificationReport verify_witness(const GroupWitness& w, double tol) {
    check_shapes(w);
    const Eigen::Index n = w.dim();
    const Mat eye = Mat::Identity(n, n);
    VerificationReport report;

    double axiom = 0.0;
    for (std::size_t i = 0; i < w.generators.size(); ++i) {
        const Mat& g = w.generators[i];
        axiom = std::max(axiom, max_abs(g.transpose() * g - eye));
        axiom = std::max(axiom, max_abs(matrix_power(g, w.p) - eye));
        axiom = std::max(axiom, (g * w.center - w.center).cwiseAbs().maxCoeff());
        for (std::size_t j = i + 1; j < w.generators.size(); ++j) {
            const Mat& h = w.generators[j];
            axiom = std::max(axiom, max_abs(g * h - h * g));
        }
    }
    report.group_axiom_error = axiom;

    const PointConfiguration realized = w.realize();
    for (std::size_t i = 0; i < realized.size(); ++i) {
        report.max_point_error =
            std::max(report.max_point_error, (realized.point(i) - w.claimed.point(i)).norm());
    }
    const Mat dr = squared_distances(realized).matrix();
    const Mat dc = squared_distances(w.claimed).matrix();
    report.max_distance_error = max_abs(dr - dc);

    report.pass = report.group_axiom_error < tol && report.max_point_error < tol &&
                  report.max_distance_error < tol;
    return report;
}

double distance_error_against(const GroupWitness& w, const PointConfiguration& target) {
    const PointConfiguration realized = w.realize();
    double worst = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        for (std::size_t j = i + 1; j < target.size(); ++j) {
            const double want = (target.point(i) - target.point(j)).squaredNorm();
            const double got =
                (realized.point(target.label(i)) - realized.point(target.label(j))).squaredNorm();
            worst = std::max(worst, std::abs(got - want));
        }
    }
    return worst;
}

GroupWitness pgon_witness(int p, double radius, const std::vector<long long>& vertices,
                          const std::vector<std::string>& labels) {
    if (vertices.size() != labels.size()) {
        throw Error(ErrorKind::DimensionMismatch, "one label per vertex is required");
    }
    Vec base = Vec::Zero(2);
    base(0) = radius;
    std::vector<Word> words;
    std::vector<Vec> pts;
    for (long long v : vertices) {
        const long long r = reduce_mod(v, p);
        words.push_back({r});
        const double a = 2.0 * std::numbers::pi * static_cast<double>(r) / p;
        Vec x(2);
        x << radius * std::cos(a), radius * std::sin(a);
        pts.push_back(std::move(x));
    }
    return GroupWitness{.p = p,
                        .generators = {rotation2d(2.0 * std::numbers::pi / p)},
                        .center = Vec::Zero(2),
                        .base = std::move(base),
                        .words = std::move(words),
                        .claimed = PointConfiguration(std::move(pts), labels)};
}

Mat block_diagonal(const Mat& a, const Mat& b) {
    Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

}  // namespace suborbit
