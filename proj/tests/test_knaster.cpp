#include <cmath>
#include <numeric>

#include "doctest.h"
#include "suborbit/error.hpp"
#include "suborbit/knaster.hpp"
#include "suborbit/random.hpp"
#include "suborbit/witness.hpp"

using namespace suborbit;
using namespace suborbit::knaster;

namespace {

PointConfiguration antipodal_pair() {
    return PointConfiguration({Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)}, {"0", "1"}, true);
}

GroupWitness antipodal_witness() {
    return GroupWitness{2, {-Mat::Identity(1, 1)}, Vec::Zero(1), Vec::Constant(1, -1.0), {{0}, {1}}, antipodal_pair()};
}

Mat random_matrix(int r, int c, Rng& rng) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
    }
    return m;
}

// Direct evaluation of sum_x |f(F x) - mean|^2.
double spread_oracle(const Mat& frame, const PointConfiguration& x, const TestMap& f) {
    std::vector<Vec> images;
    for (const auto& p : x.points()) images.push_back(f(frame * p));
    Vec mean = Vec::Zero(images.front().size());
    for (const auto& v : images) mean += v;
    mean /= static_cast<double>(images.size());
    double s = 0;
    for (const auto& v : images) s += (v - mean).squaredNorm();
    return s;
}

// Central differences of the objective itself, entry by entry.
Mat fd_gradient(const Mat& frame, const PointConfiguration& x, const TestMap& f) {
    Mat g(frame.rows(), frame.cols());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < frame.rows(); ++i) {
        for (Eigen::Index j = 0; j < frame.cols(); ++j) {
            Mat a = frame, b = frame;
            a(i, j) += h;
            b(i, j) -= h;
            g(i, j) = (spread_objective(a, x, f) - spread_objective(b, x, f)) / (2 * h);
        }
    }
    return g;
}

SearchOptions fast(int restarts = 16) {
    SearchOptions o;
    o.restarts = restarts;
    o.execution = Execution::Serial;
    return o;
}

}  // namespace

TEST_CASE("frames") {
    Rng rng(1);
    const auto f = Frame::random(6, 3, rng);
    CHECK(f.orthonormality_error() < 1e-14);
    CHECK(f.n() == 6);
    CHECK(f.k() == 3);
    CHECK_THROWS_AS(Frame(Mat::Ones(3, 2)), Error);
    const auto r = Frame::retract(random_matrix(5, 2, rng));
    CHECK(r.orthonormality_error() < 1e-14);
    CHECK_THROWS_AS(Frame::retract(Mat::Zero(4, 2)), Error);
}

TEST_CASE("test maps") {
    Rng rng(2);
    const Mat a = random_matrix(2, 3, rng);
    const auto lin = TestMap::linear(a);
    const Vec x = random_matrix(3, 1, rng);
    CHECK(max_abs(lin(x) - a * x) < 1e-15);
    CHECK(max_abs(lin.jacobian(x) - a) == 0.0);

    Mat q = random_matrix(3, 3, rng);
    const auto quad = TestMap::quadratic({q});
    CHECK(std::abs(quad(x)(0) - x.dot(q * x)) < 1e-12);
    CHECK(max_abs(quad.jacobian(x) - quad.jacobian_fd(x)) < 1e-8);

    const auto ex = TestMap::parse({"x1*x2 + sin(x3)", "x3^2"}, 3);
    CHECK(ex.output_dim() == 2);
    CHECK(ex.input_dim() == 3);
    CHECK(max_abs(ex.jacobian(x) - ex.jacobian_fd(x)) < 1e-8);
    CHECK(max_abs(ex.scaled(3.0)(x) - 3.0 * ex(x)) < 1e-12);
    CHECK_THROWS_AS(lin(Vec::Zero(2)), Error);
    CHECK_THROWS_AS(TestMap::quadratic({Mat::Zero(2, 3)}), Error);
}

TEST_CASE("spread objective") {
    Rng rng(3);
    const auto pair = antipodal_pair();
    const Mat frame = Mat::Identity(1, 1);
    CHECK(spread_objective(frame, pair, TestMap::linear(Mat::Constant(1, 1, 2.0))) == doctest::Approx(8.0));
    CHECK(spread_objective(frame, pair, TestMap::parse({"x1^2"}, 1)) == 0.0);
    CHECK(spread_objective(frame, pair, TestMap::parse({"5"}, 1)) == 0.0);

    const auto tri = pgon_witness(3, 1.0, {0, 1, 2}, {"a", "b", "c"}).claimed;
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = TestMap::random_quadratic(2, 5, rng);
        const Mat fr = Frame::random(5, 2, rng).matrix();
        CHECK(std::abs(spread_objective(fr, tri, f) - spread_oracle(fr, tri, f)) < 1e-12);
        // Scaling f by s scales Phi by s^2.
        CHECK(std::abs(spread_objective(fr, tri, f.scaled(10.0)) - 100 * spread_objective(fr, tri, f)) < 1e-9);
        // Relabeling (permuting) the points does not matter.
        const auto perm = tri.select({"c", "a", "b"});
        CHECK(std::abs(spread_objective(fr, perm, f) - spread_objective(fr, tri, f)) < 1e-12);
    }
    CHECK_THROWS_AS(spread_objective(Mat::Identity(3, 3), tri, TestMap::random_linear(1, 3, rng)), Error);
}

TEST_CASE("analytic gradient matches finite differences at 100 frames") {
    Rng rng(4);
    const auto tri = pgon_witness(5, 1.0, {0, 1, 3}, {"a", "b", "c"}).claimed;
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        TestMap f = trial % 3 == 0   ? TestMap::random_linear(2, 4, rng)
                    : trial % 3 == 1 ? TestMap::random_quadratic(2, 4, rng)
                                     : TestMap::parse({"x1*x2 + sin(x3)", "cos(x4)*x1"}, 4);
        const Mat fr = Frame::random(4, 2, rng).matrix();
        const auto g = spread_gradient(fr, tri, f);
        const Mat fd = fd_gradient(fr, tri, f);
        const double rel = max_abs(g.frame - fd) / std::max(1.0, max_abs(fd));
        worst = std::max(worst, rel);
        const auto gfd = spread_gradient(fr, tri, f, {}, GradientMethod::FiniteDifference);
        CHECK(max_abs(gfd.frame - g.frame) / std::max(1.0, max_abs(fd)) < 1e-5);
        CHECK(g.phi == doctest::Approx(spread_objective(fr, tri, f)));
    }
    CHECK(worst < 1e-5);

    // Offset gradient.
    const auto f = TestMap::random_quadratic(2, 4, rng);
    const Mat fr = Frame::random(4, 2, rng).matrix();
    const Vec off = random_matrix(4, 1, rng);
    const auto g = spread_gradient(fr, tri, f, off);
    for (int i = 0; i < 4; ++i) {
        Vec a = off, b = off;
        a(i) += 1e-6;
        b(i) -= 1e-6;
        const double fd = (spread_objective(fr, tri, f, a) - spread_objective(fr, tri, f, b)) / 2e-6;
        CHECK(std::abs(g.offset(i) - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("search on the antipodal pair") {
    Rng rng(5);
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = TestMap::random_linear(1, 2, rng);
        const auto r = search_constant_configuration(antipodal_pair(), antipodal_witness(), f, 2, fast());
        CHECK(r.success);
        CHECK(r.warnings.empty());
        CHECK(r.dimension_bound == 2.0);
        Frame check(r.frame);
        CHECK(check.orthonormality_error() < 1e-10);
        // The reported Phi is that of the returned frame.
        CHECK(std::abs(r.phi - spread_objective(r.frame, antipodal_pair(), f)) < 1e-14);
        worst = std::max(worst, r.phi);
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("search on the triangle orbit") {
    Rng rng(6);
    const auto w = pgon_witness(3, 1.0, {0, 1, 2}, {"a", "b", "c"});
    for (int trial = 0; trial < 5; ++trial) {
        const auto f = TestMap::random_quadratic(2, 6, rng);
        const auto r = search_constant_configuration(w.claimed, w, f, 6, fast());
        CHECK(r.success);
        CHECK(r.phi < 1e-8);
        REQUIRE(r.images.size() == 3);
        CHECK(max_abs(r.images[0] - r.images[2]) < 1e-4);
        CHECK(r.best_restart >= 0);
        CHECK(r.restarts >= 1);
    }
    const auto f = TestMap::parse({"x1"}, 3);
    const auto r = search_constant_configuration(w.claimed, w, f, 3, fast());
    CHECK(r.success);
}

TEST_CASE("below the dimension bound a warning is reported") {
    Rng rng(7);
    const auto w = pgon_witness(3, 1.0, {0, 1, 2}, {"a", "b", "c"});
    const auto f = TestMap::random_linear(2, 3, rng);
    const auto r = search_constant_configuration(w.claimed, w, f, 3, fast(4));
    CHECK(r.dimension_bound == 6.0);
    CHECK_FALSE(r.warnings.empty());
    // The probe reports the best Phi it found either way.
    CHECK(r.phi >= 0.0);
}

TEST_CASE("search input validation") {
    Rng rng(8);
    const auto w = pgon_witness(3, 1.0, {0, 1, 2}, {"a", "b", "c"});
    CHECK_THROWS_AS(search_constant_configuration(w.claimed, w, TestMap::random_linear(1, 4, rng), 3), Error);
    auto broken = w;
    broken.generators[0] *= 2.0;
    CHECK_THROWS_AS(search_constant_configuration(w.claimed, broken, TestMap::random_linear(1, 4, rng), 4), Error);
    const auto other = pgon_witness(5, 1.0, {0, 1, 2}, {"a", "b", "c"});
    CHECK_THROWS_AS(search_constant_configuration(w.claimed, other, TestMap::random_linear(1, 4, rng), 4), Error);
}

TEST_CASE("same seed, same report") {
    Rng rng(9);
    const auto w = pgon_witness(5, 1.0, {0, 1, 3}, {"a", "b", "c"});
    const auto f = TestMap::random_quadratic(1, 4, rng);
    const auto a = search_constant_configuration(w.claimed, w, f, 4, fast());
    const auto b = search_constant_configuration(w.claimed, w, f, 4, fast());
    CHECK(a.phi == b.phi);
    CHECK(a.best_restart == b.best_restart);
    CHECK(max_abs(a.frame - b.frame) == 0.0);
}

TEST_CASE("euclidean search") {
    Vec a(2), b(2), c(2);
    a << 0, 0;
    b << 1, 0;
    c << 0.3, 0.8;
    const PointConfiguration x({a, b, c}, {"A", "B", "C"});
    const auto setup = euclidean_setup(x, 5, 1);
    CHECK(setup.p == 5);
    CHECK(setup.n == 2 + setup.k);
    CHECK(setup.radius > 0);
    for (const auto& pt : setup.centered.points()) {
        CHECK(pt.size() == setup.k);
        CHECK(std::abs(pt.norm() - setup.radius) < 1e-9);
    }
    // Distances survive the reduction to the span.
    const auto& cp = setup.centered;
    CHECK(std::abs((cp.point("A") - cp.point("B")).squaredNorm() - 1.0) < 1e-7);
    CHECK(std::abs((cp.point("A") - cp.point("C")).squaredNorm() - 0.73) < 1e-7);

    Rng rng(10);
    const auto f = TestMap::random_linear(1, setup.n, rng);
    const auto r = euclidean_search(setup, f, fast());
    CHECK(r.success);
    CHECK(r.phi < 1e-8);
    CHECK_THROWS_AS(euclidean_search(setup, TestMap::random_linear(1, setup.k - 1, rng), fast()), Error);
}
