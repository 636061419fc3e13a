#include <cmath>
#include <numbers>

#include "doctest.h"
#include "suborbit/error.hpp"
#include "suborbit/geometry.hpp"
#include "suborbit/linalg.hpp"
#include "suborbit/primes.hpp"
#include "suborbit/random.hpp"

using namespace suborbit;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

// Trial-division reference for the prime helpers.
bool slow_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("point configuration validates its input") {
    CHECK_THROWS_AS(PointConfiguration({}, {}), Error);
    CHECK_THROWS_AS(PointConfiguration({v2(0, 0), Vec::Zero(3)}, {"a", "b"}), Error);
    CHECK_THROWS_AS(PointConfiguration({v2(0, 0), v2(1, 0)}, {"a", "a"}), Error);
    CHECK_THROWS_AS(PointConfiguration({v2(0, NAN)}, {"a"}), Error);
    CHECK_THROWS_AS(PointConfiguration({v2(0.5, 0)}, {"a"}, true), Error);
    CHECK_NOTHROW(PointConfiguration({v2(0.6, 0.8)}, {"a"}, true));

    const PointConfiguration c({v2(0, 0), v2(3, 4)}, {"p", "q"});
    CHECK(c.size() == 2);
    CHECK(c.dim() == 2);
    CHECK(c.point("q")(1) == 4.0);
    CHECK(*c.index_of("q") == 1);
    CHECK_FALSE(c.index_of("r").has_value());
    CHECK_THROWS_AS(c.point("r"), Error);
    CHECK(c.select({"q", "p"}).label(0) == "q");
}

TEST_CASE("squared distance matrix checks shape and signs") {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    CHECK_NOTHROW(SquaredDistanceMatrix{m});
    m(0, 1) = 2;
    CHECK_THROWS_AS(SquaredDistanceMatrix{m}, Error);
    m << 0, -1, -1, 0;
    CHECK_THROWS_AS(SquaredDistanceMatrix{m}, Error);
    m << 1, 1, 1, 0;
    CHECK_THROWS_AS(SquaredDistanceMatrix{m}, Error);

    const auto t = SquaredDistanceMatrix::from_triangle(1, 2, 3);
    CHECK(t(0, 1) == 1);
    CHECK(t(0, 2) == 2);
    CHECK(t(1, 2) == 3);
}

TEST_CASE("squared distances match a direct sum of squares") {
    Rng rng(3);
    std::vector<Vec> pts;
    for (int i = 0; i < 6; ++i) {
        Vec v(4);
        for (int j = 0; j < 4; ++j) v(j) = rng.normal();
        pts.push_back(v);
    }
    const auto d = squared_distances(PointConfiguration::with_index_labels(pts));
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            double s = 0;
            for (int c = 0; c < 4; ++c) s += (pts[i](c) - pts[j](c)) * (pts[i](c) - pts[j](c));
            CHECK(d(i, j) == doctest::Approx(s).epsilon(1e-14));
        }
    }
}

TEST_CASE("unit Gram matrix decides spherical realizability") {
    // Equilateral of circumradius 1 (sides^2 = 3): realizable, rank 2.
    auto g = gram_of_unit_config(SquaredDistanceMatrix::from_triangle(3, 3, 3));
    CHECK(g.psd);
    CHECK(g.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
    // (4,3,3) has circumradius^2 = 9/8 > 1: not on the unit sphere.
    g = gram_of_unit_config(SquaredDistanceMatrix::from_triangle(4, 3, 3));
    CHECK_FALSE(g.psd);
    CHECK(g.gram.determinant() == doctest::Approx(-1.0));
}

TEST_CASE("classical scaling reproduces Euclidean distances") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + trial % 5;
        std::vector<Vec> pts;
        for (int i = 0; i < m; ++i) {
            Vec v(m + 1);
            for (int j = 0; j <= m; ++j) v(j) = rng.uniform(-1, 1);
            pts.push_back(v);
        }
        const auto d = squared_distances(PointConfiguration::with_index_labels(pts));
        const auto r = realize_distances(d);
        REQUIRE(r.size() == static_cast<std::size_t>(m));
        CHECK(r.front().size() == m - 1);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) CHECK(std::abs((r[i] - r[j]).squaredNorm() - d(i, j)) < 1e-10);
        }
    }
}

TEST_CASE("direct sum adds weighted squared distances") {
    const PointConfiguration a({v2(1, 0), v2(0, 1)}, {"x", "y"}, true);
    const PointConfiguration b({v2(0, -1), v2(-1, 0)}, {"y", "x"}, true);
    const double wa = std::sqrt(0.3), wb = std::sqrt(0.7);
    const auto s = direct_sum({{a, wa}, {b, wb}}, true);
    CHECK(s.dim() == 4);
    CHECK(s.label(0) == "x");
    const double expected = 0.3 * 2.0 + 0.7 * 2.0;
    CHECK((s.point("x") - s.point("y")).squaredNorm() == doctest::Approx(expected));
    CHECK_THROWS_AS(direct_sum({{a, 1.0}, {b, 1.0}}, true), Error);
}

TEST_CASE("p-gon chords follow 4 sin^2(pi s / p)") {
    for (int p : {3, 5, 12, 101}) {
        const auto poly = regular_pgon(p);
        for (long long s = 0; s <= p; ++s) {
            const double coords = (poly.point(0) - poly.point(static_cast<std::size_t>(s % p))).squaredNorm();
            CHECK(pgon_chord_sq(p, s) == doctest::Approx(coords).epsilon(1e-12));
        }
    }
    CHECK(pgon_chord_sq(4, 1) == doctest::Approx(2.0));
    CHECK(pgon_chord_sq(6, 3) == doctest::Approx(4.0));
}

TEST_CASE("rotations, orthonormalization and powers") {
    const auto r = rotation2d(std::numbers::pi / 2);
    CHECK((r * Eigen::Vector2d(1, 0) - Eigen::Vector2d(0, 1)).norm() < 1e-15);

    Rng rng(5);
    Mat m(6, 3);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = rng.normal();
    }
    const Mat q = orthonormalize_columns(m);
    CHECK(max_abs(q.transpose() * q - Mat::Identity(3, 3)) < 1e-14);
    // Same column span: the projection onto span(q) fixes m.
    CHECK(max_abs(q * (q.transpose() * m) - m) < 1e-12);
    // diag(R) > 0 means the first column keeps its direction.
    CHECK(q.col(0).dot(m.col(0)) > 0);

    Mat a(3, 3);
    a << 0.3, 1, 0, -1, 0.2, 0.5, 0.1, 0, 0.9;
    Mat slow = Mat::Identity(3, 3);
    for (int k = 0; k < 13; ++k) slow = slow * a;
    CHECK(max_abs(matrix_power(a, 13) - slow) < 1e-10);
    CHECK(max_abs(matrix_power(a, 0) - Mat::Identity(3, 3)) == 0.0);
}

TEST_CASE("prime helpers agree with trial division") {
    for (long long n = -3; n < 2000; ++n) CHECK(is_prime(n) == slow_prime(n));
    CHECK(next_prime(2) == 3);
    CHECK(next_prime(13) == 17);
    CHECK(next_prime(1'000'000) == 1'000'003);
    const auto ps = primes_up_to(50);
    CHECK(ps.size() == 15);
    CHECK(ps.back() == 47);
}

TEST_CASE("rng is reproducible and split streams differ") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    Rng s0 = Rng::split(42, 0), s1 = Rng::split(42, 1);
    CHECK(s0.uniform() != s1.uniform());
    // Moments of the normal draw.
    Rng r(7);
    double m1 = 0, m2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        m1 += x;
        m2 += x * x;
    }
    CHECK(std::abs(m1 / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(m2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}
