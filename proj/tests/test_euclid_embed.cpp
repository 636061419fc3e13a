#include <cmath>
#include <numbers>

#include "doctest.h"
#include "suborbit/error.hpp"
#include "suborbit/euclid_embed.hpp"
#include "suborbit/primes.hpp"
#include "suborbit/random.hpp"

using namespace suborbit;
using namespace suborbit::euclid;

namespace {

Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

double dist2(const PointConfiguration& c, const std::string& a, const std::string& b) {
    return (c.point(a) - c.point(b)).squaredNorm();
}

// Chord between p-gon vertices i and j when the side is `step`.
double chord(int p, int i, int j, double step) {
    return step * std::sin(std::numbers::pi * std::abs(i - j) / p) / std::sin(std::numbers::pi / p);
}

PointConfiguration random_simplex(int m, Rng& rng) {
    std::vector<Vec> pts;
    for (int i = 0; i < m; ++i) {
        Vec v(m);
        for (int j = 0; j < m; ++j) v(j) = rng.uniform(-1, 1);
        pts.push_back(v);
    }
    return PointConfiguration::with_index_labels(pts);
}

}  // namespace

TEST_CASE("two-point orbits") {
    const auto w2 = two_point_orbit(2, 1.0);
    CHECK(verify_witness(w2, 1e-12).pass);
    CHECK(w2.dim() == 1);
    CHECK(w2.center(0) == 0.0);
    CHECK(w2.claimed.point("0")(0) == doctest::Approx(-0.5));
    CHECK(dist2(w2.realize(), "0", "1") == doctest::Approx(1.0));

    const auto w3 = two_point_orbit(3, 1.0);
    CHECK(verify_witness(w3, 1e-12).pass);
    // The third orbit point completes an equilateral triangle.
    const Vec third = w3.apply({2});
    CHECK((third - w3.apply({0})).norm() == doctest::Approx(1.0));
    CHECK((third - w3.apply({1})).norm() == doctest::Approx(1.0));

    const auto w5 = two_point_orbit(5, 2.0);
    CHECK(verify_witness(w5, 1e-10).pass);
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) CHECK((w5.apply({i}) - w5.apply({j})).norm() == doctest::Approx(2.0));
    }

    const auto poly = two_point_orbit(7, 0.3, TwoPointModel::Polygon);
    CHECK(poly.dim() == 2);
    CHECK(dist2(poly.realize(), "0", "1") == doctest::Approx(0.09));
    CHECK_THROWS_AS(two_point_orbit(3, 0.0), Error);
}

TEST_CASE("products of witnesses") {
    const auto pair = two_point_orbit(2, 1.0);
    const auto square = product_witness(pair, pair);
    CHECK(verify_witness(square, 1e-12).pass);
    CHECK(square.claimed.size() == 4);
    CHECK(dist2(square.claimed, "(0,0)", "(1,1)") == doctest::Approx(2.0));
    CHECK(dist2(square.claimed, "(0,0)", "(0,1)") == doctest::Approx(1.0));

    // Label algebra: squared distances add exactly over factors.
    const auto rect = product_witness(two_point_orbit(3, 1.0), two_point_orbit(3, 2.0));
    CHECK(verify_witness(rect, 1e-10).pass);
    CHECK(rect.rank() == 2);
    CHECK(dist2(rect.claimed, "(0,0)", "(1,1)") == doctest::Approx(5.0));
    CHECK(dist2(rect.claimed, "(1,0)", "(1,1)") == doctest::Approx(4.0));

    const auto single = pgon_witness(3, 1.0, {0}, {"s"});
    const auto tri = pgon_witness(3, 1.0, {0, 1, 2}, {"a", "b", "c"});
    const auto lifted = product_witness(tri, single);
    CHECK(lifted.dim() == 4);
    CHECK(dist2(lifted.claimed, "(a,s)", "(b,s)") == doctest::Approx(3.0));

    CHECK_THROWS_AS(product_witness(two_point_orbit(2, 1.0), two_point_orbit(3, 1.0)), Error);
}

TEST_CASE("consecutive arc points") {
    const auto two = consecutive_arc_points(17, 2, 0.7);
    CHECK((two.points.point(0) - two.points.point(1)).norm() == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(two.deviation < 1e-14);

    const auto twelve = consecutive_arc_points(12, 3, 1.0);
    CHECK((twelve.points.point(0) - twelve.points.point(2)).norm() == doctest::Approx(chord(12, 0, 2, 1.0)));
    CHECK(chord(12, 0, 2, 1.0) == doctest::Approx(1.93185).epsilon(1e-5));

    // sin(4 pi / 1000) / sin(pi / 1000) = 3.99990..., so the deviation from 4 is ~9.9e-5.
    const auto fine = consecutive_arc_points(1000, 5, 1.0);
    const double d15 = (fine.points.point(0) - fine.points.point(4)).norm();
    CHECK(d15 == doctest::Approx(chord(1000, 0, 4, 1.0)).epsilon(1e-12));
    CHECK(fine.deviation == doctest::Approx(4.0 - d15).epsilon(1e-9));
    CHECK(fine.deviation < 1e-4);

    CHECK_THROWS_AS(consecutive_arc_points(5, 6, 1.0), Error);
}

TEST_CASE("arc deviation decreases with p") {
    double previous = INFINITY;
    for (int p : {7, 11, 23, 47, 101, 211, 1009}) {
        const double dev = consecutive_arc_points(p, 6, 1.0).deviation;
        CHECK(dev < previous);
        previous = dev;
    }
}

TEST_CASE("grid approximation") {
    const PointConfiguration square({vec({0, 0}), vec({1, 0}), vec({0, 1}), vec({1, 1})}, {"a", "b", "c", "d"});
    const auto g = grid_approximation(square, 0.1, 101);
    CHECK(g.max_grid_offset <= 0.1);
    CHECK(g.max_distance_error <= 0.1);
    CHECK(verify_witness(g.witness, 1e-9).pass);
    for (const auto& l : square.labels()) CHECK((g.grid_points.point(l) - square.point(l)).norm() <= 0.1);

    const PointConfiguration one({vec({0.3, -2})}, {"x"});
    const auto s = grid_approximation(one, 1e-6, 2);
    CHECK(s.max_grid_offset == 0.0);

    const PointConfiguration seg({vec({0}), vec({1})}, {"0", "1"});
    const auto fine = grid_approximation(seg, 1e-3, 1009);
    CHECK(fine.max_distance_error <= 1e-3);
    // p = 3 allows resolution <= 2, too coarse for 0.37 at 1e-6.
    const PointConfiguration off({vec({0}), vec({0.37}), vec({1})}, {"0", "1", "2"});
    CHECK_THROWS_AS(grid_approximation(off, 1e-6, 3), Error);
}

TEST_CASE("brick embedding via the cut cone") {
    Mat reg = Mat::Ones(4, 4) - Mat::Identity(4, 4);
    const auto cuts = brick_embed(SquaredDistanceMatrix(reg));
    CHECK(cuts.cuts.size() == 4);
    for (const auto& c : cuts.cuts) {
        CHECK(c.weight == doctest::Approx(0.5));
        const auto sz = c.members.size();
        CHECK((sz == 1 || sz == 3));  // {3} is stored as its complement
    }
    CHECK(max_abs(cuts.reconstruct() - reg) < 1e-9);

    Mat seg(2, 2);
    seg << 0, 4, 4, 0;
    const auto sc = brick_embed(SquaredDistanceMatrix(seg));
    REQUIRE(sc.cuts.size() == 1);
    CHECK(sc.cuts[0].weight == doctest::Approx(4.0));

    Mat near = reg;
    near(0, 1) = near(1, 0) = 1.02;
    const auto nc = try_brick_embed(SquaredDistanceMatrix(near));
    REQUIRE(nc.has_value());
    CHECK(max_abs(nc->reconstruct() - near) < 1e-9);

    // Far from regular: the square's diagonal pattern violates no cut
    // inequality, but a long thin triangle does.
    CHECK_FALSE(try_brick_embed(SquaredDistanceMatrix::from_triangle(1, 1, 4.5)).has_value());
    CHECK_THROWS_AS(brick_embed(SquaredDistanceMatrix::from_triangle(1, 1, 4.5)), Error);
}

TEST_CASE("brick embedding is the identity on random cut combinations") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 3 + trial % 5;
        Mat d = Mat::Zero(m, m);
        for (int mask = 1; mask < (1 << (m - 1)); ++mask) {
            if (rng.uniform() < 0.5) continue;
            const double s = rng.uniform(0.1, 1.0);
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    const bool in_i = i < m - 1 && (mask >> i & 1);
                    const bool in_j = j < m - 1 && (mask >> j & 1);
                    if (in_i != in_j) d(i, j) += s;
                }
            }
        }
        if (d.maxCoeff() == 0.0) continue;
        // Off-diagonal zeros would be coincident points; skip those draws.
        bool distinct = true;
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) distinct = distinct && d(i, j) > 0;
        }
        if (!distinct) continue;
        const auto c = try_brick_embed(SquaredDistanceMatrix(d));
        REQUIRE(c.has_value());
        CHECK(max_abs(c->reconstruct() - d) < 1e-9);
    }
}

TEST_CASE("brick witnesses") {
    Mat seg(2, 2);
    seg << 0, 1, 1, 0;
    const auto w = brick_witness(brick_embed(SquaredDistanceMatrix(seg)), 2, {"a", "b"});
    CHECK(verify_witness(w, 1e-12).pass);

    Mat reg = Mat::Ones(4, 4) - Mat::Identity(4, 4);
    const auto cuts = brick_embed(SquaredDistanceMatrix(reg));
    const std::vector<std::string> labels{"0", "1", "2", "3"};
    const auto z2 = brick_witness(cuts, 2, labels, TwoPointModel::Simplex);
    CHECK(z2.dim() == 4);
    CHECK(z2.rank() == 4);
    CHECK(verify_witness(z2, 1e-12).pass);
    const auto realized = z2.realize();
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) CHECK((realized.point(i) - realized.point(j)).squaredNorm() == doctest::Approx(1.0));
    }
    const auto z3 = brick_witness(cuts, 3, labels);
    CHECK(verify_witness(z3, 1e-10).pass);
    CHECK(z3.rank() == 4);
}

TEST_CASE("isosceles triangles with a prescribed apex angle") {
    // Oracle angle at the middle of three consecutive vertices.
    for (int p : {3, 5, 6, 7, 13}) {
        const double a = 2 * std::numbers::pi / p;
        const Eigen::Vector2d v0(std::cos(-a) - 1, std::sin(-a)), v1(std::cos(a) - 1, std::sin(a));
        const double oracle = std::acos(v0.dot(v1) / (v0.norm() * v1.norm()));
        CHECK(consecutive_pgon_angle(p) == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(consecutive_pgon_angle(p) == doctest::Approx(std::numbers::pi * (1 - 2.0 / p)).epsilon(1e-12));
    }
    CHECK(consecutive_pgon_angle(6) == doctest::Approx(2 * std::numbers::pi / 3));

    const auto right = isosceles_with_apex_angle(std::numbers::pi / 2, 101);
    CHECK(std::abs(right.apex_angle - std::numbers::pi / 2) < 1e-9);
    CHECK(verify_witness(right.witness, 1e-9).pass);
    const auto& c = right.witness.claimed;
    CHECK(dist2(c, "A", "B") == doctest::Approx(dist2(c, "A", "C")));

    const auto flat = isosceles_with_apex_angle(consecutive_pgon_angle(7), 7);
    CHECK(flat.t == 0.0);
    CHECK(flat.apex_angle == doctest::Approx(flat.consecutive_angle));

    CHECK_THROWS_AS(isosceles_with_apex_angle(0.99 * std::numbers::pi, 7), Error);
}

TEST_CASE("simplex embedding pipeline") {
    const PointConfiguration seg({vec({0}), vec({1})}, {"a", "b"});
    const auto s = embed_simplex(seg, 2);
    CHECK(s.p == 2);
    CHECK(verify_witness(s.witness, 1e-7).pass);
    CHECK(distance_error_against(s.witness, seg) < 1e-9);

    const PointConfiguration right({vec({0, 0}), vec({1, 0}), vec({0, 1})}, {"A", "B", "C"});
    const auto r = embed_simplex(right, 2);
    CHECK(verify_witness(r.witness, 1e-7).pass);
    CHECK(distance_error_against(r.witness, right) < 1e-7);

    const double h = std::sqrt(3.0) / 2;
    const PointConfiguration reg({vec({0, 0, 0}), vec({1, 0, 0}), vec({0.5, h, 0}),
                                  vec({0.5, h / 3, std::sqrt(2.0 / 3.0)})},
                                 {"0", "1", "2", "3"});
    const auto e = embed_simplex(reg, 2);
    CHECK(e.p == 2);
    CHECK(e.eta == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(e.resolution == 0);  // empty grid stage
    CHECK(e.cuts.cuts.size() == 4);
    CHECK(distance_error_against(e.witness, reg) < 1e-9);

    const PointConfiguration flat({vec({0, 0}), vec({1, 0}), vec({2, 0})}, {"a", "b", "c"});
    CHECK_THROWS_AS(embed_simplex(flat, 2), Error);
}

TEST_CASE("minimal primes") {
    const double h = std::sqrt(3.0) / 2;
    const PointConfiguration tri({vec({0, 0}), vec({1, 0}), vec({0.5, h})}, {"0", "1", "2"});
    const auto t = min_prime_for(tri, 50);
    REQUIRE(t.has_value());
    CHECK(t->p == 2);

    const PointConfiguration seg({vec({0}), vec({1})}, {"a", "b"});
    CHECK(min_prime_for(seg, 50)->p == 2);

    const auto thin = PointConfiguration(realize_distances(SquaredDistanceMatrix::from_triangle(1, 1, 3.9)),
                                         {"A", "B", "C"});
    const auto th = min_prime_for(thin, 400);
    REQUIRE(th.has_value());
    CHECK(verify_witness(th->witness, 1e-7).pass);
    CHECK(distance_error_against(th->witness, thin) < 1e-7);
}

TEST_CASE("embedding distances telescope on random simplices") {
    Rng rng(77);
    for (int trial = 0; trial < 15; ++trial) {
        const auto x = random_simplex(2 + trial % 4, rng);
        const auto e = embed_simplex(x, 2);
        CHECK(verify_witness(e.witness, 1e-7).pass);
        CHECK(distance_error_against(e.witness, x) < 1e-7);
        CHECK(e.distance_error < 1e-7);
    }
}

TEST_CASE("minimal prime above the exhaustive scan") {
    Vec a(3), b(3), c(3), d(3);
    a << 0, 0, 0;
    b << 1, 0, 0;
    c << 0, 1, 0;
    d << 0.3, 0.3, 0.05;
    const PointConfiguration thin({a, b, c, d}, {"A", "B", "C", "D"});
    const auto r = min_prime_for(thin, 10'000'000);
    REQUIRE(r.has_value());
    MESSAGE("flat tetrahedron minimal prime " << r->p);
    CHECK(r->p > kExhaustivePrimeScan);
    CHECK(verify_witness(r->witness, 1e-7).pass);
    // The primes just below the answer all fail at fixed p.
    EmbedOptions fixed;
    fixed.allow_raise_p = false;
    long long q = r->p;
    for (int i = 0; i < 10; ++i) {
        q -= 1;
        while (!is_prime(q)) --q;
        CHECK_FALSE(try_embed_simplex(thin, static_cast<int>(q), fixed).has_value());
    }
}
