#include <cmath>

#include "doctest.h"
#include "suborbit/lp.hpp"
#include "suborbit/random.hpp"

using namespace suborbit;

TEST_CASE("textbook LP optimum") {
    // min -x - y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6  -> x = 8/5, y = 6/5.
    Mat a(2, 4);
    a << 1, 2, 1, 0, 3, 1, 0, 1;
    Vec b(2);
    b << 4, 6;
    Vec c(4);
    c << -1, -1, 0, 0;
    const auto r = lp::solve(a, b, c);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.x(0) == doctest::Approx(1.6));
    CHECK(r.x(1) == doctest::Approx(1.2));
    CHECK(r.objective == doctest::Approx(-2.8));
    CHECK(r.residual < 1e-12);
}

TEST_CASE("infeasible and unbounded problems are reported") {
    Mat a(1, 2);
    a << 1, 1;
    Vec b(1);
    b << -1;  // x + y = -1 with x, y >= 0
    CHECK(lp::solve(a, b, Vec()).status == lp::Status::Infeasible);

    Mat u(1, 2);
    u << 1, -1;
    Vec ub(1);
    ub << 1;
    Vec uc(2);
    uc << -1, 0;
    CHECK(lp::solve(u, ub, uc).status == lp::Status::Unbounded);
    CHECK_THROWS(lp::solve(u, Vec::Zero(2), uc));
}

TEST_CASE("random feasible systems are solved with tiny residual") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 2 + trial % 5, n = m + 3 + trial % 7;
        Mat a(m, n);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
        }
        Vec x0(n);
        for (int j = 0; j < n; ++j) x0(j) = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
        const Vec b = a * x0;
        const auto r = lp::solve(a, b, Vec());
        REQUIRE(r.status == lp::Status::Optimal);
        CHECK(r.x.minCoeff() >= 0.0);
        CHECK((a * r.x - b).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("degenerate cycling example terminates") {
    // Beale's classic cycling instance under textbook Dantzig pricing.
    Mat a(3, 7);
    a << 0.25, -8, -1, 9, 1, 0, 0,
         0.5, -12, -0.5, 3, 0, 1, 0,
         0, 0, 1, 0, 0, 0, 1;
    Vec b(3);
    b << 0, 0, 1;
    Vec c(7);
    c << -0.75, 20, -0.5, 6, 0, 0, 0;
    const auto r = lp::solve(a, b, c);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.objective == doctest::Approx(-1.25));
}
