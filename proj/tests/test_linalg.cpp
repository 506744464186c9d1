#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "narrowcap/linalg.hpp"
#include "narrowcap/lp.hpp"
#include "narrowcap/rng.hpp"

using namespace narrowcap;

TEST_CASE("lu solve and inverse on random systems") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 6;
        Mat a(n, n);
        for (auto& v : a.data) v = rng.uniform(-2.0, 2.0);
        if (std::abs(determinant(a)) < 1e-6) continue;
        Vec x_true(n);
        for (auto& v : x_true) v = rng.uniform(-1.0, 1.0);
        const Vec b = matvec(a, x_true);
        const Vec x = lu_solve(a, b);
        for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-8));

        const Mat inv = inverse(a);
        CHECK(max_abs_diff(matmul(a, inv), Mat::identity(n)) < 1e-10);
    }
}

TEST_CASE("singular matrix is rejected") {
    Mat a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 2.0;
    a(1, 0) = 2.0;
    a(1, 1) = 4.0;
    CHECK_THROWS_AS(lu_solve(a, {1.0, 1.0}), std::runtime_error);
    CHECK(determinant(a) == doctest::Approx(0.0));
}

TEST_CASE("spectral norm upper bound") {
    // A single-row matrix has Frobenius norm equal to its spectral norm.
    Mat w(1, 2);
    w(0, 0) = 3.0;
    w(0, 1) = 4.0;
    CHECK(spectral_norm_upper(w) == doctest::Approx(5.0));

    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 4;
        Mat a(n, n + trial % 3);
        for (auto& v : a.data) v = rng.uniform(-1.0, 1.0);
        const double bound = spectral_norm_upper(a);
        // Oracle: ||A x|| <= bound ||x|| on random probes.
        for (int probe = 0; probe < 20; ++probe) {
            Vec x(a.cols);
            for (auto& v : x) v = rng.uniform(-1.0, 1.0);
            CHECK(norm2(matvec(a, x)) <= bound * norm2(x) + 1e-12);
        }
    }
}

TEST_CASE("simplex solves small bounded programs") {
    // max x + y st x <= 3, y <= 2, x + y <= 4
    LpSolution s = lp_maximize({1.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}},
                               {3.0, 2.0, 4.0});
    REQUIRE(s.status == LpSolution::Status::optimal);
    CHECK(s.value == doctest::Approx(4.0));

    // Unbounded: max x with only x >= -1 (i.e. -x <= 1).
    LpSolution u = lp_maximize({1.0}, {{-1.0}}, {1.0});
    CHECK(u.status == LpSolution::Status::unbounded);

    // Negative objective coefficients: max -x - y boxed in [0,1]^2 -> 0 at
    // the origin (the variables are free, so the lower bounds matter).
    LpSolution z = lp_maximize({-1.0, -1.0},
                               {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}},
                               {1.0, 1.0, 0.0, 0.0});
    REQUIRE(z.status == LpSolution::Status::optimal);
    CHECK(z.value == doctest::Approx(0.0));
}
