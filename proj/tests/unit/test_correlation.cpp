#include <doctest.h>

#include "rbds/correlation.hpp"
#include "rbds/dgp.hpp"
#include "rbds/oracles.hpp"

using namespace rbds;

TEST_CASE("worked sample") {
    const TimeSeries s({0.0, 10.0, 0.1});
    const auto P = build_proximity(s, 0.5);
    CHECK(correlation_integral(P, 1).c_full == doctest::Approx(1.0 / 3));
    const auto two = correlation_integral(P, 2);
    CHECK(two.N == 1);
    CHECK(two.c_full == 0.0);
}

TEST_CASE("all pairs close") {
    const auto P = build_proximity(gen_iid_normal(50, 1), 1e308);
    for (int m : {1, 2, 3, 7}) {
        const auto c = correlation_integral(P, m);
        CHECK(c.c_full == 1.0);
        CHECK(c.c_tilde == 1.0);
        CHECK(c.c_breve == doctest::Approx((c.N - c.N0) / c.N));
    }
}

TEST_CASE("matches the direct double loop and splits exactly") {
    for (std::size_t T : {20u, 64u, 65u, 200u, 333u}) {
        const auto s = gen_iid_normal(T, T);
        for (double eps : {0.3, 0.8})
            for (int m : {1, 2, 3, 4, 10}) {
                const auto P = build_proximity(s, eps);
                const auto c = correlation_integral(P, m);
                CHECK(c.c_full == doctest::Approx(oracle::c_full_naive(s, eps, m)).epsilon(1e-14));
                CHECK(c.N * c.c_full == doctest::Approx(c.N * c.c_breve + c.N0 * c.c_tilde).epsilon(1e-14));
            }
    }
    CHECK_THROWS_AS(correlation_integral(build_proximity(gen_iid_normal(10, 1), 0.5), 0), Error);
}
