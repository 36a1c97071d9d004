#include <doctest.h>

#include <cmath>

#include "rbds/bds.hpp"
#include "rbds/correlation.hpp"
#include "rbds/dgp.hpp"

using namespace rbds;

TEST_CASE("variance at m=2 matches its expansion") {
    const double K = 0.09, C = 0.27;
    // 4(K^2 - C^4) + 8(K C^2 - C^4) - 16 C^2 (K - C^2)
    const double expanded = 4 * (K * K - std::pow(C, 4)) + 8 * (K * C * C - std::pow(C, 4)) - 16 * C * C * (K - C * C);
    CHECK(bds_variance(C, K, 2) == doctest::Approx(expanded).epsilon(1e-14));
    CHECK(bds_variance(C, C * C, 3) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(bds_variance(1.0, 1.0, 2), Error);
}

TEST_CASE("statistic from its parts") {
    const auto s = gen_iid_normal(400, 17);
    const TestConfig cfg{3, 0.6, 0.05};
    const auto r = bds_statistic(s, cfg);
    const auto c = correlation_integral(build_proximity(s, 0.6), 3);
    const double V = std::sqrt(bds_variance(r.omega1_hat, r.omega2_hat, 3));
    CHECK(r.c_full == c.c_full);
    CHECK(r.statistic == doctest::Approx(std::sqrt(400.0) * (c.c_full - std::pow(r.omega1_hat, 3)) / V));
    CHECK(r.p_value == doctest::Approx(std::erfc(std::fabs(r.statistic) / std::sqrt(2.0))));
    CHECK(r.reject == (r.p_value < 0.05));
    CHECK_FALSE(r.rbds.has_value());
}

TEST_CASE("degenerate inputs") {
    const auto s = gen_iid_normal(100, 2);
    try {
        bds_statistic(s, TestConfig{2, 1e308, 0.05});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateScale);
    }
    CHECK_THROWS_AS(bds_statistic(TimeSeries({1.0, 2.0, 3.0}), TestConfig{2, 0.5, 0.05}), Error);
    CHECK_THROWS_AS(bds_statistic(s, TestConfig{2, -1.0, 0.05}), Error);
}
