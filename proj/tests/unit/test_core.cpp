#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rbds/core.hpp"
#include "rbds/dgp.hpp"
#include "rbds/kernels.hpp"

using namespace rbds;

TEST_CASE("time series rejects bad input") {
    CHECK_THROWS_AS(TimeSeries({1.0}), Error);
    try {
        TimeSeries({1.0, std::numeric_limits<double>::quiet_NaN()});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFiniteInput);
    }
    const TimeSeries s({0.0, 2.0});
    CHECK(s.mean() == doctest::Approx(1.0));
    CHECK(s.sd() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("combinatoric factors") {
    const auto f = combinatoric_factors(10, 2);
    CHECK(f.T_m == 9);
    CHECK(f.N == 36);
    CHECK(f.N0 == 28);
    CHECK(f.c_ratio(1) == doctest::Approx(1.0 / 90));
    CHECK(f.falling(2) == 56);
    CHECK(f.script_N(1) == 28);
    CHECK_THROWS_AS(combinatoric_factors(3, 2), Error);
    CHECK_THROWS_AS(combinatoric_factors(rbds_min_length(3) - 1, 3, true), Error);
    CHECK_NOTHROW(combinatoric_factors(rbds_min_length(3), 3, true));
}

TEST_CASE("epsilon from a fraction of the sd") {
    CHECK(epsilon_from_fraction(TimeSeries({0.0, 2.0}), 0.5) == doctest::Approx(0.5 * std::sqrt(2.0)));
    try {
        epsilon_from_fraction(TimeSeries({1.0, 1.0, 1.0}), 0.5);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConstantSeries);
    }
    CHECK(epsilon_from_fraction(gen_iid_normal(20000, 3), 0.5) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("proximity bits") {
    const auto P = build_proximity(TimeSeries({0.0, 10.0, 0.1}), 0.5);
    CHECK(P.bit(0, 2));
    CHECK(P.bit(2, 0));
    CHECK_FALSE(P.bit(0, 1));
    CHECK_FALSE(P.bit(1, 2));
    CHECK(P.row_count(0) == 2); // includes the diagonal

    // strict inequality at the boundary
    const auto Q = build_proximity(TimeSeries({0.0, 0.5}), 0.5);
    CHECK_FALSE(Q.bit(0, 1));

    const auto R = build_proximity(TimeSeries({-3.0, 7.0, 1.0, 1e5}), 1e308);
    for (std::size_t t = 0; t < 4; ++t)
        for (std::size_t s = 0; s < 4; ++s) CHECK(R.bit(t, s));
    CHECK_THROWS_AS(build_proximity(TimeSeries({0.0, 1.0}), 0.0), Error);
}

TEST_CASE("sorted neighbourhoods match the rows") {
    const auto s = gen_iid_normal(300, 9);
    const auto P = build_proximity(s, 0.4);
    std::vector<std::uint32_t> a, b;
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(P.lo(i) <= i);
        CHECK(i < P.hi(i));
        a.push_back(P.hi(i) - P.lo(i));
        b.push_back(P.row_count(i));
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("scalar and avx2 kernels agree") {
    using namespace kernels;
    if (detected_isa() != Isa::avx2) {
        MESSAGE("avx2 not available; comparing scalar with itself");
    }
    for (std::size_t T : {1u, 2u, 63u, 64u, 65u, 130u, 257u, 1000u}) {
        std::vector<double> u(T);
        CounterRng rng(T);
        for (auto& x : u) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 4 - 2;
        if (T > 3) u[3] = u[1] + 0.3; // exact boundary at eps = 0.3
        const std::size_t W = (T + 63) / 64;
        for (double eps : {0.05, 0.3, 1.0, 10.0}) {
            std::vector<std::uint64_t> a(T * W), b(T * W);
            scalar::build_rows(u.data(), T, eps, a.data(), W);
            force_isa(Isa::avx2);
            kernels::build_rows(u.data(), T, eps, b.data(), W);
            CHECK(a == b);
            for (int m : {1, 2, 3, 5, 64}) {
                if (static_cast<std::size_t>(m) > T) continue;
                const auto x = scalar::window_counts(a.data(), T, W, m);
                const auto y = kernels::window_counts(a.data(), T, W, m);
                CHECK(x.near == y.near);
                CHECK(x.far == y.far);
            }
            std::vector<double> v(W * 64, 0.0), o1(T), o2(T);
            for (std::size_t i = 0; i < T; ++i) v[i] = static_cast<double>(rng() % 1000) / 7.0;
            scalar::masked_matvec(a.data(), T, W, v.data(), o1.data());
            kernels::masked_matvec(a.data(), T, W, v.data(), o2.data());
            for (std::size_t i = 0; i < T; ++i) CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-14));
            force_isa(detected_isa());
        }
    }
}
