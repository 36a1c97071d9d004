#include <doctest.h>

#include <cmath>

#include "rbds/correlation.hpp"
#include "rbds/dgp.hpp"
#include "rbds/oracles.hpp"
#include "rbds/overlap.hpp"
#include "rbds/rbds.hpp"

using namespace rbds;

namespace {
const EstimatorSet& pop() {
    static const EstimatorSet p = oracle::gaussian_population(0.5);
    return p;
}
EstimatorSet wide_set() {
    static const auto P = build_proximity(gen_iid_normal(60, 3), 1e308);
    return sample_estimators(P);
}
} // namespace

TEST_CASE("lag decomposition") {
    const auto L = lag_decomposition(3, 2, 0);
    CHECK(L.h == 1);
    CHECK(L.i == 1);
    const auto M = lag_decomposition(2, 1, 1);
    CHECK(M.h == 2);
    CHECK(M.i == 0);
    CHECK(M.r == 1);
    CHECK(M.tau == 0);
}

TEST_CASE("closed forms: documented special cases") {
    const auto& e = pop();
    CHECK(w_function(e, 2, 1, 0) == doctest::Approx(e.chain(2)));
    CHECK(w_function(e, 2, 1, 1) == doctest::Approx(e.omega(2, 1)));
    CHECK(w_function(e, 3, 1, 3) == doctest::Approx(e.omega(3, 3)));
    // the reference keeps the far indices outside the block
    CHECK(w_reference(e, 2, 1, 1) == doctest::Approx(e.omega(2, 1) * e.chain(1)));
    CHECK(w_reference(e, 2, 1, 2) == doctest::Approx(e.omega(2, 2)));
    CHECK(u_function(e, 2, 1, 0) ==
          doctest::Approx(e.omega(2, 2) - w_reference(e, 2, 1, 0) * std::pow(e.chain(1), 2)));
    CHECK(w_function(e, 2, 2, 0) == doctest::Approx(e.chain(1) * e.chain(1)));
    CHECK_THROWS_AS(w_function(e, 2, 3, 0), Error);
    CHECK_THROWS_AS(u_function(e, 2, 1, 1), Error); // negative exponent
}

TEST_CASE("union graph references") {
    const auto& e = pop();
    // a far pair that does not touch the block is independent of it
    CHECK(union_graph_expectation(e, 3, 1, 10) ==
          doctest::Approx(w_reference(e, 3, 1, 0) * std::pow(e.chain(1), 3)));
    for (int m : {2, 3, 4})
        for (int k = 1; k < m; ++k)
            for (int d = 0; d <= m; ++d) {
                const auto w = wide_set();
                CHECK(w_reference(w, m, k, d) == 1.0);
                CHECK(u_reference(w, m, k, d) == 0.0);
            }
}

TEST_CASE("partials") {
    const auto& p = pop();
    CHECK(w_partials(p, 3, 1).w1 == doctest::Approx(3 * p.chain(1) * p.chain(1)));
    // W(k,0) = w_h^(k-i) w_{h+1}^i; check against a numerical derivative
    const auto P = w_partials(p, 3, 2); // h=1, i=1
    CHECK(P.wh == doctest::Approx(p.chain(2)));
    CHECK(P.wh1 == doctest::Approx(p.chain(1)));
}

TEST_CASE("plug-in mean") {
    const auto s = gen_iid_normal(150, 21);
    const auto P = build_proximity(s, 0.5);
    const auto est = sample_estimators(P);
    const auto f = combinatoric_factors(150, 2, true);
    const auto [w1, w2] = omega12_hat(P);
    CHECK(mu_hat(est, f) == doctest::Approx(((f.T_m - 1.0) * w2 + f.N0 * w1 * w1) / f.N).epsilon(1e-14));
    const auto wide = wide_set();
    for (int m : {2, 3, 5}) CHECK(mu_hat(wide, combinatoric_factors(60, m, true)) == doctest::Approx(1.0));
}

TEST_CASE("class counts cover every ordered pair of pairs") {
    for (int m : {2, 3})
        for (std::size_t T : {30u, 57u}) {
            const auto f = combinatoric_factors(T, m);
            double ff = 0, all = 0;
            for (const auto& c : all_pair_classes(m)) {
                const double n = c.count(f.T_m, m);
                all += n;
                if (c.first_far(m) && c.second_far(m)) ff += n;
            }
            CHECK(ff == doctest::Approx(f.N0 * f.N0));
            CHECK(all == doctest::Approx(f.N * f.N));
        }
}

TEST_CASE("cyclic unions are confined to compact classes") {
    for (int m : {2, 3, 4})
        for (const auto& c : all_pair_classes(m))
            if (c.cyclic) CHECK(c.far_gaps == 0);
}

TEST_CASE("overlapping-pair variance: summed form against class enumeration") {
    // The two agree to O(1/T) relative; the gap shrinks as T grows.
    for (int m : {2, 3, 4}) {
        double prev = 1.0;
        for (std::size_t T : {200u, 1000u, 5000u}) {
            const auto f = combinatoric_factors(T, m, true);
            const double rel = std::fabs(breve_sigma_sq(pop(), f) / breve_sigma_sq_exact(pop(), f) - 1);
            CHECK(rel * static_cast<double>(T) < 20.0);
            CHECK(rel < prev);
            prev = rel;
        }
    }
}

TEST_CASE("disjoint-pair variance against the exhaustive sum") {
    for (int m : {2, 3}) {
        const auto P = build_proximity(gen_iid_normal(40, 77), 0.7);
        const auto est = sample_estimators(P);
        const auto f = combinatoric_factors(40, m, true);
        CHECK(std::fabs(tilde_sigma_sq(est, f) - oracle::tilde_sigma_sq_exhaustive(est, 40, m)) < 1e-12);
    }
}

TEST_CASE("variance terms vanish when every pair is close") {
    const auto f = combinatoric_factors(60, 2, true);
    const auto r = nu_sq(wide_set(), f);
    CHECK(r.breve_sigma_sq == doctest::Approx(0.0).scale(1.0));
    CHECK(r.tilde_sigma_sq == doctest::Approx(0.0).scale(1.0));
    CHECK(r.nu_sq == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("statistic and error paths") {
    const auto s = gen_iid_normal(300, 5);
    const auto r = rbds_statistic(s, TestConfig{2, 0.5, 0.05});
    REQUIRE(r.rbds.has_value());
    const auto c = correlation_integral(build_proximity(s, 0.5), 2);
    CHECK(r.c_full == c.c_full);
    CHECK(r.statistic ==
          doctest::Approx((c.c_full - r.rbds->mu_hat + r.rbds->mu_correction) / std::sqrt(r.rbds->nu_sq)));
    const auto plain = rbds_statistic(s, TestConfig{2, 0.5, 0.05, false});
    CHECK(plain.rbds->mu_correction == 0.0);
    CHECK(plain.statistic == doctest::Approx((c.c_full - plain.rbds->mu_hat) / std::sqrt(plain.rbds->nu_sq)));

    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code([&] { rbds_statistic(s, TestConfig{2, 1e308, 0.05}); }) == ErrorCode::DegenerateScale);
    CHECK(code([&] { rbds_statistic(gen_iid_normal(7, 1), TestConfig{2, 0.5, 0.05}); }) == ErrorCode::SeriesTooShort);
    CHECK(code([&] { rbds_statistic(s, TestConfig{1, 0.5, 0.05}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mean correction removes the squared plug-in bias at m=2") {
    // distinct-index estimate of omega_1^2 from degree sums
    const std::size_t T = 120;
    const auto P = build_proximity(gen_iid_normal(T, 8), 0.5);
    double A = 0, P2 = 0;
    for (auto rc : P.row_counts()) {
        const double g = rc - 1.0;
        A += g;
        P2 += g * (g - 1);
    }
    const double t = static_cast<double>(T);
    const double unbiased = (A * A - 2 * A - 4 * P2) / (t * (t - 1) * (t - 2) * (t - 3));
    const auto est = sample_estimators(P);
    const auto f = combinatoric_factors(T, 2, true);
    const double w1 = est.chain(1);
    // the correction is the first-order version of the exact one
    CHECK(mu_bias(est, f) == doctest::Approx(f.N0 / f.N * (w1 * w1 - unbiased)).epsilon(0.05));
}
