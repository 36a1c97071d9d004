#include <doctest.h>

#include <cmath>
#include <set>

#include "rbds/dgp.hpp"

using namespace rbds;

namespace {
double mean(const TimeSeries& s) { return s.mean(); }
double var(const TimeSeries& s) { return s.sd() * s.sd(); }
} // namespace

TEST_CASE("counter stream") {
    CounterRng a(1), b(1), c(2);
    for (int i = 0; i < 5; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
    }
    // draw n is a pure function of (key, n)
    CounterRng d(99);
    d();
    d();
    CHECK(d() == mix64(99 + 3 * CounterRng::kGolden));
    CHECK(CounterRng(5).split(1).key() != CounterRng(5).split(2).key());
    CHECK(substream_key(7, 0) != substream_key(7, 1));
    CHECK(substream_key(7, 0) != substream_key(8, 0));
}

TEST_CASE("i.i.d. normal") {
    const auto a = gen_iid_normal(5, 1), b = gen_iid_normal(5, 1), c = gen_iid_normal(5, 2);
    for (std::size_t i = 0; i < 5; ++i) CHECK(a[i] == b[i]);
    CHECK(a[0] != c[0]);
    const auto big = gen_iid_normal(200000, 3);
    CHECK(std::fabs(mean(big)) < 0.01);
    CHECK(std::fabs(var(big) - 1) < 0.01);
}

TEST_CASE("garch11") {
    GarchParams p;
    p.T = 200000;
    const auto x = gen_garch11(p, 4);
    // unconditional variance omega0 / (1 - a1 - b1)
    CHECK(var(x) == doctest::Approx(1.0 / 0.8).epsilon(0.03));
    GarchParams flat{2.0, 0.0, 0.0, 100000, 500};
    CHECK(var(gen_garch11(flat, 4)) == doctest::Approx(2.0).epsilon(0.02));
    const auto y = gen_garch11(p, 4);
    CHECK(x[12345] == y[12345]);
    GarchParams bad{1.0, 0.6, 0.5, 100, 500};
    CHECK_THROWS_AS(gen_garch11(bad, 1), Error);
}

TEST_CASE("egarch11") {
    EgarchParams p{0.0, 0.0, 0.9, 50000, 500};
    CHECK(var(gen_egarch11(p, 6)) == doctest::Approx(1.0).epsilon(0.03));
    EgarchParams q;
    q.T = 1000;
    const auto a = gen_egarch11(q, 6), b = gen_egarch11(q, 6);
    CHECK(a[999] == b[999]);
    EgarchParams bad{0.01, 0.0, 1.0, 100, 500};
    CHECK_THROWS_AS(gen_egarch11(bad, 1), Error);
}

TEST_CASE("residual transforms") {
    const auto sq = transform_residuals(TimeSeries({1.0, -2.0}), Transform::square);
    CHECK(sq[0] == 1.0);
    CHECK(sq[1] == 4.0);
    const auto ls = transform_residuals(TimeSeries({1.0, std::exp(1.0)}), Transform::log_square);
    CHECK(ls[0] == 0.0);
    CHECK(ls[1] == doctest::Approx(2.0));
    try {
        transform_residuals(TimeSeries({0.0, 1.0}), Transform::log_square);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroResidual);
    }
    const auto floored = transform_residuals(TimeSeries({0.0, 1.0}), Transform::log_square, true);
    CHECK(floored[0] == doctest::Approx(2.0 * std::log(1e-300)));
}
