#include <doctest.h>

#include <cmath>

#include "rbds/dgp.hpp"
#include "rbds/oracles.hpp"
#include "rbds/patterns.hpp"

using namespace rbds;

namespace {
int edges(const PatternKey& k) { return static_cast<int>(build_pattern(k).edges.size()); }
int verts(const PatternKey& k) { return build_pattern(k).vertex_count; }
} // namespace

TEST_CASE("pattern builders") {
    CHECK(verts(PatternKey::chain(2)) == 3);
    CHECK(edges(PatternKey::chain(2)) == 2);
    CHECK(canonical_form(build_pattern(PatternKey::omega(2, 1))) == canonical_form(build_pattern(PatternKey::chain(3))));
    CHECK(canonical_form(build_pattern(PatternKey::omega(2, 0))) == canonical_form(build_pattern(PatternKey::chain(2))));
    CHECK(verts(PatternKey::omega(3, 2)) == 6);
    CHECK(verts(PatternKey::xi(2, 1)) == 4);
    CHECK(edges(PatternKey::xi(2, 1)) == 3);
    // xi(2,1) is the star on four vertices
    PatternGraph star{4, {{0, 1}, {0, 2}, {0, 3}}};
    CHECK(canonical_form(build_pattern(PatternKey::xi(2, 1))) == canonical_form(star));
    CHECK(edges(PatternKey::eta(3)) == 6);
    CHECK(verts(PatternKey::eta(3)) == 7);
    CHECK_THROWS_AS(build_pattern(PatternKey::omega(2, 4)), Error);
    CHECK_THROWS_AS(build_pattern(PatternKey::xi(2, 2)), Error);
    CHECK_THROWS_AS(build_pattern(PatternKey::chain(0)), Error);
}

TEST_CASE("graph validation") {
    CHECK_THROWS_AS((PatternGraph{3, {{0, 1}, {1, 2}, {2, 0}}}.validate()), Error);
    CHECK_THROWS_AS((PatternGraph{2, {{0, 1}, {1, 0}}}.validate()), Error);
    CHECK_THROWS_AS((PatternGraph{2, {{0, 0}}}.validate()), Error);
    CHECK_THROWS_AS((PatternGraph{2, {{0, 2}}}.validate()), Error);
    PatternGraph forest{5, {{0, 1}, {3, 4}}};
    CHECK_NOTHROW(forest.validate());
    CHECK(forest.components().size() == 3);
}

TEST_CASE("canonical form ignores labels") {
    PatternGraph a{5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}};
    PatternGraph b{5, {{4, 3}, {3, 0}, {3, 2}, {2, 1}}};
    PatternGraph c{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}};
    CHECK(canonical_form(a) == canonical_form(b));
    CHECK(canonical_form(a) != canonical_form(c));
}

TEST_CASE("small worked sample") {
    const auto P = build_proximity(TimeSeries({0.0, 10.0, 0.1}), 0.5);
    const auto [w1, w2] = omega12_hat(P);
    CHECK(w1 == doctest::Approx(1.0 / 3));
    CHECK(w2 == 0.0);
    CHECK(estimate_pattern_u_exact(P, build_pattern(PatternKey::chain(1))) == doctest::Approx(1.0 / 3));
    const auto wide = build_proximity(TimeSeries({0.0, 10.0, 0.1}), 1e308);
    CHECK(omega12_hat(wide).first == 1.0);
    CHECK(omega12_hat(wide).second == 1.0);
    CHECK(estimate_pattern_v(wide, build_pattern(PatternKey::eta(3))) == 1.0);
}

TEST_CASE("V kernels agree with enumeration") {
    const auto s = gen_iid_normal(9, 5);
    const auto P = build_proximity(s, 0.7);
    for (const auto& key : {PatternKey::chain(1), PatternKey::chain(4), PatternKey::omega(2, 3), PatternKey::eta(2),
                            PatternKey::xi(3, 2)}) {
        const auto g = build_pattern(key);
        const double ref = oracle::v_enumerate(P, g);
        CHECK(estimate_pattern_v(P, g, VKernel::interval) == doctest::Approx(ref).epsilon(1e-13));
        CHECK(estimate_pattern_v(P, g, VKernel::matvec) == doctest::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("isomorphic patterns give identical estimates") {
    const auto P = build_proximity(gen_iid_normal(400, 8), 0.5);
    CHECK(std::fabs(estimate_pattern_v(P, build_pattern(PatternKey::omega(2, 1))) -
                    estimate_pattern_v(P, build_pattern(PatternKey::chain(3)))) < 1e-15);
}

TEST_CASE("forests factor over components") {
    const auto P = build_proximity(gen_iid_normal(200, 4), 0.5);
    const auto est = sample_estimators(P);
    PatternGraph two{5, {{0, 1}, {2, 3}, {3, 4}}};
    CHECK(est.at(two) == doctest::Approx(est.chain(1) * est.chain(2)));
    // V-statistics of forests factor exactly
    CHECK(estimate_pattern_v(P, two) == doctest::Approx(estimate_pattern_v(P, build_pattern(PatternKey::chain(1))) *
                                                        estimate_pattern_v(P, build_pattern(PatternKey::chain(2)))));
}

TEST_CASE("exact distinct-index estimates") {
    const auto P = build_proximity(gen_iid_normal(40, 12), 0.6);
    const auto [w1, w2] = omega12_hat(P);
    CHECK(estimate_pattern_u_exact(P, build_pattern(PatternKey::chain(1))) == doctest::Approx(w1).epsilon(1e-13));
    CHECK(estimate_pattern_u_exact(P, build_pattern(PatternKey::chain(2))) == doctest::Approx(w2).epsilon(1e-13));
    const auto est = sample_estimators(P);
    CHECK(est.chain(1) == w1);
    CHECK(est.entries().begin()->second.provenance == Provenance::u_exact);
    const auto big = build_proximity(gen_iid_normal(400, 1), 0.5);
    CHECK_THROWS_AS(estimate_pattern_u_exact(big, build_pattern(PatternKey::chain(3))), Error);
}

TEST_CASE("closure contents") {
    auto has = [](int m, const PatternKey& k) {
        const auto want = canonical_form(build_pattern(k));
        for (const auto& g : closure_patterns(m))
            if (canonical_form(g) == want) return true;
        return false;
    };
    for (int r = 0; r <= 3; ++r) {
        CHECK(has(2, PatternKey::omega(2, r)));
        CHECK(has(2, PatternKey::omega(3, r)));
    }
    CHECK(has(2, PatternKey::eta(3)));
    CHECK(has(2, PatternKey::xi(2, 1)));
    CHECK(has(2, PatternKey::xi(3, 1)));
    CHECK(has(2, PatternKey::xi(3, 2)));
    CHECK(has(3, PatternKey::omega(1, 1)));
    CHECK(has(3, PatternKey::omega(2, 2)));
    for (const auto& g : closure_patterns(3)) CHECK(g.components().size() == 1);

    const auto wide = build_proximity(gen_iid_normal(50, 2), 1e308);
    const auto est = estimator_closure(wide, 3);
    for (const auto& [key, e] : est.entries()) CHECK(e.value == 1.0);
    CHECK_THROWS_AS(estimator_closure(wide, 1), Error);
}

TEST_CASE("population probabilities") {
    // P(|X - Y| < e) for independent N(0,1) is 2 Phi(e / sqrt 2) - 1
    const double e = 0.5;
    const double exact = std::erf(e / 2.0);
    CHECK(oracle::gaussian_pattern_probability(build_pattern(PatternKey::chain(1)), e) ==
          doctest::Approx(exact).epsilon(1e-9));
    const auto pop = oracle::gaussian_population(e);
    CHECK(pop.chain(2) > pop.chain(1) * pop.chain(1));
}
