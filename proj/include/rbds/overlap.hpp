#pragma once

// Union graphs of window-pair indicators and the overlap classes that
// organise the covariance sums of the correlation integral.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rbds/patterns.hpp"

namespace rbds {

// Indicator I(||Y_t - Y_s|| < eps) for m-windows starting at t and s.
struct WindowPair {
    long t;
    long s;
};

// Edges {(t+rho, s+rho)} of every pair, merged over shared indices.
// Throws InvalidPatternParams if the union contains a cycle.
PatternGraph union_graph(int m, std::span<const WindowPair> pairs);

// Near pair (0, k) together with a disjoint-window pair whose first window
// starts at offset p and whose partner window touches nothing else.
PatternGraph near_far_union(int m, int k, long p);

// One geometry of two window pairs (P, P') whose vertex sets intersect.
// Gaps between consecutive sorted window starts are either exact (< m) or
// "far" (>= m, any value); the union graph depends only on that shape.
struct CovarianceClass {
    int lag1;       // s - t of P, or m when far
    int lag2;       // s' - t' of P'
    int exact_span; // sum of the exact gaps
    int far_gaps;   // number of far gaps
    bool cyclic = false; // union has a cycle; only possible with no far gap
    PatternGraph joint;
    PatternGraph first;
    PatternGraph second;

    bool first_far(int m) const { return lag1 >= m; }
    bool second_far(int m) const { return lag2 >= m; }
    // Number of placements on windows 1..T_m.
    double count(std::size_t T_m, int m) const;
};

// Interacting classes with at least one disjoint-window pair. Pairs of
// overlapping-window pairs contribute at a higher order and are left out,
// as are the few classes whose union has a cycle (O(T) placements each).
const std::vector<CovarianceClass>& covariance_classes(int m);

// All classes including non-interacting ones; counts sum to the number of
// ordered pairs of pairs. Used by tests.
std::vector<CovarianceClass> all_pair_classes(int m);

// Covariance sums over the classes above, ready for repeated evaluation.
// Counts are baked in for one (T, m).
struct CovarianceTable {
    struct Row {
        double count;
        bool far_far;
        std::vector<std::pair<std::string, PatternGraph>> joint, first, second;
    };
    std::size_t T = 0;
    int m = 0;
    std::vector<Row> rows;

    // sum over far-far classes of count * Cov, divided by N0^2.
    double tilde_variance(const EstimatorSet& est, double N0) const;
    // sum over near/far mixed classes of count * Cov, divided by N^2.
    double near_far_covariance(const EstimatorSet& est, double N) const;
};

const CovarianceTable& covariance_table(std::size_t T, int m);

} // namespace rbds
