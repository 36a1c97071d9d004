#pragma once

// Slow, independent reference computations used to validate the production
// paths. Nothing here is on the hot path.

#include "rbds/core.hpp"
#include "rbds/patterns.hpp"

namespace rbds::oracle {

// All-tuples average by direct enumeration of assignments.
double v_enumerate(const ProximityStructure& P, const PatternGraph& g);

// Double loop over window pairs with the max-norm evaluated directly.
double c_full_naive(const TimeSeries& series, double eps, int m);

// Sum of Cov over every ordered pair of disjoint-window pairs, each joint
// expectation taken from est, divided by N0^2.
double tilde_sigma_sq_exhaustive(const EstimatorSet& est, std::size_t T, int m);

// Probability of a closeness forest among i.i.d. N(0,1) draws, by message
// passing on a grid with Richardson extrapolation.
double gaussian_pattern_probability(const PatternGraph& g, double eps);

// Estimator set whose entries are the N(0,1) population probabilities.
EstimatorSet gaussian_population(double eps);

} // namespace rbds::oracle
