#pragma once

#include "rbds/bds.hpp"
#include "rbds/core.hpp"
#include "rbds/patterns.hpp"

namespace rbds {

// Residue-class bookkeeping for lag k at embedding dimension m: the two
// windows of a lag-k pair split into i chains of h+1 edges and k-i chains
// of h edges.
struct LagDecomposition {
    int h, i, r, tau, h1, i1;
};
LagDecomposition lag_decomposition(int m, int k, int d);

// Closed forms for the joint window-pair expectations. Implemented as
// written; union_graph_expectation is the reference they are checked against.
double w_function(const EstimatorSet& est, int m, int k, int d);
double u_function(const EstimatorSet& est, int m, int k, int d);

// E[I(Y_0, Y_k) * I(Y_p, Y_s)] with the second window of the far pair fresh.
double union_graph_expectation(const EstimatorSet& est, int m, int k, long p);
// Reference values of W_m(k,d) (far window overlapping d leading indices)
// and U_m(k,d) (far window starting d inside the block), same indexing as
// the closed forms.
double w_reference(const EstimatorSet& est, int m, int k, int d);
double u_reference(const EstimatorSet& est, int m, int k, int d);

struct WPartials {
    double wh;  // d W(k,0) / d omega_h
    double wh1; // d W(k,0) / d omega_{h+1}
    double w1;  // d W(m,0) / d omega_1
};
WPartials w_partials(const EstimatorSet& est, int m, int k);

double mu_hat(const EstimatorSet& est, const CombinatoricFactors& f);
// First-order bias of mu_hat from omega1_hat^m: (N0/N) C(m,2) w1^(m-2) Var(omega1_hat).
double mu_bias(const EstimatorSet& est, const CombinatoricFactors& f);
double breve_sigma_sq(const EstimatorSet& est, const CombinatoricFactors& f);
// Same quantity summed class by class with exact placement counts.
double breve_sigma_sq_exact(const EstimatorSet& est, const CombinatoricFactors& f);
double tilde_sigma_sq(const EstimatorSet& est, const CombinatoricFactors& f);
// Throws NonPositiveVariance when the combination is not positive.
RbdsIntermediates nu_sq(const EstimatorSet& est, const CombinatoricFactors& f);

TestResult rbds_statistic(const TimeSeries& series, const TestConfig& config);
TestResult rbds_statistic(const ProximityStructure& P, const TestConfig& config);

} // namespace rbds
