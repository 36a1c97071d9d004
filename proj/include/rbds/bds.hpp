#pragma once

#include <optional>
#include <string>

#include "rbds/core.hpp"

namespace rbds {

enum class Method { bds, rbds };
const char* method_name(Method m) noexcept;

struct RbdsIntermediates {
    double mu_hat = 0;
    double mu_correction = 0; // subtracted from mu_hat when enabled
    double nu_sq = 0;
    double breve_sigma_sq = 0;
    double tilde_sigma_sq = 0;
    // sigma^2 terms in combination order: mm, 11, mh, mh1, m1, 1h, 1h1
    double sigma_mm = 0, sigma_11 = 0, sigma_mh = 0, sigma_mh1 = 0, sigma_m1 = 0, sigma_1h = 0, sigma_1h1 = 0;
};

struct TestResult {
    Method method = Method::bds;
    double statistic = 0;
    double p_value = 1;
    bool reject = false;
    int m = 0;
    double epsilon = 0;
    double alpha = 0;
    std::size_t T = 0;
    double c_full = 0;
    double omega1_hat = 0;
    double omega2_hat = 0;
    double variance = 0; // V^2 for bds, nu^2 for rbds
    std::optional<RbdsIntermediates> rbds;
};

// V^2 of the classic statistic from the two plug-in probabilities.
double bds_variance(double w1, double w2, int m);

TestResult bds_statistic(const TimeSeries& series, const TestConfig& config);
TestResult bds_statistic(const ProximityStructure& P, const TestConfig& config);

} // namespace rbds
