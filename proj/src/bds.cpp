#include "rbds/bds.hpp"

#include <cmath>

#include "rbds/correlation.hpp"
#include "rbds/patterns.hpp"
#include "rbds/stats.hpp"

namespace rbds {

const char* method_name(Method m) noexcept { return m == Method::bds ? "bds" : "rbds"; }

double bds_variance(double w1, double w2, int m) {
    if (!(w1 > 0.0 && w1 < 1.0)) fail(ErrorCode::DegenerateScale, "omega1 estimate at the boundary of [0,1]");
    if (m < 1) fail(ErrorCode::InvalidArgument, "m must be positive");
    const double C = w1, K = w2;
    const double c2m = std::pow(C, 2 * m);
    double v = 4.0 * (std::pow(K, m) - c2m);
    for (int k = 1; k < m; ++k) v += 8.0 * (std::pow(K, m - k) * std::pow(C, 2 * k) - c2m);
    v -= 4.0 * m * m * std::pow(C, 2 * m - 2) * (K - C * C);
    return v;
}

TestResult bds_statistic(const ProximityStructure& P, const TestConfig& config) {
    const std::size_t T = P.size();
    config.validate(T, 2);
    const auto parts = correlation_integral(P, config.m);
    const auto [w1, w2] = omega12_hat(P);
    const double v2 = bds_variance(w1, w2, config.m);
    if (!(v2 > 0.0)) fail(ErrorCode::DegenerateScale, "variance estimate is not positive");
    TestResult r;
    r.method = Method::bds;
    r.m = config.m;
    r.epsilon = config.epsilon;
    r.alpha = config.alpha;
    r.T = T;
    r.c_full = parts.c_full;
    r.omega1_hat = w1;
    r.omega2_hat = w2;
    r.variance = v2;
    r.statistic = std::sqrt(static_cast<double>(T)) * (parts.c_full - std::pow(w1, config.m)) / std::sqrt(v2);
    r.p_value = two_sided_p(r.statistic);
    r.reject = r.p_value < config.alpha;
    return r;
}

TestResult bds_statistic(const TimeSeries& series, const TestConfig& config) {
    config.validate(series.size(), 2);
    return bds_statistic(build_proximity(series, config.epsilon), config);
}

} // namespace rbds
