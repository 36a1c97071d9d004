#include "rbds/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rbds {

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double two_sided_p(double z) noexcept {
    return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
}

double ks_distance_normal(std::span<const double> sample) {
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = normal_cdf(x[i]);
        d = std::max({d, (static_cast<double>(i) + 1) / n - F, F - static_cast<double>(i) / n});
    }
    return d;
}

double kolmogorov_pvalue(double d, std::size_t n) noexcept {
    // Stephens' finite-n adjustment of the limiting statistic.
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double kolmogorov_critical(double alpha, std::size_t n) noexcept {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_pvalue(mid, n) > alpha ? lo : hi) = mid;
    }
    return hi;
}

} // namespace rbds
