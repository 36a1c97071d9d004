#pragma once

#include <span>

namespace rbds {

double normal_cdf(double x) noexcept;
// 2 * (1 - Phi(|z|)), computed from the upper tail to keep precision.
double two_sided_p(double z) noexcept;

// One-sample Kolmogorov-Smirnov distance of the sample against N(0,1).
double ks_distance_normal(std::span<const double> sample);
// Asymptotic P(D_n > d) from the Kolmogorov series.
double kolmogorov_pvalue(double d, std::size_t n) noexcept;
// Asymptotic critical value of D_n at level alpha.
double kolmogorov_critical(double alpha, std::size_t n) noexcept;

} // namespace rbds
