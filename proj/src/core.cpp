#include "rbds/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rbds/kernels.hpp"

namespace rbds {

const char* error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::InvalidPatternParams: return "InvalidPatternParams";
    case ErrorCode::PatternTooLarge: return "PatternTooLarge";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::ExponentNegative: return "ExponentNegative";
    case ErrorCode::NonStationaryParams: return "NonStationaryParams";
    case ErrorCode::ZeroResidual: return "ZeroResidual";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) fail(ErrorCode::SeriesTooShort, "series needs at least 2 values");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            fail(ErrorCode::NonFiniteInput, "non-finite value at index " + std::to_string(i));
}

double TimeSeries::mean() const noexcept {
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double TimeSeries::sd() const noexcept {
    const double mu = mean();
    double ss = 0.0;
    for (double v : values_) ss += (v - mu) * (v - mu);
    return std::sqrt(ss / static_cast<double>(values_.size() - 1));
}

void TestConfig::validate(std::size_t T, int min_m) const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        fail(ErrorCode::NonPositiveEpsilon, "epsilon must be positive and finite");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
    if (m < min_m) fail(ErrorCode::InvalidArgument, "m must be at least " + std::to_string(min_m));
    if (m > 64) fail(ErrorCode::InvalidArgument, "m above 64 is not supported");
    if (T < 2 * static_cast<std::size_t>(m))
        fail(ErrorCode::SeriesTooShort, "series length " + std::to_string(T) + " below 2m");
}

std::size_t rbds_min_length(int m) {
    // script_M(k) > 0 for every k <= m-1, and room for the largest union graph.
    return static_cast<std::size_t>(std::max(5 * m - 3, 4 * m));
}

CombinatoricFactors combinatoric_factors(std::size_t T, int m, bool for_rbds) {
    if (m < 1) fail(ErrorCode::InvalidArgument, "m must be positive");
    if (T < 2 * static_cast<std::size_t>(m))
        fail(ErrorCode::SeriesTooShort, "T=" + std::to_string(T) + " is below 2m");
    if (for_rbds && T < rbds_min_length(m))
        fail(ErrorCode::SeriesTooShort, "T=" + std::to_string(T) + " too short for the revised test at m=" +
                                            std::to_string(m));
    CombinatoricFactors f;
    f.T = T;
    f.m = m;
    f.T_m = T - static_cast<std::size_t>(m) + 1;
    const double tm = static_cast<double>(f.T_m);
    f.N = tm * (tm - 1) / 2;
    const double b = tm - m + 1;
    f.N0 = b * (b - 1) / 2;
    return f;
}

double CombinatoricFactors::c_ratio(int x) const {
    double r = 1.0;
    for (int j = 0; j <= x; ++j) r /= static_cast<double>(T) - j;
    return r;
}

double CombinatoricFactors::falling(int x) const {
    const double top = static_cast<double>(T_m) - m + 1;
    double r = 1.0;
    for (int j = 0; j < x; ++j) r *= top - j;
    return r;
}

double CombinatoricFactors::script_M(int k) const {
    const double a = static_cast<double>(T) - 4.0 * m - k + 3;
    return a * (a + 1);
}

double CombinatoricFactors::script_N(int k) const {
    const double a = static_cast<double>(T_m) - k;
    return a * (a - 1) / 2;
}

double epsilon_from_fraction(const TimeSeries& series, double frac) {
    if (!(frac > 0.0) || !std::isfinite(frac)) fail(ErrorCode::NonPositiveEpsilon, "fraction must be positive");
    const double sd = series.sd();
    if (!(sd > 0.0)) fail(ErrorCode::ConstantSeries, "sample variance is zero");
    return frac * sd;
}

ProximityStructure build_proximity(const TimeSeries& series, double epsilon) {
    if (!(epsilon > 0.0) || std::isnan(epsilon)) fail(ErrorCode::NonPositiveEpsilon, "epsilon must be positive");
    ProximityStructure p;
    const std::size_t T = series.size();
    p.T_ = T;
    p.W_ = (T + 63) / 64;
    p.eps_ = epsilon;
    p.bits_.assign(T * p.W_, 0);
    kernels::build_rows(series.values().data(), T, epsilon, p.bits_.data(), p.W_);

    // Sorted view: neighbourhoods are contiguous. The same |a-b| < eps
    // predicate is used so the ranges agree with the packed bits exactly.
    std::vector<double> sorted(series.values().begin(), series.values().end());
    std::sort(sorted.begin(), sorted.end());
    p.lo_.resize(T);
    p.hi_.resize(T);
    p.row_counts_.resize(T);
    for (std::size_t i = 0; i < T; ++i) {
        const double a = sorted[i];
        auto first = std::partition_point(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(i),
                                          [&](double y) { return !(std::fabs(a - y) < epsilon); });
        auto last = std::partition_point(sorted.begin() + static_cast<std::ptrdiff_t>(i), sorted.end(),
                                         [&](double y) { return std::fabs(a - y) < epsilon; });
        p.lo_[i] = static_cast<std::uint32_t>(first - sorted.begin());
        p.hi_[i] = static_cast<std::uint32_t>(last - sorted.begin());
    }
    for (std::size_t t = 0; t < T; ++t) {
        std::uint32_t n = 0;
        for (std::size_t w = 0; w < p.W_; ++w) n += static_cast<std::uint32_t>(__builtin_popcountll(p.row(t)[w]));
        p.row_counts_[t] = n;
    }
    return p;
}

} // namespace rbds
