#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rbds/error.hpp"

namespace rbds {

// Raw sample u_1..u_T. Values are validated once at construction.
class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    double mean() const noexcept;
    // Sample standard deviation with the T-1 denominator.
    double sd() const noexcept;

private:
    std::vector<double> values_;
};

struct TestConfig {
    int m = 2;
    double epsilon = 0.5;
    double alpha = 0.05;
    // Revised test only: subtract the O(1/T) bias that squaring the plug-in
    // omega_1 puts into the mean. Off reproduces the plain plug-in mean.
    bool mean_correction = true;

    void validate(std::size_t T, int min_m) const;
};

// Integer bookkeeping shared by every variance formula. Counts are held as
// doubles; they are exact integers well below 2^53 for any practical T.
struct CombinatoricFactors {
    std::size_t T = 0;
    int m = 0;
    std::size_t T_m = 0;
    double N = 0;
    double N0 = 0;

    // prod_{j=0}^{x} 1/(T-j)
    double c_ratio(int x) const;
    // (T_m-m+1)(T_m-m)...(T_m-m+2-x)
    double falling(int x) const;
    // (T-4m-k+3)(T-4m-k+4)
    double script_M(int k) const;
    // C(T_m-k, 2)
    double script_N(int k) const;
};

CombinatoricFactors combinatoric_factors(std::size_t T, int m, bool for_rbds = false);

// Smallest T accepted by the revised test at embedding dimension m.
std::size_t rbds_min_length(int m);

double epsilon_from_fraction(const TimeSeries& series, double frac);

// Symmetric T x T matrix of strict closeness indicators |u_t - u_s| < eps,
// bit-packed by rows. A sorted view of the sample is kept alongside: in
// sorted order every row is a contiguous interval, which the pattern
// estimators use for O(T) neighbourhood sums.
class ProximityStructure {
public:
    std::size_t size() const noexcept { return T_; }
    std::size_t words_per_row() const noexcept { return W_; }
    double epsilon() const noexcept { return eps_; }

    const std::uint64_t* row(std::size_t t) const noexcept { return bits_.data() + t * W_; }
    bool bit(std::size_t t, std::size_t s) const noexcept {
        return (row(t)[s >> 6] >> (s & 63)) & 1u;
    }
    std::uint32_t row_count(std::size_t t) const noexcept { return row_counts_[t]; }
    std::span<const std::uint32_t> row_counts() const noexcept { return row_counts_; }

    // Neighbourhood of the i-th smallest value, as a half-open range of
    // sorted positions.
    std::uint32_t lo(std::size_t i) const noexcept { return lo_[i]; }
    std::uint32_t hi(std::size_t i) const noexcept { return hi_[i]; }

    friend ProximityStructure build_proximity(const TimeSeries& series, double epsilon);

private:
    std::size_t T_ = 0;
    std::size_t W_ = 0;
    double eps_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint32_t> row_counts_;
    std::vector<std::uint32_t> lo_, hi_;
};

ProximityStructure build_proximity(const TimeSeries& series, double epsilon);

} // namespace rbds
