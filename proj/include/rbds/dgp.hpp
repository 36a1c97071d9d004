#pragma once

#include <cstdint>
#include <limits>

#include "rbds/core.hpp"

namespace rbds {

// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Counter-based stream: draw n is mix64(key + (n+1) * golden). Any draw can
// be computed without the ones before it, and split() derives independent
// child streams, so replication r never depends on how work was scheduled.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix64(key_ + (++counter_) * kGolden); }
    CounterRng split(std::uint64_t stream) const noexcept;
    std::uint64_t key() const noexcept { return key_; }

    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Key of replication r under a master seed: mix64(master ^ mix64(r + golden)).
std::uint64_t substream_key(std::uint64_t master, std::uint64_t r) noexcept;

struct GarchParams {
    double omega0 = 1.0;
    double a1 = 0.1;
    double b1 = 0.1;
    std::size_t T = 1000;
    std::size_t burn_in = 500;
};

struct EgarchParams {
    double c_abs = 0.01;
    double c_sign = 0.0015;
    double b_log = 0.9;
    std::size_t T = 1000;
    std::size_t burn_in = 500;
};

TimeSeries gen_iid_normal(std::size_t T, std::uint64_t seed);
TimeSeries gen_iid_normal(std::size_t T, CounterRng rng);
TimeSeries gen_garch11(const GarchParams& params, std::uint64_t seed);
TimeSeries gen_garch11(const GarchParams& params, CounterRng rng);
TimeSeries gen_egarch11(const EgarchParams& params, std::uint64_t seed);
TimeSeries gen_egarch11(const EgarchParams& params, CounterRng rng);

enum class Transform { none, square, log_square };

// With floor set, |u| below 1e-300 is raised to 1e-300 before the log.
TimeSeries transform_residuals(const TimeSeries& series, Transform kind, bool floor = false);

} // namespace rbds
