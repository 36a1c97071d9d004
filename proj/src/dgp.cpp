#include "rbds/dgp.hpp"

#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace rbds {

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

CounterRng CounterRng::split(std::uint64_t stream) const noexcept {
    return CounterRng(mix64(key_ ^ mix64(stream + kGolden)));
}

std::uint64_t substream_key(std::uint64_t master, std::uint64_t r) noexcept {
    return mix64(master ^ mix64(r + CounterRng::kGolden));
}

TimeSeries gen_iid_normal(std::size_t T, CounterRng rng) {
    if (T < 2) fail(ErrorCode::SeriesTooShort, "T must be at least 2");
    boost::random::normal_distribution<double> normal;
    std::vector<double> x(T);
    for (auto& v : x) v = normal(rng);
    return TimeSeries(std::move(x));
}

TimeSeries gen_iid_normal(std::size_t T, std::uint64_t seed) { return gen_iid_normal(T, CounterRng(seed)); }

TimeSeries gen_garch11(const GarchParams& p, CounterRng rng) {
    if (!(p.omega0 > 0) || p.a1 < 0 || p.b1 < 0 || !(p.a1 + p.b1 < 1))
        fail(ErrorCode::NonStationaryParams, "GARCH(1,1) needs omega0 > 0, a1, b1 >= 0 and a1 + b1 < 1");
    if (p.T < 2) fail(ErrorCode::SeriesTooShort, "T must be at least 2");
    boost::random::normal_distribution<double> normal;
    std::vector<double> x(p.T);
    double h2 = p.omega0 / (1.0 - p.a1 - p.b1);
    for (std::size_t t = 0; t < p.burn_in + p.T; ++t) {
        const double xt = std::sqrt(h2) * normal(rng);
        if (t >= p.burn_in) x[t - p.burn_in] = xt;
        h2 = p.omega0 + p.a1 * xt * xt + p.b1 * h2;
    }
    return TimeSeries(std::move(x));
}

TimeSeries gen_garch11(const GarchParams& p, std::uint64_t seed) { return gen_garch11(p, CounterRng(seed)); }

TimeSeries gen_egarch11(const EgarchParams& p, CounterRng rng) {
    if (!(std::fabs(p.b_log) < 1)) fail(ErrorCode::NonStationaryParams, "EGARCH(1,1) needs |b_log| < 1");
    if (p.T < 2) fail(ErrorCode::SeriesTooShort, "T must be at least 2");
    boost::random::normal_distribution<double> normal;
    std::vector<double> x(p.T);
    double logh2 = 0.0;
    for (std::size_t t = 0; t < p.burn_in + p.T; ++t) {
        const double h = std::exp(0.5 * logh2);
        const double e = normal(rng);
        const double xt = h * e;
        if (t >= p.burn_in) x[t - p.burn_in] = xt;
        logh2 = p.c_abs * std::fabs(e) + p.c_sign * e + p.b_log * logh2;
    }
    return TimeSeries(std::move(x));
}

TimeSeries gen_egarch11(const EgarchParams& p, std::uint64_t seed) { return gen_egarch11(p, CounterRng(seed)); }

TimeSeries transform_residuals(const TimeSeries& series, Transform kind, bool floor) {
    std::vector<double> out(series.values().begin(), series.values().end());
    switch (kind) {
    case Transform::none: break;
    case Transform::square:
        for (auto& v : out) v *= v;
        break;
    case Transform::log_square:
        for (std::size_t i = 0; i < out.size(); ++i) {
            double a = std::fabs(out[i]);
            if (floor && a < 1e-300) a = 1e-300;
            if (a == 0.0) fail(ErrorCode::ZeroResidual, "zero residual at index " + std::to_string(i));
            out[i] = 2.0 * std::log(a);
        }
        break;
    }
    return TimeSeries(std::move(out));
}

} // namespace rbds
