#include "rbds/kernels.hpp"

#include <bit>
#include <cmath>
#include <vector>

namespace rbds::kernels::scalar {

void build_rows(const double* u, std::size_t T, double eps, std::uint64_t* bits, std::size_t W) {
    for (std::size_t t = 0; t < T; ++t) {
        std::uint64_t* row = bits + t * W;
        for (std::size_t w = 0; w < W; ++w) row[w] = 0;
        const double ut = u[t];
        for (std::size_t s = 0; s < T; ++s) {
            if (std::fabs(ut - u[s]) < eps) row[s >> 6] |= std::uint64_t{1} << (s & 63);
        }
    }
}

namespace {

// Bits [from, to) of a packed word array.
std::uint64_t count_range(const std::uint64_t* w, std::size_t from, std::size_t to) {
    if (from >= to) return 0;
    std::size_t a = from >> 6, b = (to - 1) >> 6;
    std::uint64_t lo_mask = ~std::uint64_t{0} << (from & 63);
    std::uint64_t hi_mask = ~std::uint64_t{0} >> (63 - ((to - 1) & 63));
    if (a == b) return std::popcount(w[a] & lo_mask & hi_mask);
    std::uint64_t n = std::popcount(w[a] & lo_mask);
    for (std::size_t j = a + 1; j < b; ++j) n += std::popcount(w[j]);
    return n + std::popcount(w[b] & hi_mask);
}

// dst[j] &= (src >> shift)[j] for j in [j0, W).
void and_shifted(std::uint64_t* dst, const std::uint64_t* src, std::size_t W,
                 std::size_t j0, std::size_t shift) {
    std::size_t ws = shift >> 6, bs = shift & 63;
    for (std::size_t j = j0; j < W; ++j) {
        std::size_t k = j + ws;
        std::uint64_t lo = k < W ? src[k] : 0;
        std::uint64_t hi = k + 1 < W ? src[k + 1] : 0;
        dst[j] &= bs ? (lo >> bs) | (hi << (64 - bs)) : lo;
    }
}

} // namespace

WindowCounts window_counts(const std::uint64_t* bits, std::size_t T, std::size_t W, int m) {
    WindowCounts out;
    const std::size_t Tm = T - static_cast<std::size_t>(m) + 1;
    std::vector<std::uint64_t> acc(W);
    for (std::size_t t = 0; t + 1 < Tm; ++t) {
        const std::size_t j0 = (t + 1) >> 6;
        for (std::size_t j = j0; j < W; ++j) acc[j] = bits[t * W + j];
        for (int rho = 1; rho < m; ++rho)
            and_shifted(acc.data(), bits + (t + rho) * W, W, j0, static_cast<std::size_t>(rho));
        std::size_t near_end = std::min(t + static_cast<std::size_t>(m), Tm);
        out.near += count_range(acc.data(), t + 1, near_end);
        out.far += count_range(acc.data(), near_end, Tm);
    }
    return out;
}

void masked_matvec(const std::uint64_t* bits, std::size_t T, std::size_t W, const double* v, double* out) {
    for (std::size_t x = 0; x < T; ++x) {
        const std::uint64_t* row = bits + x * W;
        double sum = 0.0;
        for (std::size_t j = 0; j < W; ++j) {
            std::uint64_t w = row[j];
            while (w) {
                sum += v[(j << 6) + std::countr_zero(w)];
                w &= w - 1;
            }
        }
        out[x] = sum;
    }
}

} // namespace rbds::kernels::scalar
