// Compiled with -mavx2 -mpopcnt; only reached when the CPU reports AVX2.
#include "rbds/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace rbds::kernels::avx2 {

void build_rows(const double* u, std::size_t T, double eps, std::uint64_t* bits, std::size_t W) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d veps = _mm256_set1_pd(eps);
    for (std::size_t t = 0; t < T; ++t) {
        std::uint64_t* row = bits + t * W;
        const __m256d ut = _mm256_set1_pd(u[t]);
        std::size_t s = 0;
        for (std::size_t w = 0; w < W; ++w) {
            std::uint64_t word = 0;
            std::size_t end = std::min(T, (w + 1) * 64);
            for (; s + 4 <= end; s += 4) {
                __m256d d = _mm256_andnot_pd(sign, _mm256_sub_pd(ut, _mm256_loadu_pd(u + s)));
                auto mask = static_cast<std::uint64_t>(_mm256_movemask_pd(_mm256_cmp_pd(d, veps, _CMP_LT_OQ)));
                word |= mask << (s & 63);
            }
            for (; s < end; ++s)
                if (std::fabs(u[t] - u[s]) < eps) word |= std::uint64_t{1} << (s & 63);
            row[w] = word;
        }
    }
}

namespace {

// Nibble-table popcount of four words, summed into 64-bit lanes.
inline __m256i popcount4(__m256i v) {
    const __m256i table = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                           0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(table, lo), _mm256_shuffle_epi8(table, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

std::uint64_t count_range(const std::uint64_t* w, std::size_t from, std::size_t to) {
    if (from >= to) return 0;
    std::size_t a = from >> 6, b = (to - 1) >> 6;
    std::uint64_t lo_mask = ~std::uint64_t{0} << (from & 63);
    std::uint64_t hi_mask = ~std::uint64_t{0} >> (63 - ((to - 1) & 63));
    if (a == b) return _mm_popcnt_u64(w[a] & lo_mask & hi_mask);
    std::uint64_t n = _mm_popcnt_u64(w[a] & lo_mask) + _mm_popcnt_u64(w[b] & hi_mask);
    std::size_t j = a + 1;
    __m256i acc = _mm256_setzero_si256();
    for (; j + 4 <= b; j += 4)
        acc = _mm256_add_epi64(acc, popcount4(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(w + j))));
    alignas(32) std::array<std::uint64_t, 4> lanes;
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes.data()), acc);
    n += lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; j < b; ++j) n += _mm_popcnt_u64(w[j]);
    return n;
}

void and_shifted(std::uint64_t* dst, const std::uint64_t* src, std::size_t W,
                 std::size_t j0, std::size_t shift) {
    const std::size_t ws = shift >> 6, bs = shift & 63;
    const __m128i rcount = _mm_cvtsi64_si128(static_cast<long long>(bs));
    const __m128i lcount = _mm_cvtsi64_si128(static_cast<long long>(64 - bs));
    std::size_t j = j0;
    // Vector body needs src[k+1 .. k+4] in range.
    for (; j + ws + 5 <= W; j += 4) {
        const std::uint64_t* p = src + j + ws;
        __m256i lo = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
        __m256i hi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + 1));
        __m256i sh = _mm256_or_si256(_mm256_srl_epi64(lo, rcount), _mm256_sll_epi64(hi, lcount));
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + j));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + j), _mm256_and_si256(d, sh));
    }
    for (; j < W; ++j) {
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
        std::copy(bits + t * W + j0, bits + t * W + W, acc.begin() + static_cast<std::ptrdiff_t>(j0));
        for (int rho = 1; rho < m; ++rho)
            and_shifted(acc.data(), bits + (t + rho) * W, W, j0, static_cast<std::size_t>(rho));
        std::size_t near_end = std::min(t + static_cast<std::size_t>(m), Tm);
        out.near += count_range(acc.data(), t + 1, near_end);
        out.far += count_range(acc.data(), near_end, Tm);
    }
    return out;
}

void masked_matvec(const std::uint64_t* bits, std::size_t T, std::size_t W, const double* v, double* out) {
    alignas(32) static const std::array<std::array<std::uint64_t, 4>, 16> lut = [] {
        std::array<std::array<std::uint64_t, 4>, 16> t{};
        for (int n = 0; n < 16; ++n)
            for (int b = 0; b < 4; ++b) t[n][b] = (n >> b) & 1 ? ~std::uint64_t{0} : 0;
        return t;
    }();
    for (std::size_t x = 0; x < T; ++x) {
        const std::uint64_t* row = bits + x * W;
        __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
        for (std::size_t j = 0; j < W; ++j) {
            std::uint64_t w = row[j];
            if (!w) continue;
            const double* vj = v + (j << 6);
            for (int q = 0; q < 16; q += 2) {
                auto m0 = _mm256_load_pd(reinterpret_cast<const double*>(lut[(w >> (4 * q)) & 15].data()));
                auto m1 = _mm256_load_pd(reinterpret_cast<const double*>(lut[(w >> (4 * q + 4)) & 15].data()));
                acc0 = _mm256_add_pd(acc0, _mm256_and_pd(m0, _mm256_loadu_pd(vj + 4 * q)));
                acc1 = _mm256_add_pd(acc1, _mm256_and_pd(m1, _mm256_loadu_pd(vj + 4 * q + 4)));
            }
        }
        alignas(32) std::array<double, 4> lanes;
        _mm256_store_pd(lanes.data(), _mm256_add_pd(acc0, acc1));
        out[x] = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    }
}

} // namespace rbds::kernels::avx2
