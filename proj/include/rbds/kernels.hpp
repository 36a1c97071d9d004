#pragma once

// Word-parallel kernels over the packed proximity matrix. Each kernel has a
// portable scalar reference and an AVX2 variant; the variant is chosen once
// at runtime from the CPU's feature flags.

#include <cstddef>
#include <cstdint>

namespace rbds::kernels {

enum class Isa { scalar, avx2 };

Isa detected_isa() noexcept;
Isa active_isa() noexcept;
// Pins the dispatch target (tests use this to compare variants). Requesting
// avx2 on a machine without it falls back to scalar.
void force_isa(Isa isa) noexcept;
const char* isa_name(Isa isa) noexcept;

struct WindowCounts {
    std::uint64_t near = 0; // pairs with 0 < s - t < m
    std::uint64_t far = 0;  // pairs with s - t >= m
};

// Row t of the packed matrix: bit s set iff |u[t] - u[s]| < eps.
// Padding bits past T are zero.
void build_rows(const double* u, std::size_t T, double eps,
                std::uint64_t* bits, std::size_t W);

// Counts window pairs t < s <= T-m whose m-fold run product
// prod_rho bits[t+rho][s+rho] is 1.
WindowCounts window_counts(const std::uint64_t* bits, std::size_t T,
                           std::size_t W, int m);

// out[x] = sum_s bits[x][s] * v[s]. v must hold W*64 entries, zero padded.
void masked_matvec(const std::uint64_t* bits, std::size_t T, std::size_t W,
                   const double* v, double* out);

namespace scalar {
void build_rows(const double* u, std::size_t T, double eps, std::uint64_t* bits, std::size_t W);
WindowCounts window_counts(const std::uint64_t* bits, std::size_t T, std::size_t W, int m);
void masked_matvec(const std::uint64_t* bits, std::size_t T, std::size_t W, const double* v, double* out);
} // namespace scalar

namespace avx2 {
void build_rows(const double* u, std::size_t T, double eps, std::uint64_t* bits, std::size_t W);
WindowCounts window_counts(const std::uint64_t* bits, std::size_t T, std::size_t W, int m);
void masked_matvec(const std::uint64_t* bits, std::size_t T, std::size_t W, const double* v, double* out);
} // namespace avx2

} // namespace rbds::kernels
