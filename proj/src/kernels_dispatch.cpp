#include "rbds/kernels.hpp"

#include <atomic>

namespace rbds::kernels {

namespace {

Isa probe() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt")) return Isa::avx2;
#endif
    return Isa::scalar;
}

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{probe()};
    return isa;
}

} // namespace

Isa detected_isa() noexcept {
    static const Isa isa = probe();
    return isa;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) noexcept {
    if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
    current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void build_rows(const double* u, std::size_t T, double eps, std::uint64_t* bits, std::size_t W) {
    if (active_isa() == Isa::avx2) return avx2::build_rows(u, T, eps, bits, W);
    scalar::build_rows(u, T, eps, bits, W);
}

WindowCounts window_counts(const std::uint64_t* bits, std::size_t T, std::size_t W, int m) {
    if (active_isa() == Isa::avx2) return avx2::window_counts(bits, T, W, m);
    return scalar::window_counts(bits, T, W, m);
}

void masked_matvec(const std::uint64_t* bits, std::size_t T, std::size_t W, const double* v, double* out) {
    if (active_isa() == Isa::avx2) return avx2::masked_matvec(bits, T, W, v, out);
    scalar::masked_matvec(bits, T, W, v, out);
}

} // namespace rbds::kernels
