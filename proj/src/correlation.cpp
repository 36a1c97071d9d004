#include "rbds/correlation.hpp"

#include <string>

#include "rbds/kernels.hpp"

namespace rbds {

CorrelationIntegralParts correlation_integral(const ProximityStructure& P, int m) {
    if (m < 1 || m > 64) fail(ErrorCode::InvalidArgument, "m must lie in [1, 64]");
    // Only one window pair is needed here; the variance formulas ask for more.
    const std::size_t T = P.size();
    if (T < static_cast<std::size_t>(m) + 1) fail(ErrorCode::SeriesTooShort, "need at least two windows");
    const double Tm = static_cast<double>(T - static_cast<std::size_t>(m) + 1);
    const double Tf = Tm - m + 1;
    const struct {
        double N, N0;
    } f{Tm * (Tm - 1) / 2, Tf > 1 ? Tf * (Tf - 1) / 2 : 0.0};
    const auto counts = kernels::window_counts(P.row(0), P.size(), P.words_per_row(), m);
    CorrelationIntegralParts out;
    out.N = f.N;
    out.N0 = f.N0;
    out.near_count = counts.near;
    out.far_count = counts.far;
    const double near = static_cast<double>(counts.near), far = static_cast<double>(counts.far);
    out.c_full = (near + far) / f.N;
    out.c_breve = near / f.N;
    out.c_tilde = f.N0 > 0 ? far / f.N0 : 0.0;
    return out;
}

} // namespace rbds
