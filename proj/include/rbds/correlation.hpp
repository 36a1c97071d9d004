#pragma once

#include "rbds/core.hpp"

namespace rbds {

struct CorrelationIntegralParts {
    double c_full = 0;  // fraction of window pairs t < s that are close
    double c_breve = 0; // overlapping-window pairs (0 < s-t < m), over N
    double c_tilde = 0; // disjoint-window pairs (s-t >= m), over N0
    double N = 0;
    double N0 = 0;
    std::uint64_t near_count = 0;
    std::uint64_t far_count = 0;
};

CorrelationIntegralParts correlation_integral(const ProximityStructure& P, int m);

} // namespace rbds
