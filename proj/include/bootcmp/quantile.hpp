#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "bootcmp/error.hpp"

namespace bootcmp {

/// v1 fixes the Hyndman–Fan type 7 convention (the default of most
/// statistical environments); the enum exists so results record which rule
/// produced them.
enum class QuantileRule { linear_type7 };

/// Quantile of an ascending-sorted sequence by linear interpolation:
/// h = (n-1)q, interpolate between floor(h) and ceil(h).
inline double quantile_sorted(std::span<const double> sorted, double q,
                              QuantileRule rule = QuantileRule::linear_type7) {
    (void)rule;
    if (sorted.empty()) throw GuardError("quantile of an empty distribution");
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("quantile level must be in [0,1]");

    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0 || lo + 1 == sorted.size()) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace bootcmp
