#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace hsde {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double x) const noexcept { return x > lo && x < hi; }
    bool lo_finite() const noexcept { return std::isfinite(lo); }
    bool hi_finite() const noexcept { return std::isfinite(hi); }

    bool operator==(const Interval&) const = default;
};

std::string to_string(const Interval& iv);

}  // namespace hsde
