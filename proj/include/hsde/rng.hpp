#pragma once

#include <array>
#include <cstdint>

namespace hsde {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function.
Philox4x32Counter philox4x32(Philox4x32Counter counter, Philox4x32Key key);

/// Uniform in (0, 1) from the top 52 of 64 random bits.
double uniform_open(std::uint64_t bits);

/// Standard normals for one particle, keyed by (seed, stream) and indexed by step.
/// Each Philox block yields two normals (Box-Muller), so step n reads block n / 2.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream);

    double at(std::uint64_t step);
    double next() { return at(pos_++); }

private:
    Philox4x32Key key_;
    std::uint64_t stream_;
    std::uint64_t pos_ = 0;
    std::uint64_t cached_block_ = ~std::uint64_t{0};
    std::array<double, 2> cache_{};
};

}  // namespace hsde
