/// @file rng.hpp
/// @brief Counter-based Philox4x32-10 generator and normal draws
///
/// Every draw is a pure function of (seed, counter), so particle streams do
/// not depend on thread scheduling.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace driftlab {

class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    /// Ten rounds of Philox on the 128-bit counter (c0, c1).
    Block operator()(std::uint64_t c0, std::uint64_t c1) const {
        Block ctr{static_cast<std::uint32_t>(c0), static_cast<std::uint32_t>(c0 >> 32),
                  static_cast<std::uint32_t>(c1), static_cast<std::uint32_t>(c1 >> 32)};
        std::array<std::uint32_t, 2> key = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    std::array<std::uint32_t, 2> key_;
};

/// Uniform in (0, 1) from two 32-bit words (53 significant bits).
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
    return (static_cast<double>(bits & ((1ULL << 53) - 1)) + 0.5) * 0x1.0p-53;
}

/// Two independent uniforms in (0, 1) for the given counter.
inline std::array<double, 2> uniform_pair(const Philox4x32& gen, std::uint64_t c0, std::uint64_t c1) {
    const auto b = gen(c0, c1);
    return {to_open_unit(b[0], b[1]), to_open_unit(b[2], b[3])};
}

/// Two independent standard normals (Box-Muller) for the given counter.
inline std::array<double, 2> normal_pair(const Philox4x32& gen, std::uint64_t c0, std::uint64_t c1) {
    const auto u = uniform_pair(gen, c0, c1);
    const double r = std::sqrt(-2.0 * std::log(u[0]));
    const double phi = 2.0 * M_PI * u[1];
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace driftlab
