#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// Purely functional: block(key, counter) -> 128 random bits. Every random
// quantity in the library is addressed by an explicit (seed, counter) pair,
// which is what makes sampling reproducible under any thread count.

namespace cfgf {

struct PhiloxBlock {
    std::array<std::uint32_t, 4> w;
};

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * ctr[2];
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

inline PhiloxBlock philox4x32(std::array<std::uint32_t, 4> ctr,
                              std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += detail::kPhiloxW0;
            key[1] += detail::kPhiloxW1;
        }
        detail::philox_round(ctr, key);
    }
    return PhiloxBlock{ctr};
}

// 128-bit counter packed from two 64-bit words, 64-bit key.
inline PhiloxBlock philox_block(std::uint64_t key, std::uint64_t ctr_lo,
                                std::uint64_t ctr_hi = 0) {
    return philox4x32(
        {static_cast<std::uint32_t>(ctr_lo),
         static_cast<std::uint32_t>(ctr_lo >> 32),
         static_cast<std::uint32_t>(ctr_hi),
         static_cast<std::uint32_t>(ctr_hi >> 32)},
        {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)});
}

inline std::uint64_t block_u64(const PhiloxBlock& b, int half) {
    return std::uint64_t(b.w[2 * half]) | (std::uint64_t(b.w[2 * half + 1]) << 32);
}

// Map u64 -> (0, 1]; the +1 keeps log() finite in Box-Muller.
inline double u64_to_unit(std::uint64_t x) {
    return (static_cast<double>(x) + 1.0) * 0x1p-64;
}

// Two independent N(0,1) draws addressed by (seed, index). Box-Muller on one
// Philox block; no rejection, so the draw count per index is fixed.
inline std::array<double, 2> gaussian_pair(std::uint64_t seed, std::uint64_t index,
                                           std::uint64_t stream = 0) {
    const PhiloxBlock b = philox_block(seed, index, stream);
    const double u1 = u64_to_unit(block_u64(b, 0));
    const double u2 = u64_to_unit(block_u64(b, 1));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

// Derive an independent 64-bit subseed, used for per-(L, i) seed lists.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
    return block_u64(philox_block(master, a, b), 0);
}

}  // namespace cfgf
