#pragma once

#include <array>
#include <cstdint>

namespace floq {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Every random draw in this library is addressed by an explicit
// (seed, stream, coordinates) tuple instead of consuming a shared
// sequential state. That makes per-site phases independent of the
// site iteration order and lets the measurement emulator sample
// (step, qubit) cells in parallel without locks.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < kRounds; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr int kRounds = 10;

    static Counter single_round(const Counter& c, const Key& k) {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

// Stream tags keep unrelated consumers of the same user seed decorrelated.
enum class RngStream : std::uint32_t {
    kInitialPhases = 1,
    kMeasurement = 2,
};

inline Philox4x32::Counter rng_words(std::uint64_t seed, RngStream stream,
                                     std::uint32_t c0, std::uint32_t c1, std::uint32_t c2 = 0) {
    const Philox4x32::Key key = {static_cast<std::uint32_t>(seed),
                                 static_cast<std::uint32_t>(seed >> 32)};
    return Philox4x32::generate({c0, c1, c2, static_cast<std::uint32_t>(stream)}, key);
}

// Uniform double in [0, 1) with 53 random mantissa bits.
inline double to_unit_double(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double unit_uniform(std::uint64_t seed, RngStream stream,
                           std::uint32_t c0, std::uint32_t c1, std::uint32_t c2 = 0) {
    const auto w = rng_words(seed, stream, c0, c1, c2);
    return to_unit_double(w[0], w[1]);
}

}  // namespace floq
