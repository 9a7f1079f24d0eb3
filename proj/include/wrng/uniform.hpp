#pragma once

#include <array>
#include <cstdint>

namespace wrng {

/// Additive lagged-Fibonacci uniform generator with lags (607, 273),
/// arithmetic modulo 2^64: x_n = x_{n-607} + x_{n-273}.
///
/// The lag table is seeded from a splitmix64 scramble of seed and stream_id,
/// then warmed up by discarding ten full table lengths. States with distinct
/// stream_ids produce independent sequences from the same seed, which is how
/// per-worker streams are created. A state is single-owner: it may be moved
/// between threads but never mutated concurrently.
struct UniformState {
    static constexpr std::uint32_t kTableSize = 607;
    static constexpr std::uint32_t kShortLag = 273;
    static constexpr std::uint32_t kMaxIntBound = 1u << 20;

    std::array<std::uint64_t, kTableSize> lag_table{};
    std::uint32_t cursor_r = 0;
    std::uint32_t cursor_s = kTableSize - kShortLag;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t draws = 0;

    UniformState() : UniformState(0, 0) {}
    UniformState(std::uint64_t seed, std::uint64_t stream_id);

    /// Next raw 64-bit word of the recurrence. Does not count as an output.
    std::uint64_t next_word();

    /// Next output in [0, 1), the top 53 bits of a raw word.
    double next_uniform();

    /// Floor(next_uniform() * m) for 1 <= m <= 2^20; bias is below 2^-33.
    /// Throws std::invalid_argument outside that range.
    std::uint32_t next_int_below(std::uint32_t m);
};

}  // namespace wrng
