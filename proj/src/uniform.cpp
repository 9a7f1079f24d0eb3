#include "wrng/uniform.hpp"

#include <bit>
#include <stdexcept>

namespace wrng {

namespace {

// splitmix64 finalizer over a counter. The finalizer is a bijection and the
// counter inputs are distinct, so any 607 consecutive outputs contain at
// most one zero: the seeded lag table can never be all zeros.
std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

UniformState::UniformState(std::uint64_t seed_in, std::uint64_t stream_in)
    : seed(seed_in), stream_id(stream_in) {
    std::uint64_t s = seed_in ^ std::rotl(stream_in, 32);
    for (auto& w : lag_table) w = splitmix64(s);
    cursor_r = 0;
    cursor_s = kTableSize - kShortLag;
    // Warm up: ten full table lengths decouple the output from the scrambler.
    for (std::uint32_t i = 0; i < 10 * kTableSize; ++i) next_word();
    draws = 0;
}

std::uint64_t UniformState::next_word() {
    std::uint64_t w = lag_table[cursor_r] + lag_table[cursor_s];
    lag_table[cursor_r] = w;
    if (++cursor_r == kTableSize) cursor_r = 0;
    if (++cursor_s == kTableSize) cursor_s = 0;
    return w;
}

double UniformState::next_uniform() {
    ++draws;
    return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
}

std::uint32_t UniformState::next_int_below(std::uint32_t m) {
    if (m < 1 || m > kMaxIntBound)
        throw std::invalid_argument("next_int_below: m must be in [1, 2^20]");
    return static_cast<std::uint32_t>(next_uniform() * m);
}

}  // namespace wrng
