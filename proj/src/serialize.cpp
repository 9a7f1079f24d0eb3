#include <bit>
#include <cstring>

#include "wrng/wallace.hpp"

// State file layout, all little-endian:
//   magic u32 0x57524E47 ("WRNG"), version u32 = 1,
//   pool_exponent u32, throwaway_f u32, scale_mode u8,
//   restart_interval u64, drift_check_period u64, seed u64, stream_id u64,
//   pass_count u64, numbers_emitted u64, avail u64, active-buffer flag u8,
//   uniform state (607 x u64 table, cursor_r u32, cursor_s u32, draws u64),
//   both pools: N x f64 x, N x f64 y, f64 tracked_sumsq, f64 withheld.
// Reals are IEEE-754 binary64 bit patterns.

namespace wrng {

namespace {

constexpr std::uint32_t kMagic = 0x57524E47;
constexpr std::uint32_t kVersion = 1;

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) {
    out.push_back(v);
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() { return take(1)[0]; }

    std::uint32_t u32() {
        auto b = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
        return v;
    }

    std::uint64_t u64() {
        auto b = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> take(std::size_t count) {
        if (remaining() < count)
            throw malformed_state_error(state_error_kind::truncated,
                                        "state bytes truncated");
        auto s = bytes_.subspan(pos_, count);
        pos_ += count;
        return s;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void check_range(bool ok, const char* what) {
    if (!ok) throw malformed_state_error(state_error_kind::field_range, what);
}

}  // namespace

std::vector<std::uint8_t> WallaceState::save_state() const {
    const std::uint32_t n = pools_[0].n();
    std::vector<std::uint8_t> out;
    out.reserve(74 + 4872 + 2 * (16ull * n + 16));

    put_u32(out, kMagic);
    put_u32(out, kVersion);
    put_u32(out, config_.pool_exponent);
    put_u32(out, config_.throwaway_f);
    put_u8(out, static_cast<std::uint8_t>(config_.scale_mode));
    put_u64(out, config_.restart_interval_passes);
    put_u64(out, config_.drift_check_period);
    put_u64(out, config_.seed);
    put_u64(out, config_.stream_id);
    put_u64(out, pass_count_);
    put_u64(out, numbers_emitted_);
    put_u64(out, avail_);
    put_u8(out, active_);

    for (std::uint64_t w : ustate_.lag_table) put_u64(out, w);
    put_u32(out, ustate_.cursor_r);
    put_u32(out, ustate_.cursor_s);
    put_u64(out, ustate_.draws);

    for (const Pool& pool : pools_) {
        for (double v : pool.x) put_f64(out, v);
        for (double v : pool.y) put_f64(out, v);
        put_f64(out, pool.tracked_sumsq);
        put_f64(out, pool.withheld);
    }
    return out;
}

WallaceState WallaceState::load_state(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    if (in.u32() != kMagic)
        throw malformed_state_error(state_error_kind::bad_magic,
                                    "not a generator state file");
    if (in.u32() != kVersion)
        throw malformed_state_error(state_error_kind::unsupported_version,
                                    "unsupported state version");

    WallaceState st;
    st.config_.pool_exponent = in.u32();
    check_range(st.config_.pool_exponent >= 8 && st.config_.pool_exponent <= 20,
                "pool_exponent out of [8, 20]");
    st.config_.throwaway_f = in.u32();
    check_range(st.config_.throwaway_f >= 1, "throwaway_f must be >= 1");
    std::uint8_t mode = in.u8();
    check_range(mode <= 1, "scale_mode out of range");
    st.config_.scale_mode = static_cast<ScaleMode>(mode);
    st.config_.restart_interval_passes = in.u64();
    st.config_.drift_check_period = in.u64();
    st.config_.seed = in.u64();
    st.config_.stream_id = in.u64();
    st.pass_count_ = in.u64();
    st.numbers_emitted_ = in.u64();
    st.avail_ = in.u64();
    const std::uint32_t n = 1u << st.config_.pool_exponent;
    check_range(st.avail_ <= 2ull * n - 1, "avail exceeds pool capacity");
    st.active_ = in.u8();
    check_range(st.active_ <= 1, "active-buffer flag out of range");

    for (std::uint64_t& w : st.ustate_.lag_table) w = in.u64();
    st.ustate_.cursor_r = in.u32();
    st.ustate_.cursor_s = in.u32();
    constexpr std::uint32_t kTable = UniformState::kTableSize;
    constexpr std::uint32_t kLag = UniformState::kShortLag;
    check_range(st.ustate_.cursor_r < kTable && st.ustate_.cursor_s < kTable,
                "uniform cursor out of range");
    check_range((st.ustate_.cursor_s + kTable - st.ustate_.cursor_r) % kTable ==
                    kTable - kLag,
                "uniform cursor distance violated");
    st.ustate_.seed = st.config_.seed;
    st.ustate_.stream_id = st.config_.stream_id;
    st.ustate_.draws = in.u64();

    for (Pool& pool : st.pools_) {
        pool.x.resize(n);
        pool.y.resize(n);
        for (double& v : pool.x) v = in.f64();
        for (double& v : pool.y) v = in.f64();
        pool.tracked_sumsq = in.f64();
        pool.withheld = in.f64();
    }
    check_range(in.remaining() == 0, "unexpected trailing bytes");
    return st;
}

}  // namespace wrng
