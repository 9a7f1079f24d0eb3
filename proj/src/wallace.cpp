#include "wrng/wallace.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wrng/reference.hpp"

namespace wrng {

double Pool::direct_sumsq() const {
    double q = 0.0;
    for (double v : x) q += v * v;
    for (double v : y) q += v * v;
    return q;
}

double Pool::max_abs() const {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    for (double v : y) m = std::max(m, std::abs(v));
    return m;
}

double chi2_target(double r, std::uint32_t nu) {
    assert(nu >= 2);
    double t = r + std::sqrt(2.0 * nu - 1.0);
    return 0.5 * t * t;
}

Rotation2 rotation_from_t(double t, std::uint32_t region) {
    double t2 = t * t;
    double c = (1.0 - t2) / (1.0 + t2);
    double s = 2.0 * t / (1.0 + t2);
    switch (region) {
        case 0: return {c, s};    // theta in [pi/6, pi/3]
        case 1: return {c, -s};   // theta in [-pi/3, -pi/6]
        default: return {-c, s};  // theta in [2pi/3, 5pi/6]
    }
}

Rotation2 rotation_from_uniform(UniformState& us) {
    constexpr double kTanLo = 0.26794919243112270;  // tan(pi/12) = 2 - sqrt(3)
    constexpr double kTanHi = 0.57735026918962576;  // tan(pi/6)  = 1/sqrt(3)
    double t = kTanLo + (kTanHi - kTanLo) * us.next_uniform();
    return rotation_from_t(t, us.next_int_below(3));
}

PassParams select_pass_params(UniformState& us, const Pool& pool,
                              ScaleMode mode) {
    PassParams p;
    p.alpha = us.next_int_below(2) == 0 ? 3 : 5;
    p.beta = us.next_int_below(2) == 0 ? 7 : 11;
    p.gamma = us.next_int_below(pool.n());
    p.delta = us.next_int_below(pool.n());
    p.rot = rotation_from_uniform(us);
    if (!(pool.tracked_sumsq > 0.0))
        throw corrupted_state_error(
            "select_pass_params: tracked sum of squares is not positive");
    if (mode == ScaleMode::chisq) {
        p.target_sumsq = chi2_target(pool.withheld, 2 * pool.n());
        p.scale = std::sqrt(p.target_sumsq / pool.tracked_sumsq);
    } else {
        p.scale = 1.0;
        p.target_sumsq = pool.tracked_sumsq;
    }
    return p;
}

std::vector<Segment> plan_segments(const PassParams& params, std::uint32_t n) {
    const std::uint64_t alpha = params.alpha;
    const std::uint64_t beta = params.beta;
    if (n == 0 || alpha == 0 || beta == 0 ||
        std::gcd<std::uint64_t>(alpha, n) != 1 ||
        std::gcd<std::uint64_t>(beta, n) != 1)
        throw std::invalid_argument("plan_segments: strides must be coprime to N");
    if (params.gamma >= n || params.delta >= n)
        throw std::invalid_argument("plan_segments: offsets must be in [0, N)");

    // Wrap points of one strided index: the first j with stride*j + off >= kN,
    // for each k reached on [0, N).
    auto wrap_points = [n](std::uint64_t stride, std::uint64_t off,
                           std::vector<std::uint32_t>& out) {
        for (std::uint64_t k = 1;; ++k) {
            std::uint64_t j = (k * n - off + stride - 1) / stride;
            if (j >= n) break;
            out.push_back(static_cast<std::uint32_t>(j));
        }
    };

    std::vector<std::uint32_t> breaks;
    breaks.reserve(params.alpha + params.beta);
    wrap_points(alpha, params.gamma, breaks);
    wrap_points(beta, params.delta, breaks);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.push_back(n);

    std::vector<Segment> segs;
    segs.reserve(breaks.size());
    std::uint32_t low = 0;
    for (std::uint32_t b : breaks) {
        std::int64_t wx = (static_cast<std::int64_t>(alpha) * low + params.gamma) / n;
        std::int64_t wy = (static_cast<std::int64_t>(beta) * low + params.delta) / n;
        segs.push_back({low, b - 1, params.gamma - wx * n, params.delta - wy * n});
        low = b;
    }
    return segs;
}

void regenerate(const Pool& src, Pool& dst, const PassParams& params) {
    const std::uint32_t n = src.n();
    assert(dst.n() == n);
    const double kc = params.rot.c * params.scale;
    const double ks = params.rot.s * params.scale;
    const double* sx = src.x.data();
    const double* sy = src.y.data();
    double* dx = dst.x.data();
    double* dy = dst.y.data();
    const std::int64_t a = params.alpha;
    const std::int64_t b = params.beta;
    for (const Segment& seg : plan_segments(params, n)) {
        const std::int64_t jx = seg.jx;
        const std::int64_t jy = seg.jy;
        const std::int64_t hi = seg.high;
        for (std::int64_t j = seg.low; j <= hi; ++j) {
            double xs = sx[a * j + jx];
            double ys = sy[b * j + jy];
            dx[j] = kc * xs + ks * ys;
            dy[j] = kc * ys - ks * xs;
        }
    }
    dst.tracked_sumsq = params.target_sumsq;
    dst.withheld = dst.y[n - 1];
}

WallaceState::WallaceState(const WallaceConfig& config)
    : ustate_(config.seed, config.stream_id), config_(config) {
    if (config.pool_exponent < 8 || config.pool_exponent > 20)
        throw std::invalid_argument("pool_exponent must be in [8, 20]");
    if (config.throwaway_f < 1)
        throw std::invalid_argument("throwaway_f must be >= 1");
    // An interval <= f would restart on every refill and never emit.
    if (config.restart_interval_passes > 0 &&
        config.restart_interval_passes <= config.throwaway_f)
        throw std::invalid_argument(
            "restart_interval_passes must be 0 or greater than throwaway_f");
    const std::size_t n = std::size_t{1} << config.pool_exponent;
    for (Pool& p : pools_) {
        p.x.assign(n, 0.0);
        p.y.assign(n, 0.0);
    }
    init_pool();
}

void WallaceState::init_pool() {
    Pool& pool = pools_[active_];
    // 2N pool values plus the withheld slot, in a fixed draw order; the
    // final pair's unused partner is dropped.
    box_muller_fill(ustate_, pool.x);
    box_muller_fill(ustate_, pool.y);
    pool.withheld = box_muller_next(ustate_).x;
    pool.tracked_sumsq = pool.direct_sumsq();
    avail_ = 0;
}

PassParams WallaceState::advance_pass() {
    Pool& src = pools_[active_];
    Pool& dst = pools_[1 - active_];
    PassParams params = select_pass_params(ustate_, src, config_.scale_mode);
    regenerate(src, dst, params);
    active_ = 1 - active_;
    ++pass_count_;
    avail_ = 0;
    return params;
}

namespace {

bool crossed(std::uint64_t before, std::uint64_t after, std::uint64_t period) {
    return period > 0 && after / period > before / period;
}

}  // namespace

void WallaceState::refill() {
    const std::uint64_t before = pass_count_;
    for (std::uint32_t i = 0; i < config_.throwaway_f; ++i) advance_pass();
    avail_ = 2ull * pool_size() - 1;
    if (crossed(before, pass_count_, config_.drift_check_period)) drift_check();
    if (config_.restart_interval_passes > 0 &&
        crossed(before, pass_count_, config_.restart_interval_passes))
        restart();
}

void WallaceState::fill(std::span<double> out, double mu, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("fill: sigma must be >= 0");
    const std::uint32_t n = pool_size();
    const std::uint64_t cap = 2ull * n - 1;
    std::size_t done = 0;
    while (done < out.size()) {
        if (avail_ == 0) refill();
        const Pool& pool = pools_[active_];
        std::uint64_t pos = cap - avail_;  // next emission index
        std::uint64_t take = std::min<std::uint64_t>(out.size() - done, avail_);
        std::uint64_t end = pos + take;
        for (std::uint64_t i = pos; i < std::min<std::uint64_t>(end, n); ++i)
            out[done++] = mu + sigma * pool.x[i];
        for (std::uint64_t i = std::max<std::uint64_t>(pos, n); i < end; ++i)
            out[done++] = mu + sigma * pool.y[i - n];
        avail_ -= take;
    }
    numbers_emitted_ += out.size();
}

std::vector<double> WallaceState::fill(std::size_t count, double mu,
                                       double sigma) {
    std::vector<double> out(count);
    fill(std::span<double>(out), mu, sigma);
    return out;
}

void WallaceState::drift_check() {
    Pool& pool = pools_[active_];
    double recomputed = pool.direct_sumsq();
    double rel = std::abs(recomputed / pool.tracked_sumsq - 1.0);
    if (!(rel <= 1e-3))
        throw corrupted_state_error(
            "drift_check: pool sum of squares off by relative " +
            std::to_string(rel) + "; the work area was likely overwritten");
    pool.tracked_sumsq = recomputed;
}

void WallaceState::restart() { init_pool(); }

std::vector<double> pool_stream_flawed(std::uint64_t seed,
                                       std::uint64_t stream_id,
                                       std::uint32_t pool_exponent,
                                       std::uint32_t gamma,
                                       std::size_t count) {
    WallaceConfig cfg;
    cfg.pool_exponent = pool_exponent;
    cfg.throwaway_f = 1;
    cfg.scale_mode = ScaleMode::fixed;
    cfg.seed = seed;
    cfg.stream_id = stream_id;
    WallaceState st(cfg);
    const std::uint32_t n = st.pool_size();
    if (gamma >= n)
        throw std::invalid_argument("pool_stream_flawed: gamma must be in [0, N)");

    constexpr double kCosPi6 = 0.86602540378443865;
    constexpr double kSinPi6 = 0.5;
    std::vector<double> out;
    out.reserve(count);
    Pool src = st.active_pool();
    Pool dst = src;
    while (out.size() < count) {
        PassParams p{1, 1, gamma, gamma, {kCosPi6, kSinPi6}, 1.0,
                     src.tracked_sumsq};
        regenerate(src, dst, p);
        std::swap(src, dst);
        for (double v : src.x) out.push_back(v);
        for (double v : src.y) out.push_back(v);
    }
    out.resize(count);
    return out;
}

std::vector<double> pool_stream_default(std::uint64_t seed,
                                        std::uint64_t stream_id,
                                        std::uint32_t pool_exponent,
                                        std::size_t count) {
    WallaceConfig cfg;
    cfg.pool_exponent = pool_exponent;
    cfg.seed = seed;
    cfg.stream_id = stream_id;
    WallaceState st(cfg);
    std::vector<double> out;
    out.reserve(count);
    while (out.size() < count) {
        st.advance_pass();
        const Pool& pool = st.active_pool();
        for (double v : pool.x) out.push_back(v);
        for (double v : pool.y) out.push_back(v);
    }
    out.resize(count);
    return out;
}

}  // namespace wrng
