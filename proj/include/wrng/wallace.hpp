#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wrng/errors.hpp"
#include "wrng/uniform.hpp"

namespace wrng {

/// A 2x2 rotation (cos t, sin t) with the angle kept away from multiples of
/// pi/2, so min(|c|, |s|) >= 1/2.
struct Rotation2 {
    double c;
    double s;
};

/// Parameters of one regeneration pass: strides alpha/beta, offsets
/// gamma/delta, the rotation, and the sum-of-squares correction.
/// scale = sqrt(target_sumsq / Q) with Q the pre-pass tracked sum of squares.
struct PassParams {
    std::uint32_t alpha;
    std::uint32_t beta;
    std::uint32_t gamma;
    std::uint32_t delta;
    Rotation2 rot;
    double scale;
    double target_sumsq;
};

/// The pool of 2N normal variates, stored as two arrays of N.
/// tracked_sumsq is the incrementally maintained sum of squares of all 2N
/// values; withheld is the one variate per pool that is never emitted and
/// feeds the next chi-squared target draw.
struct Pool {
    std::vector<double> x;
    std::vector<double> y;
    double tracked_sumsq = 0.0;
    double withheld = 0.0;

    std::uint32_t n() const { return static_cast<std::uint32_t>(x.size()); }

    /// Sum of squares recomputed directly: x[0..N-1] then y[0..N-1],
    /// accumulated left to right. init and drift checks share this order.
    double direct_sumsq() const;

    /// Largest |value| over both halves.
    double max_abs() const;
};

enum class ScaleMode : std::uint8_t {
    chisq = 0,  ///< per-pass rescaling to a chi-squared target (default)
    fixed = 1,  ///< scale 1; sum of squares conserved exactly
};

struct WallaceConfig {
    std::uint32_t pool_exponent = 10;  ///< N = 2^pool_exponent, in [8, 20]
    std::uint32_t throwaway_f = 3;     ///< 1/f of generated pools are emitted
    ScaleMode scale_mode = ScaleMode::chisq;
    std::uint64_t restart_interval_passes = 0;  ///< 0 = never restart
    std::uint64_t drift_check_period = 64;      ///< passes between audits; 0 = never
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// A maximal run of the regeneration loop over which both strided source
/// indices are affine with no modular wrap: for j in [low, high],
/// alpha*j + jx == (alpha*j + gamma) mod N and likewise for beta/jy.
struct Segment {
    std::uint32_t low;
    std::uint32_t high;
    std::int64_t jx;
    std::int64_t jy;
};

/// Target sum of squares: S = (r + sqrt(2 nu - 1))^2 / 2, an approximate
/// chi-squared(nu) sample when r is N(0,1). E S = nu, Var S = 2 nu - 1/2.
double chi2_target(double r, std::uint32_t nu);

/// (cos t, sin t) from t' = tan(t/2) drawn uniformly on
/// [tan(pi/12), tan(pi/6)], with one of three sign regions chosen
/// equiprobably; no trigonometric evaluation. Consumes one uniform and one
/// next_int_below(3), in that order.
Rotation2 rotation_from_uniform(UniformState& us);

/// Deterministic core of rotation_from_uniform, exposed for tests:
/// region 0 -> (C, S), 1 -> (C, -S), 2 -> (-C, S), with
/// C = (1 - t^2)/(1 + t^2), S = 2t/(1 + t^2).
Rotation2 rotation_from_t(double t, std::uint32_t region);

/// Fresh pass parameters: alpha from {3,5}, beta from {7,11}, gamma and
/// delta uniform on [0,N), a fresh rotation, and the scale for the given
/// mode. Throws corrupted_state_error if the pool's tracked sum of squares
/// is not positive.
PassParams select_pass_params(UniformState& us, const Pool& pool,
                              ScaleMode mode);

/// Splits [0, N-1] at the points where either strided index wraps.
/// Requires GCD(alpha, N) = GCD(beta, N) = 1 and gamma, delta in [0, N);
/// throws std::invalid_argument otherwise. Yields at most alpha + beta + 1
/// segments (alpha + beta - 1 when gamma < alpha and delta < beta).
std::vector<Segment> plan_segments(const PassParams& params, std::uint32_t n);

/// One pass per the segment plan: for each j,
///   dst.x[j] = k*c*src.x[a*j+jx] + k*s*src.y[b*j+jy]
///   dst.y[j] = k*c*src.y[b*j+jy] - k*s*src.x[a*j+jx]
/// with the scale folded into the matrix entries. No modular reduction runs
/// inside the per-j loop. Sets dst.tracked_sumsq to the target and withholds
/// dst.y[N-1].
void regenerate(const Pool& src, Pool& dst, const PassParams& params);

/// The complete generator: double-buffered pool, uniform state, counters.
/// Single-owner; create states with distinct stream_ids for parallel use.
class WallaceState {
public:
    /// Validates the config and fills the initial pool from Box-Muller
    /// variates (2N + 1 draws: the pool plus the withheld slot). No values
    /// are available until the first refill.
    explicit WallaceState(const WallaceConfig& config);

    /// One regeneration with fresh parameters; swaps buffers, bumps
    /// pass_count, and invalidates any unconsumed values. Returns the
    /// parameters used.
    PassParams advance_pass();

    /// throwaway_f passes, then exposes 2N - 1 values (all of x plus
    /// y[0..N-2]). Runs the drift audit and the optional restart when
    /// pass_count crosses their periods.
    void refill();

    /// Writes out.size() values mu + sigma * z, consuming the pool in order
    /// x[0..N-1], y[0..N-2] and refilling as needed. sigma < 0 throws
    /// std::invalid_argument.
    void fill(std::span<double> out, double mu = 0.0, double sigma = 1.0);
    std::vector<double> fill(std::size_t count, double mu = 0.0,
                             double sigma = 1.0);

    /// Recomputes the active pool's sum of squares. A relative disagreement
    /// above 1e-3 throws corrupted_state_error; anything below is treated as
    /// rounding drift and silently corrected.
    void drift_check();

    /// Refills the pool from Box-Muller variates drawn from the current
    /// (advanced) uniform state. Counters are preserved.
    void restart();

    std::vector<std::uint8_t> save_state() const;
    static WallaceState load_state(std::span<const std::uint8_t> bytes);

    const WallaceConfig& config() const { return config_; }
    std::uint32_t pool_size() const { return pools_[0].n(); }
    std::uint64_t pass_count() const { return pass_count_; }
    std::uint64_t numbers_emitted() const { return numbers_emitted_; }
    std::uint64_t avail() const { return avail_; }

    /// The live pool. Mutable access exists so tests can model a caller
    /// scribbling over the work area; the drift audit is the safety net.
    Pool& active_pool() { return pools_[active_]; }
    const Pool& active_pool() const { return pools_[active_]; }
    UniformState& uniform_state() { return ustate_; }

private:
    WallaceState() = default;
    void init_pool();

    Pool pools_[2];
    std::uint8_t active_ = 0;
    UniformState ustate_;
    WallaceConfig config_;
    std::uint64_t pass_count_ = 0;
    std::uint64_t avail_ = 0;
    std::uint64_t numbers_emitted_ = 0;
};

/// Diagnostic taps: the concatenated pool contents (x[0..N-1] then
/// y[0..N-1]) over consecutive passes, the stream in which stride-induced
/// correlations appear at lag 2N - gamma.
///
/// The flawed variant runs the discouraged unit-stride scheme: alpha = beta
/// = 1, gamma = delta fixed, rotation fixed at theta = pi/6, fixed-sum mode.
/// The default variant redraws recommended parameters every pass (chisq
/// mode).
std::vector<double> pool_stream_flawed(std::uint64_t seed,
                                       std::uint64_t stream_id,
                                       std::uint32_t pool_exponent,
                                       std::uint32_t gamma, std::size_t count);
std::vector<double> pool_stream_default(std::uint64_t seed,
                                        std::uint64_t stream_id,
                                        std::uint32_t pool_exponent,
                                        std::size_t count);

}  // namespace wrng
