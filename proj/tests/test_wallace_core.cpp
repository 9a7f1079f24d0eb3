#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "wrng/reference.hpp"
#include "wrng/wallace.hpp"

using namespace wrng;

namespace {

// Oracle: per-j modular indexing, same arithmetic expression as regenerate.
void regenerate_naive(const Pool& src, Pool& dst, const PassParams& p) {
    const std::uint32_t n = src.n();
    const double kc = p.rot.c * p.scale;
    const double ks = p.rot.s * p.scale;
    for (std::uint32_t j = 0; j < n; ++j) {
        double xs = src.x[(std::uint64_t(p.alpha) * j + p.gamma) % n];
        double ys = src.y[(std::uint64_t(p.beta) * j + p.delta) % n];
        dst.x[j] = kc * xs + ks * ys;
        dst.y[j] = kc * ys - ks * xs;
    }
    dst.tracked_sumsq = p.target_sumsq;
    dst.withheld = dst.y[n - 1];
}

Pool random_pool(UniformState& us, std::uint32_t n) {
    Pool p;
    p.x.resize(n);
    p.y.resize(n);
    box_muller_fill(us, p.x);
    box_muller_fill(us, p.y);
    p.withheld = box_muller_next(us).x;
    p.tracked_sumsq = p.direct_sumsq();
    return p;
}

}  // namespace

TEST_CASE("chi2_target matches Eq. values") {
    CHECK(chi2_target(0.0, 2048) == doctest::Approx(2047.5).epsilon(1e-12));
    CHECK(std::abs(chi2_target(1.0, 2048) - 2111.9921870231046) < 0.01);
}

TEST_CASE("chi2_target has mean nu over normal inputs") {
    UniformState us(31, 0);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n / 2; ++i) {
        NormalPair p = box_muller_next(us);
        sum += chi2_target(p.x, 2048) + chi2_target(p.y, 2048);
    }
    CHECK(std::abs(sum / n - 2048.0) < 20.0);
}

TEST_CASE("rotation at t = tan(pi/12), region 0 is (cos pi/6, sin pi/6)") {
    Rotation2 r = rotation_from_t(2.0 - std::sqrt(3.0), 0);
    CHECK(std::abs(r.c - std::sqrt(3.0) / 2.0) < 1e-15);
    CHECK(std::abs(r.s - 0.5) < 1e-15);
}

TEST_CASE("rotations are unit and keep both entries >= 1/2") {
    UniformState us(32, 0);
    for (int i = 0; i < 10000; ++i) {
        Rotation2 r = rotation_from_uniform(us);
        CHECK(std::abs(r.c * r.c + r.s * r.s - 1.0) < 1e-14);
        CHECK(std::min(std::abs(r.c), std::abs(r.s)) >= 0.5 - 1e-14);
    }
}

TEST_CASE("pass params: sets, gcd, scale") {
    UniformState us(33, 0);
    Pool pool = random_pool(us, 1024);

    int a3 = 0, b7 = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        PassParams p = select_pass_params(us, pool, ScaleMode::fixed);
        CHECK((p.alpha == 3 || p.alpha == 5));
        CHECK((p.beta == 7 || p.beta == 11));
        CHECK(std::gcd(p.alpha, 1024u) == 1u);
        CHECK(std::gcd(p.beta, 1024u) == 1u);
        CHECK(p.gamma < 1024u);
        CHECK(p.delta < 1024u);
        CHECK(p.scale == 1.0);
        CHECK(p.target_sumsq == pool.tracked_sumsq);
        a3 += p.alpha == 3;
        b7 += p.beta == 7;
    }
    CHECK(std::abs(double(a3) / n - 0.5) < 0.02);
    CHECK(std::abs(double(b7) / n - 0.5) < 0.02);

    PassParams pc = select_pass_params(us, pool, ScaleMode::chisq);
    CHECK(pc.target_sumsq == doctest::Approx(chi2_target(pool.withheld, 2048)));
    CHECK(pc.scale ==
          doctest::Approx(std::sqrt(pc.target_sumsq / pool.tracked_sumsq)));

    pool.tracked_sumsq = 0.0;
    CHECK_THROWS_AS(select_pass_params(us, pool, ScaleMode::chisq),
                    corrupted_state_error);
}

TEST_CASE("segment plan: counts and exact index equivalence") {
    SUBCASE("alpha=3 beta=5 gamma=delta=0 gives at most 7 segments") {
        for (std::uint32_t n : {256u, 1024u, 4096u}) {
            PassParams p{3, 5, 0, 0, {1.0, 0.0}, 1.0, 1.0};
            CHECK(plan_segments(p, n).size() <= 7);
        }
    }
    SUBCASE("unit strides, zero offsets give one segment") {
        PassParams p{1, 1, 0, 0, {1.0, 0.0}, 1.0, 1.0};
        auto segs = plan_segments(p, 512);
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].low == 0);
        CHECK(segs[0].high == 511);
        CHECK(segs[0].jx == 0);
        CHECK(segs[0].jy == 0);
    }
    SUBCASE("offsets reproduce the modular indices everywhere") {
        PassParams p{3, 7, 5, 11, {1.0, 0.0}, 1.0, 1.0};
        const std::uint32_t n = 256;
        auto segs = plan_segments(p, n);
        std::uint32_t covered = 0;
        for (const Segment& s : segs) {
            for (std::uint64_t j = s.low; j <= s.high; ++j, ++covered) {
                CHECK(std::int64_t(3 * j) + s.jx == std::int64_t((3 * j + 5) % n));
                CHECK(std::int64_t(7 * j) + s.jy == std::int64_t((7 * j + 11) % n));
            }
        }
        CHECK(covered == n);
    }
    SUBCASE("invalid strides and offsets are rejected") {
        PassParams even{2, 7, 0, 0, {1.0, 0.0}, 1.0, 1.0};
        CHECK_THROWS_AS(plan_segments(even, 256), std::invalid_argument);
        PassParams big{3, 7, 256, 0, {1.0, 0.0}, 1.0, 1.0};
        CHECK_THROWS_AS(plan_segments(big, 256), std::invalid_argument);
    }
    SUBCASE("segment count stays within alpha + beta + 1 for random offsets") {
        UniformState us(34, 0);
        for (int i = 0; i < 200; ++i) {
            PassParams p = select_pass_params(us, random_pool(us, 256),
                                              ScaleMode::fixed);
            auto segs = plan_segments(p, 256);
            CHECK(segs.size() <= p.alpha + p.beta + 1);
            // partition check
            std::uint32_t next = 0;
            for (const Segment& s : segs) {
                CHECK(s.low == next);
                CHECK(s.high >= s.low);
                next = s.high + 1;
            }
            CHECK(next == 256);
        }
    }
}

TEST_CASE("regenerate applies the example matrix") {
    Pool src, dst;
    src.x.assign(256, 0.0);
    src.y.assign(256, 0.0);
    dst = src;
    src.x[0] = 5.0;
    src.tracked_sumsq = 25.0;
    PassParams p{1, 1, 0, 0, {0.8, 0.6}, 1.0, 25.0};
    regenerate(src, dst, p);
    CHECK(dst.x[0] == 4.0);
    CHECK(dst.y[0] == -3.0);
}

TEST_CASE("fixed-mode pass conserves the sum of squares") {
    UniformState us(35, 0);
    Pool src = random_pool(us, 1024);
    Pool dst = src;
    double before = src.direct_sumsq();
    for (int i = 0; i < 20; ++i) {
        PassParams p = select_pass_params(us, src, ScaleMode::fixed);
        regenerate(src, dst, p);
        std::swap(src, dst);
        CHECK(std::abs(src.direct_sumsq() / before - 1.0) < 1e-12);
    }
}

TEST_CASE("fixed-mode pass permutes pair norms") {
    UniformState us(36, 0);
    Pool src = random_pool(us, 256);
    Pool dst = src;
    PassParams p = select_pass_params(us, src, ScaleMode::fixed);
    regenerate(src, dst, p);

    std::vector<double> in(256), out(256);
    for (std::uint32_t j = 0; j < 256; ++j) {
        std::uint32_t ix = (p.alpha * j + p.gamma) % 256;
        std::uint32_t iy = (p.beta * j + p.delta) % 256;
        in[j] = src.x[ix] * src.x[ix] + src.y[iy] * src.y[iy];
        out[j] = dst.x[j] * dst.x[j] + dst.y[j] * dst.y[j];
    }
    for (std::uint32_t j = 0; j < 256; ++j)
        CHECK(std::abs(out[j] - in[j]) <= 1e-12 * (1.0 + in[j]));
}

TEST_CASE("segmented regeneration is bit-identical to the modular oracle") {
    UniformState us(37, 0);
    for (int round = 0; round < 25; ++round) {
        Pool src = random_pool(us, 256);
        Pool seg = src, naive = src;
        PassParams p = select_pass_params(us, src, ScaleMode::chisq);
        regenerate(src, seg, p);
        regenerate_naive(src, naive, p);
        for (std::uint32_t j = 0; j < 256; ++j) {
            CHECK(seg.x[j] == naive.x[j]);
            CHECK(seg.y[j] == naive.y[j]);
        }
        CHECK(seg.withheld == naive.withheld);
    }
}

TEST_CASE("affine index map is a bijection when strides are odd") {
    UniformState us(38, 0);
    for (int round = 0; round < 50; ++round) {
        std::uint32_t n = 256u << us.next_int_below(3);
        std::uint32_t stride = 2 * us.next_int_below(64) + 1;
        std::uint32_t off = us.next_int_below(n);
        std::vector<bool> hit(n, false);
        for (std::uint64_t j = 0; j < n; ++j)
            hit[(std::uint64_t(stride) * j + off) % n] = true;
        CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
    }
}
