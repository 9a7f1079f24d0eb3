#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wrng/reference.hpp"

using namespace wrng;

TEST_CASE("box_muller_pair at u2 = 0 and u2 = 1/4") {
    NormalPair p = box_muller_pair(std::exp(-2.0), 0.0);
    CHECK(p.x == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-15));

    NormalPair q = box_muller_pair(std::exp(-2.0), 0.25);
    CHECK(std::abs(q.x - 0.0) < 1e-15);
    CHECK(std::abs(q.y - 2.0) < 1e-15);
}

TEST_CASE("box_muller_pair rejects u1 outside (0, 1)") {
    CHECK_THROWS_AS(box_muller_pair(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(box_muller_pair(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(box_muller_pair(-0.1, 0.5), std::invalid_argument);
}

TEST_CASE("box_muller radius identity: x^2 + y^2 = -2 ln u1") {
    UniformState s(11, 0);
    for (int i = 0; i < 10000; ++i) {
        double u1 = s.next_uniform();
        if (u1 == 0.0) u1 = 0x1.0p-53;
        double u2 = s.next_uniform();
        NormalPair p = box_muller_pair(u1, u2);
        double want = -2.0 * std::log(u1);
        CHECK(std::abs(p.x * p.x + p.y * p.y - want) <=
              4.0 * std::ldexp(want, -52));
    }
}

TEST_CASE("polar accepted branch at (0.6, 0)") {
    NormalPair p = polar_transform(0.6, 0.0);
    // 0.6 * sqrt(-2 ln 0.36 / 0.36), evaluated independently
    CHECK(p.x == doctest::Approx(1.4294413227075684).epsilon(1e-12));
    CHECK(p.y == 0.0);
}

TEST_CASE("polar sequence is deterministic") {
    UniformState a(9, 0), b(9, 0);
    for (int i = 0; i < 1000; ++i) {
        NormalPair pa = polar_next(a), pb = polar_next(b);
        CHECK(pa.x == pb.x);
        CHECK(pa.y == pb.y);
    }
}

TEST_CASE("polar second moment over 1e6 pairs") {
    UniformState s(12, 0);
    double sumsq = 0.0;
    const int pairs = 1000000;
    for (int i = 0; i < pairs; ++i) {
        NormalPair p = polar_next(s);
        sumsq += p.x * p.x + p.y * p.y;
    }
    CHECK(std::abs(sumsq / (2.0 * pairs) - 1.0) < 0.006);
}

TEST_CASE("polar acceptance rate is pi/4 within 0.01") {
    UniformState s(13, 0);
    const int pairs = 1000000;
    std::uint64_t before = s.draws;
    for (int i = 0; i < pairs; ++i) polar_next(s);
    double attempts = double(s.draws - before) / 2.0;
    double rate = pairs / attempts;
    CHECK(rate > 0.7754);
    CHECK(rate < 0.7954);
}

TEST_CASE("fill helpers apply mu and sigma") {
    UniformState a(21, 0), b(21, 0);
    std::vector<double> raw(101), shifted(101);
    box_muller_fill(a, raw);
    box_muller_fill(b, shifted, 5.0, 2.0);
    for (std::size_t i = 0; i < raw.size(); ++i)
        CHECK(shifted[i] == doctest::Approx(5.0 + 2.0 * raw[i]).epsilon(1e-15));
}
