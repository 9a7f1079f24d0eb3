#include "wrng/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wrng {

NormalPair box_muller_pair(double u1, double u2) {
    if (!(u1 > 0.0 && u1 < 1.0))
        throw std::invalid_argument("box_muller_pair: u1 must be in (0, 1)");
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

NormalPair box_muller_next(UniformState& us) {
    double u1 = us.next_uniform();
    if (u1 == 0.0) u1 = 0x1.0p-53;  // avoid the log singularity
    double u2 = us.next_uniform();
    return box_muller_pair(u1, u2);
}

NormalPair polar_transform(double v1, double v2) {
    double s = v1 * v1 + v2 * v2;
    double f = std::sqrt(-2.0 * std::log(s) / s);
    return {v1 * f, v2 * f};
}

NormalPair polar_next(UniformState& us) {
    for (;;) {
        double v1 = 2.0 * us.next_uniform() - 1.0;
        double v2 = 2.0 * us.next_uniform() - 1.0;
        double s = v1 * v1 + v2 * v2;
        if (s > 0.0 && s < 1.0) return polar_transform(v1, v2);
    }
}

namespace {

template <typename Next>
void fill_from_pairs(std::span<double> out, double mu, double sigma,
                     Next next) {
    std::size_t i = 0;
    while (i + 1 < out.size()) {
        NormalPair p = next();
        out[i++] = mu + sigma * p.x;
        out[i++] = mu + sigma * p.y;
    }
    if (i < out.size()) out[i] = mu + sigma * next().x;
}

}  // namespace

void box_muller_fill(UniformState& us, std::span<double> out, double mu,
                     double sigma) {
    fill_from_pairs(out, mu, sigma, [&] { return box_muller_next(us); });
}

void polar_fill(UniformState& us, std::span<double> out, double mu,
                double sigma) {
    fill_from_pairs(out, mu, sigma, [&] { return polar_next(us); });
}

}  // namespace wrng
