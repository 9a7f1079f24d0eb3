#include "wrng/stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wrng {

UvPair to_uv(double x, double y) {
    if (x == 0.0 && y == 0.0) return {0.0, 0.0, true};
    double u = std::exp(-0.5 * (x * x + y * y));
    double v = y == 0.0 ? std::copysign(std::numbers::pi / 2, x)
                        : std::atan(x / y);
    return {u, v, false};
}

Chi2Report chi2_bins(std::span<const double> values, std::uint32_t k,
                     double lo, double hi) {
    if (k < 2) throw std::invalid_argument("chi2_bins: need at least 2 bins");
    if (!(lo < hi)) throw std::invalid_argument("chi2_bins: lo must be < hi");
    std::vector<std::uint64_t> counts(k, 0);
    const double width = hi - lo;
    for (double v : values) {
        if (!(v >= lo && v <= hi))
            throw std::invalid_argument("chi2_bins: value out of [lo, hi]");
        auto bin = static_cast<std::uint32_t>((v - lo) / width * k);
        if (bin >= k) bin = k - 1;  // v == hi, or rounding at the edge
        ++counts[bin];
    }
    const double expected = static_cast<double>(values.size()) / k;
    double statistic = 0.0;
    for (std::uint64_t c : counts) {
        double d = static_cast<double>(c) - expected;
        statistic += d * d / expected;
    }
    return {statistic, k - 1, chi2_sf(statistic, k - 1), k, values.size()};
}

namespace {

// Regularized incomplete gamma, lower (series) and upper (continued
// fraction), split at x = a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < 100000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi2_sf(double statistic, std::uint32_t dof) {
    if (statistic < 0.0 || dof < 1)
        throw std::invalid_argument("chi2_sf: need statistic >= 0, dof >= 1");
    if (statistic == 0.0) return 1.0;
    double a = 0.5 * dof;
    double x = 0.5 * statistic;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_contfrac(a, x);
}

MomentsReport moments(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("moments: empty input");
    const double n = static_cast<double>(values.size());
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (double v : values) {
        double v2 = v * v;
        s1 += v;
        s2 += v2;
        s4 += v2 * v2;
    }
    MomentsReport r;
    r.n = values.size();
    r.m1 = s1 / n;
    r.m2 = s2 / n;
    r.m4 = s4 / n;
    r.z1 = r.m1 * std::sqrt(n / 1.0);
    r.z2 = (r.m2 - 1.0) * std::sqrt(n / 2.0);
    r.z4 = (r.m4 - 3.0) * std::sqrt(n / 96.0);
    return r;
}

AutocorrReport autocorr_at_lag(std::span<const double> values,
                               std::size_t lag) {
    if (values.size() < lag + 2)
        throw std::invalid_argument("autocorr_at_lag: need n > lag + 1");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    const std::size_t pairs = values.size() - lag;
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < pairs; ++t) {
        double a = values[t] - mean;
        num += a * (values[t + lag] - mean);
        den += a * a;
    }
    if (den == 0.0)
        throw std::invalid_argument("autocorr_at_lag: zero-variance input");
    return {lag, num / den, pairs};
}

std::pair<double, double> sumsq_distribution_check(WallaceState& state,
                                                   std::uint64_t passes) {
    if (state.config().scale_mode != ScaleMode::chisq)
        throw std::invalid_argument(
            "sumsq_distribution_check: state must be in chisq mode");
    if (passes == 0)
        throw std::invalid_argument("sumsq_distribution_check: passes >= 1");
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = 0; i < passes; ++i) {
        double s = state.advance_pass().target_sumsq;
        sum += s;
        sumsq += s * s;
    }
    const double n = static_cast<double>(passes);
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    return {mean, var < 0.0 ? 0.0 : var};
}

}  // namespace wrng
