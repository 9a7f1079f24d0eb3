#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "wrng/wallace.hpp"

namespace wrng {

struct Chi2Report {
    double statistic;
    std::uint32_t dof;
    double p_value;
    std::uint32_t bin_count;
    std::size_t sample_count;
};

struct MomentsReport {
    std::size_t n;
    double m1;  ///< sample mean
    double m2;  ///< sample second moment
    double m4;  ///< sample fourth moment
    // standardized deviations from (0, 1, 3) with variances (1, 2, 96)
    double z1;
    double z2;
    double z4;
};

struct AutocorrReport {
    std::size_t lag;
    double r;
    std::size_t n;  ///< effective pair count
};

struct UvPair {
    double u;
    double v;
    bool skip;  ///< set for the degenerate (0, 0) input
};

/// (x, y) -> (u, v) with u = exp(-(x^2+y^2)/2) and v = arctan(x/y); both are
/// uniform when (x, y) are independent N(0,1). v at y = 0 is sign(x)*pi/2;
/// the (0, 0) pair is flagged skip rather than an error.
UvPair to_uv(double x, double y);

/// Chi-squared goodness of fit against a uniform law on [lo, hi] with k
/// equal bins; values equal to hi land in the top bin. Out-of-range values
/// and k < 2 throw std::invalid_argument.
Chi2Report chi2_bins(std::span<const double> values, std::uint32_t k,
                     double lo, double hi);

/// Survival function of chi-squared(dof): the regularized upper incomplete
/// gamma Q(dof/2, statistic/2), series/continued-fraction split at the mean.
double chi2_sf(double statistic, std::uint32_t dof);

MomentsReport moments(std::span<const double> values);

/// r = sum (z_t - m)(z_{t+lag} - m) / sum (z_t - m)^2, both sums over the
/// overlapping range t in [0, n-lag), m the full-sample mean.
AutocorrReport autocorr_at_lag(std::span<const double> values,
                               std::size_t lag);

/// Advances the state pass by pass, recording each pass's chi-squared
/// target; returns (sample mean, population variance) of the targets.
/// Requires chisq mode.
std::pair<double, double> sumsq_distribution_check(WallaceState& state,
                                                   std::uint64_t passes);

}  // namespace wrng
