#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/distributions/normal.hpp>

namespace mapstat {

struct Estimate {
    double point = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t effective_trials = 0;
};

// Two-sided normal quantile for a confidence level, e.g. 0.99 -> 2.5758.
inline double normal_quantile(double level) {
    const boost::math::normal standard;
    return boost::math::quantile(standard, 0.5 + level / 2.0);
}

inline Estimate make_estimate(double point, double std_error, double level, std::uint64_t trials,
                              std::uint64_t effective_trials) {
    const double half = normal_quantile(level) * std_error;
    return {point, std_error, point - half, point + half, trials, effective_trials};
}

// Proportion k/m with binomial standard error; the interval is clipped to [0, 1].
inline Estimate proportion_estimate(std::uint64_t hits, std::uint64_t total, double level,
                                    std::uint64_t trials) {
    const double p = static_cast<double>(hits) / static_cast<double>(total);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(total));
    Estimate e = make_estimate(p, se, level, trials, total);
    e.ci_low = std::max(0.0, e.ci_low);
    e.ci_high = std::min(1.0, e.ci_high);
    return e;
}

// Sample mean from running sums.
inline Estimate mean_estimate(double sum, double sum_sq, std::uint64_t count, double level) {
    const auto m = static_cast<double>(count);
    const double mean = sum / m;
    const double var = count > 1 ? std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0)) : 0.0;
    return make_estimate(mean, std::sqrt(var / m), level, count, count);
}

// Ratio of sample means ybar/xbar with a delta-method standard error using the
// sample covariance of the shared draws.
inline Estimate ratio_estimate(double sum_y, double sum_x, double sum_yy, double sum_xx,
                               double sum_xy, std::uint64_t count, double level) {
    const auto m = static_cast<double>(count);
    const double ybar = sum_y / m;
    const double xbar = sum_x / m;
    const double r = ybar / xbar;
    double se = 0.0;
    if (count > 1) {
        const double vyy = (sum_yy - m * ybar * ybar) / (m - 1.0);
        const double vxx = (sum_xx - m * xbar * xbar) / (m - 1.0);
        const double vxy = (sum_xy - m * xbar * ybar) / (m - 1.0);
        const double v = (vyy - 2.0 * r * vxy + r * r * vxx) / (xbar * xbar);
        se = std::sqrt(std::max(0.0, v) / m);
    }
    return make_estimate(r, se, level, count, count);
}

} // namespace mapstat
