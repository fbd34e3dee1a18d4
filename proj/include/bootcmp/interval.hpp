#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bootcmp/error.hpp"
#include "bootcmp/normal.hpp"
#include "bootcmp/quantile.hpp"

namespace bootcmp {

enum class IntervalMethod { percentile, bca };

inline const char* to_string(IntervalMethod m) {
    return m == IntervalMethod::percentile ? "percentile" : "bca";
}

inline IntervalMethod interval_method_from_string(const std::string& s) {
    if (s == "percentile") return IntervalMethod::percentile;
    if (s == "bca") return IntervalMethod::bca;
    throw InputError("unknown interval method '" + s + "' (expected bca or percentile)");
}

/// Confidence interval for the observed difference, built from a bootstrap
/// distribution. `method` records how the cut points were chosen; after a
/// degenerate-acceleration fallback it reads percentile even when BCa was
/// requested.
struct IntervalEstimate {
    double point_estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    IntervalMethod method = IntervalMethod::percentile;
    std::uint64_t replicates_used = 0;
};

/// BCa internals, kept for auditability: the bias correction z0, the
/// jackknife acceleration a, whether the bootstrap proportion had to be
/// clamped away from 0/1, whether acceleration was undefined and the
/// percentile rule was used instead, and how many replicates scored as
/// degenerate (filled in by the comparison layer).
struct BcaDiagnostics {
    double z0 = 0.0;
    double acceleration = 0.0;
    bool clamped = false;
    bool percentile_fallback = false;
    std::int64_t degenerate_replicates = 0;
};

namespace detail {

inline std::vector<double> sorted_copy(std::span<const double> distribution) {
    std::vector<double> sorted(distribution.begin(), distribution.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

inline void check_distribution_size(std::size_t n, bool allow_small) {
    if (n == 0) throw GuardError("insufficient data: empty bootstrap distribution");
    if (n < 100 && !allow_small)
        throw GuardError("bootstrap distribution has only " + std::to_string(n) +
                         " replicates; need >= 100 (pass the small-replicates override to proceed)");
}

}  // namespace detail

/// Percentile interval: the alpha/2 and 1-alpha/2 quantiles of the bootstrap
/// distribution.
inline IntervalEstimate percentile_ci(std::span<const double> distribution, double theta_hat,
                                      double level, bool allow_small = false,
                                      QuantileRule rule = QuantileRule::linear_type7) {
    detail::check_distribution_size(distribution.size(), allow_small);
    if (!(level > 0.0 && level < 1.0))
        throw InputError("confidence level must be strictly inside (0,1)");

    const std::vector<double> sorted = detail::sorted_copy(distribution);
    const double alpha = 1.0 - level;
    IntervalEstimate est;
    est.point_estimate = theta_hat;
    est.lower = quantile_sorted(sorted, alpha / 2.0, rule);
    est.upper = quantile_sorted(sorted, 1.0 - alpha / 2.0, rule);
    est.level = level;
    est.method = IntervalMethod::percentile;
    est.replicates_used = distribution.size();
    return est;
}

/// Bias-corrected and accelerated interval.
///
///   z0 = Phi^-1((#{theta* < theta_hat} + 0.5 #{theta* = theta_hat}) / B)
///   a  = sum((m - t_i)^3) / (6 [sum((m - t_i)^2)]^{3/2})   over jackknife t_i
///   alpha_1 = Phi(z0 + (z0 + z_{a/2}) / (1 - a (z0 + z_{a/2}))), alpha_2 alike
///
/// The counted proportion is clamped into [1/(B+1), B/(B+1)] when every
/// replicate falls on one side of theta_hat. When the jackknife variance is
/// exactly zero the acceleration is undefined and the percentile interval is
/// returned with the fallback flag set.
inline std::pair<IntervalEstimate, BcaDiagnostics> bca_ci(std::span<const double> distribution,
                                                          double theta_hat,
                                                          std::span<const double> jackknife_values,
                                                          double level, bool allow_small = false,
                                                          QuantileRule rule = QuantileRule::linear_type7) {
    detail::check_distribution_size(distribution.size(), allow_small);
    if (jackknife_values.size() < 2)
        throw GuardError("BCa acceleration needs at least 2 jackknife values");
    if (!(level > 0.0 && level < 1.0))
        throw InputError("confidence level must be strictly inside (0,1)");

    BcaDiagnostics diag;

    double jack_mean = 0.0;
    for (double t : jackknife_values) jack_mean += t;
    jack_mean /= static_cast<double>(jackknife_values.size());
    double sum_sq = 0.0, sum_cu = 0.0;
    for (double t : jackknife_values) {
        const double d = jack_mean - t;
        sum_sq += d * d;
        sum_cu += d * d * d;
    }

    if (sum_sq == 0.0) {
        diag.percentile_fallback = true;
        return {percentile_ci(distribution, theta_hat, level, allow_small, rule), diag};
    }
    diag.acceleration = sum_cu / (6.0 * std::pow(sum_sq, 1.5));

    const auto b_count = static_cast<double>(distribution.size());
    std::int64_t below = 0, equal = 0;
    for (double v : distribution) {
        if (v < theta_hat)
            ++below;
        else if (v == theta_hat)
            ++equal;
    }
    double proportion = (static_cast<double>(below) + 0.5 * static_cast<double>(equal)) / b_count;
    const double p_min = 1.0 / (b_count + 1.0);
    const double p_max = b_count / (b_count + 1.0);
    if (proportion < p_min) {
        proportion = p_min;
        diag.clamped = true;
    } else if (proportion > p_max) {
        proportion = p_max;
        diag.clamped = true;
    }
    diag.z0 = normal_quantile(proportion);

    const double alpha = 1.0 - level;
    auto adjusted_level = [&](double tail_p) {
        const double w = diag.z0 + normal_quantile(tail_p);
        const double denom = 1.0 - diag.acceleration * w;
        double adjusted;
        if (denom <= 0.0 || !std::isfinite(adjusted = diag.z0 + w / denom)) {
            // past the pole of the BCa map; pin the cut point at the extreme
            diag.clamped = true;
            return w >= 0.0 ? 1.0 : 0.0;
        }
        return normal_cdf(adjusted);
    };
    const double alpha_lo = adjusted_level(alpha / 2.0);
    const double alpha_hi = adjusted_level(1.0 - alpha / 2.0);

    const std::vector<double> sorted = detail::sorted_copy(distribution);
    IntervalEstimate est;
    est.point_estimate = theta_hat;
    est.lower = quantile_sorted(sorted, alpha_lo, rule);
    est.upper = quantile_sorted(sorted, alpha_hi, rule);
    if (est.lower > est.upper) std::swap(est.lower, est.upper);
    est.level = level;
    est.method = IntervalMethod::bca;
    est.replicates_used = distribution.size();
    return {est, diag};
}

}  // namespace bootcmp
