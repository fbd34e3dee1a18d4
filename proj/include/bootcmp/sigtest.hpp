#pragma once

#include <cmath>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "bootcmp/error.hpp"
#include "bootcmp/evaluation.hpp"
#include "bootcmp/metrics.hpp"
#include "bootcmp/resampling.hpp"
#include "bootcmp/rng.hpp"

namespace bootcmp {

enum class Alternative { two_sided, greater, less };

inline const char* to_string(Alternative a) {
    switch (a) {
        case Alternative::two_sided: return "two-sided";
        case Alternative::greater: return "greater";
        case Alternative::less: return "less";
    }
    return "two-sided";
}

inline Alternative alternative_from_string(const std::string& s) {
    if (s == "two-sided") return Alternative::two_sided;
    if (s == "greater") return Alternative::greater;
    if (s == "less") return Alternative::less;
    throw InputError("unknown alternative '" + s + "' (expected two-sided, greater or less)");
}

enum class PermutationMode { monte_carlo, exact };

inline const char* to_string(PermutationMode m) {
    return m == PermutationMode::monte_carlo ? "monte_carlo" : "exact";
}

/// Fisher-Pitman test outcome. In monte_carlo mode the p-value uses the
/// add-one estimator (count+1)/(R+1); in exact mode the raw proportion
/// count / 2^N over the full enumeration.
struct PermutationResult {
    double p_value = 1.0;
    double observed_stat = 0.0;  // the full-set metric difference
    std::uint64_t permutations = 0;
    PermutationMode mode = PermutationMode::monte_carlo;
    std::uint64_t as_or_more_extreme = 0;
    Alternative alternative = Alternative::two_sided;
};

namespace detail {

// |d*| comparisons carry a small tolerance so float noise in recomputed
// metrics cannot flip a tie.
inline constexpr double kTieTolerance = 1e-12;

inline bool counts_as_extreme(double permuted, double observed, Alternative alt) {
    switch (alt) {
        case Alternative::two_sided: return std::fabs(permuted) >= std::fabs(observed) - kTieTolerance;
        case Alternative::greater: return permuted >= observed - kTieTolerance;
        case Alternative::less: return permuted <= observed + kTieTolerance;
    }
    return false;
}

/// Applies a swap mask: where mask is set, systems A and B exchange their
/// predictions on that instance.
struct SwapScratch {
    std::vector<std::int32_t> a_codes, b_codes;
    std::vector<double> a_reals, b_reals;
};

inline void gather_swapped(const ColumnView& a, const ColumnView& b,
                           const std::vector<std::uint8_t>& mask, SwapScratch& scratch,
                           ColumnView& a_out, ColumnView& b_out) {
    const std::size_t n = mask.size();
    if (a.kind == ValueKind::categorical) {
        scratch.a_codes.resize(n);
        scratch.b_codes.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            scratch.a_codes[i] = mask[i] ? b.codes[i] : a.codes[i];
            scratch.b_codes[i] = mask[i] ? a.codes[i] : b.codes[i];
        }
        a_out = {ValueKind::categorical, scratch.a_codes, {}};
        b_out = {ValueKind::categorical, scratch.b_codes, {}};
    } else {
        scratch.a_reals.resize(n);
        scratch.b_reals.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            scratch.a_reals[i] = mask[i] ? b.reals[i] : a.reals[i];
            scratch.b_reals[i] = mask[i] ? a.reals[i] : b.reals[i];
        }
        a_out = {ValueKind::real, {}, scratch.a_reals};
        b_out = {ValueKind::real, {}, scratch.b_reals};
    }
}

}  // namespace detail

/// Monte Carlo Fisher-Pitman test for paired samples: R random pair-swap
/// assignments, metric difference recomputed in full on each (the statistic
/// must cover metrics that do not decompose per instance, e.g. Pearson r).
inline PermutationResult fisher_pitman_mc(const PairedEvaluationSet& eval,
                                          const std::string& system_a,
                                          const std::string& system_b, const MetricSpec& metric,
                                          std::uint64_t replicates, std::uint64_t seed,
                                          Alternative alternative = Alternative::two_sided,
                                          bool allow_small = false, unsigned workers = 1) {
    if (replicates < 100 && !allow_small)
        throw GuardError("permutation replicates = " + std::to_string(replicates) +
                         " is below 100; pass the small-replicates override to proceed");
    if (replicates < 1) throw GuardError("permutation replicate count must be positive");
    check_metric_applicable(metric, eval);

    const ColumnView gold = eval.gold().view();
    const ColumnView a = eval.predictions(system_a).view();
    const ColumnView b = eval.predictions(system_b).view();
    const std::size_t n = eval.n_instances();
    const double observed = metric(gold, a, nullptr) - metric(gold, b, nullptr);
    const ReplicateStream stream(seed, StreamPurpose::permutation);

    std::uint64_t extreme_total = 0;
    std::mutex merge_mutex;
    detail::parallel_chunks(replicates, workers, [&](std::uint64_t begin, std::uint64_t end) {
        detail::SwapScratch scratch;
        ColumnView a_view, b_view;
        std::uint64_t extreme = 0;
        for (std::uint64_t r = begin; r < end; ++r) {
            const std::vector<std::uint8_t> mask = permutation_swap_mask(n, r, stream);
            detail::gather_swapped(a, b, mask, scratch, a_view, b_view);
            const double permuted = metric(gold, a_view, nullptr) - metric(gold, b_view, nullptr);
            if (detail::counts_as_extreme(permuted, observed, alternative)) ++extreme;
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        extreme_total += extreme;
    });

    PermutationResult result;
    result.observed_stat = observed;
    result.permutations = replicates;
    result.mode = PermutationMode::monte_carlo;
    result.as_or_more_extreme = extreme_total;
    result.alternative = alternative;
    // add-one estimator: never reports p = 0 from a finite resample
    result.p_value = (static_cast<double>(extreme_total) + 1.0) / (static_cast<double>(replicates) + 1.0);
    return result;
}

/// Exact Fisher-Pitman test: all 2^N pair-swap assignments enumerated.
/// Serves as the oracle for the Monte Carlo variant; guarded to N <= 20.
inline PermutationResult fisher_pitman_exact(const PairedEvaluationSet& eval,
                                             const std::string& system_a,
                                             const std::string& system_b, const MetricSpec& metric,
                                             Alternative alternative = Alternative::two_sided,
                                             unsigned workers = 1) {
    const std::size_t n = eval.n_instances();
    if (n > 20)
        throw GuardError("exact enumeration over 2^" + std::to_string(n) +
                         " assignments refused (N > 20); use the Monte Carlo mode");
    check_metric_applicable(metric, eval);

    const ColumnView gold = eval.gold().view();
    const ColumnView a = eval.predictions(system_a).view();
    const ColumnView b = eval.predictions(system_b).view();
    const double observed = metric(gold, a, nullptr) - metric(gold, b, nullptr);
    const std::uint64_t total = std::uint64_t{1} << n;

    std::uint64_t extreme_total = 0;
    std::mutex merge_mutex;
    detail::parallel_chunks(total, workers, [&](std::uint64_t begin, std::uint64_t end) {
        detail::SwapScratch scratch;
        ColumnView a_view, b_view;
        std::vector<std::uint8_t> mask(n);
        std::uint64_t extreme = 0;
        for (std::uint64_t bits = begin; bits < end; ++bits) {
            for (std::size_t i = 0; i < n; ++i) mask[i] = (bits >> i) & 1u;
            detail::gather_swapped(a, b, mask, scratch, a_view, b_view);
            const double permuted = metric(gold, a_view, nullptr) - metric(gold, b_view, nullptr);
            if (detail::counts_as_extreme(permuted, observed, alternative)) ++extreme;
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        extreme_total += extreme;
    });

    PermutationResult result;
    result.observed_stat = observed;
    result.permutations = total;
    result.mode = PermutationMode::exact;
    result.as_or_more_extreme = extreme_total;
    result.alternative = alternative;
    result.p_value = static_cast<double>(extreme_total) / static_cast<double>(total);
    return result;
}

}  // namespace bootcmp
