#pragma once

#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "bootcmp/error.hpp"
#include "bootcmp/evaluation.hpp"
#include "bootcmp/interval.hpp"
#include "bootcmp/metrics.hpp"
#include "bootcmp/rng.hpp"

namespace bootcmp {

/// Knobs of one resampling analysis. Defaults follow the protocol used
/// throughout: B = 10000 replicates, 95% BCa intervals, alpha = .05.
struct ResamplingConfig {
    std::uint64_t replicates = 10000;
    double confidence_level = 0.95;
    IntervalMethod method = IntervalMethod::bca;
    std::uint64_t seed = 0;
    QuantileRule quantile_rule = QuantileRule::linear_type7;
    bool allow_small_replicates = false;  // override for the B >= 100 guard
    unsigned workers = 1;                 // never affects results, only wall time

    void validate() const {
        if (replicates < 1) throw GuardError("replicate count must be positive");
        if (replicates < 100 && !allow_small_replicates)
            throw GuardError("replicates = " + std::to_string(replicates) +
                             " is below 100; pass the small-replicates override to proceed");
        if (!(confidence_level > 0.0 && confidence_level < 1.0))
            throw InputError("confidence level must be strictly inside (0,1)");
    }
};

/// Bootstrap index sequence for one replicate: n draws with replacement,
/// uniform over [0, n). Depends only on (seed, purpose, replicate_index).
inline std::vector<std::uint32_t> bootstrap_indices(std::size_t n, std::uint64_t replicate_index,
                                                    const ReplicateStream& stream) {
    if (n == 0) throw InputError("cannot resample an empty evaluation set");
    if (n > std::numeric_limits<std::uint32_t>::max())
        throw InputError("evaluation set too large for 32-bit instance indices");
    Rng rng = stream.substream(replicate_index);
    std::vector<std::uint32_t> indices(n);
    for (auto& ix : indices) ix = static_cast<std::uint32_t>(rng.next_below(n));
    return indices;
}

/// Fair-coin mask for one permutation replicate; true at position i means the
/// two systems exchange predictions on instance i.
inline std::vector<std::uint8_t> permutation_swap_mask(std::size_t n, std::uint64_t replicate_index,
                                                       const ReplicateStream& stream) {
    if (n == 0) throw InputError("cannot permute an empty evaluation set");
    Rng rng = stream.substream(replicate_index);
    std::vector<std::uint8_t> mask(n);
    for (auto& m : mask) m = rng.next_coin() ? 1 : 0;
    return mask;
}

namespace detail {

/// Runs body(begin, end) across `workers` threads over contiguous chunks of
/// [0, count). Chunk boundaries never influence results: every unit of work
/// is keyed by its own index. An exception from a worker is rethrown on the
/// calling thread (lowest chunk first, so the surfaced error is stable).
template <typename Body>
void parallel_chunks(std::uint64_t count, unsigned workers, Body&& body) {
    if (workers <= 1 || count < 2) {
        body(std::uint64_t{0}, count);
        return;
    }
    const std::uint64_t n_threads = std::min<std::uint64_t>(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    const std::uint64_t chunk = (count + n_threads - 1) / n_threads;
    std::vector<std::exception_ptr> errors(n_threads);
    for (std::uint64_t t = 0; t < n_threads; ++t) {
        const std::uint64_t begin = t * chunk;
        const std::uint64_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, &errors, t, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& error : errors)
        if (error) std::rethrow_exception(error);
}

/// Reusable buffers for materializing a resampled (gold, A, B) triple.
struct GatherScratch {
    std::vector<std::uint32_t> indices;
    std::vector<std::int32_t> gold_codes, a_codes, b_codes;
    std::vector<double> gold_reals, a_reals, b_reals;
};

/// Co-indexed gather: one index sequence drives all three columns, which is
/// what makes the resampling *paired*.
inline void gather_triple(const ColumnView& gold, const ColumnView& a, const ColumnView& b,
                          std::span<const std::uint32_t> indices, GatherScratch& scratch,
                          ColumnView& gold_out, ColumnView& a_out, ColumnView& b_out) {
    const std::size_t n = indices.size();
    if (gold.kind == ValueKind::categorical) {
        scratch.gold_codes.resize(n);
        scratch.a_codes.resize(n);
        scratch.b_codes.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint32_t ix = indices[j];
            scratch.gold_codes[j] = gold.codes[ix];
            scratch.a_codes[j] = a.codes[ix];
            scratch.b_codes[j] = b.codes[ix];
        }
        gold_out = {ValueKind::categorical, scratch.gold_codes, {}};
        a_out = {ValueKind::categorical, scratch.a_codes, {}};
        b_out = {ValueKind::categorical, scratch.b_codes, {}};
    } else {
        scratch.gold_reals.resize(n);
        scratch.a_reals.resize(n);
        scratch.b_reals.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint32_t ix = indices[j];
            scratch.gold_reals[j] = gold.reals[ix];
            scratch.a_reals[j] = a.reals[ix];
            scratch.b_reals[j] = b.reals[ix];
        }
        gold_out = {ValueKind::real, {}, scratch.gold_reals};
        a_out = {ValueKind::real, {}, scratch.a_reals};
        b_out = {ValueKind::real, {}, scratch.b_reals};
    }
}

}  // namespace detail

/// Bootstrap distribution of the paired metric difference A - B.
struct DiffDistribution {
    std::vector<double> values;               // one entry per replicate, in index order
    std::int64_t degenerate_replicates = 0;   // replicates where a score was degenerate
};

/// Runs cfg.replicates paired bootstrap resamples and scores the metric
/// difference on each. Element b is metric(gold*, A*) - metric(gold*, B*)
/// where all three columns are gathered through the same index sequence.
inline DiffDistribution bootstrap_diff_distribution(const PairedEvaluationSet& eval,
                                                    const std::string& system_a,
                                                    const std::string& system_b,
                                                    const MetricSpec& metric,
                                                    const ResamplingConfig& cfg) {
    cfg.validate();
    check_metric_applicable(metric, eval);
    const ColumnView gold = eval.gold().view();
    const ColumnView a = eval.predictions(system_a).view();
    const ColumnView b = eval.predictions(system_b).view();
    const std::size_t n = eval.n_instances();
    const ReplicateStream stream(cfg.seed, StreamPurpose::bootstrap);

    DiffDistribution out;
    out.values.assign(cfg.replicates, 0.0);
    std::vector<std::int64_t> degenerate_per_chunk;
    std::mutex degenerate_mutex;

    detail::parallel_chunks(cfg.replicates, cfg.workers, [&](std::uint64_t begin, std::uint64_t end) {
        detail::GatherScratch scratch;
        scratch.indices.resize(n);
        ColumnView g_view, a_view, b_view;
        std::int64_t degenerate = 0;
        for (std::uint64_t r = begin; r < end; ++r) {
            Rng rng = stream.substream(r);
            for (std::size_t j = 0; j < n; ++j)
                scratch.indices[j] = static_cast<std::uint32_t>(rng.next_below(n));
            detail::gather_triple(gold, a, b, scratch.indices, scratch, g_view, a_view, b_view);
            ScoreDiagnostics diag;
            const double score_a = metric(g_view, a_view, &diag);
            const double score_b = metric(g_view, b_view, &diag);
            if (diag.degenerate_samples > 0) ++degenerate;
            out.values[r] = score_a - score_b;
        }
        std::lock_guard<std::mutex> lock(degenerate_mutex);
        degenerate_per_chunk.push_back(degenerate);
    });

    for (std::int64_t d : degenerate_per_chunk) out.degenerate_replicates += d;
    return out;
}

/// Leave-one-pair-out differences: element i is the metric difference on the
/// evaluation set with instance i deleted. Feeds the BCa acceleration.
inline std::vector<double> jackknife_diff_values(const PairedEvaluationSet& eval,
                                                 const std::string& system_a,
                                                 const std::string& system_b,
                                                 const MetricSpec& metric, unsigned workers = 1) {
    const std::size_t n = eval.n_instances();
    if (n < 2) throw GuardError("jackknife needs at least 2 instances");
    check_metric_applicable(metric, eval);
    const ColumnView gold = eval.gold().view();
    const ColumnView a = eval.predictions(system_a).view();
    const ColumnView b = eval.predictions(system_b).view();

    std::vector<double> values(n, 0.0);
    detail::parallel_chunks(n, workers, [&](std::uint64_t begin, std::uint64_t end) {
        detail::GatherScratch scratch;
        std::vector<std::uint32_t> keep(n - 1);
        ColumnView g_view, a_view, b_view;
        for (std::uint64_t i = begin; i < end; ++i) {
            std::size_t k = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) keep[k++] = static_cast<std::uint32_t>(j);
            detail::gather_triple(gold, a, b, keep, scratch, g_view, a_view, b_view);
            values[i] = metric(g_view, a_view, nullptr) - metric(g_view, b_view, nullptr);
        }
    });
    return values;
}

}  // namespace bootcmp
