#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bootcmp/error.hpp"
#include "bootcmp/evaluation.hpp"
#include "bootcmp/interval.hpp"
#include "bootcmp/letters.hpp"
#include "bootcmp/metrics.hpp"
#include "bootcmp/resampling.hpp"
#include "bootcmp/rng.hpp"
#include "bootcmp/sigtest.hpp"

namespace bootcmp {

/// Everything known about one pairwise comparison: the observed difference
/// (computed once on the full evaluation set, independent of any resampling),
/// the bootstrap interval, and the permutation test.
struct ComparisonResult {
    std::string system_a;
    std::string system_b;
    std::string metric;
    double score_a = 0.0;
    double score_b = 0.0;
    double theta_hat = 0.0;  // score_a - score_b on the full set
    IntervalEstimate interval;
    std::optional<BcaDiagnostics> bca;
    PermutationResult permutation;
    std::vector<std::string> warnings;
};

/// How the significance side of a comparison is run.
struct TestOptions {
    Alternative alternative = Alternative::two_sided;
    bool exact = false;  // force exact enumeration (N <= 20)
    double alpha = 0.05;
};

namespace detail {

struct IntervalOutcome {
    IntervalEstimate interval;
    std::optional<BcaDiagnostics> bca;
    std::int64_t degenerate_replicates = 0;
    std::vector<std::string> warnings;
};

/// Bootstrap + interval construction shared by compare_pair and the coverage
/// harness (which has no use for the permutation test).
inline IntervalOutcome estimate_difference_interval(const PairedEvaluationSet& eval,
                                                    const std::string& system_a,
                                                    const std::string& system_b,
                                                    const MetricSpec& metric, double theta_hat,
                                                    const ResamplingConfig& cfg) {
    IntervalOutcome out;
    DiffDistribution dist = bootstrap_diff_distribution(eval, system_a, system_b, metric, cfg);
    out.degenerate_replicates = dist.degenerate_replicates;
    if (dist.degenerate_replicates > 0)
        out.warnings.push_back(std::to_string(dist.degenerate_replicates) +
                               " of " + std::to_string(cfg.replicates) +
                               " bootstrap replicates had a zero-variance resample scored as 0");

    if (eval.n_instances() < 30)
        out.warnings.push_back("evaluation set has only " + std::to_string(eval.n_instances()) +
                               " instances; bootstrap intervals can be unreliable at small N");

    if (cfg.method == IntervalMethod::percentile) {
        out.interval = percentile_ci(dist.values, theta_hat, cfg.confidence_level,
                                     cfg.allow_small_replicates, cfg.quantile_rule);
        return out;
    }

    std::vector<double> jackknife;
    bool jackknife_ok = true;
    try {
        jackknife = jackknife_diff_values(eval, system_a, system_b, metric, cfg.workers);
    } catch (const GuardError& e) {
        jackknife_ok = false;
        out.warnings.push_back(std::string("BCa jackknife unavailable (") + e.what() +
                               "); percentile interval reported");
    }

    if (!jackknife_ok) {
        out.interval = percentile_ci(dist.values, theta_hat, cfg.confidence_level,
                                     cfg.allow_small_replicates, cfg.quantile_rule);
        BcaDiagnostics diag;
        diag.percentile_fallback = true;
        diag.degenerate_replicates = dist.degenerate_replicates;
        out.bca = diag;
        return out;
    }

    auto [interval, diag] = bca_ci(dist.values, theta_hat, jackknife, cfg.confidence_level,
                                   cfg.allow_small_replicates, cfg.quantile_rule);
    diag.degenerate_replicates = dist.degenerate_replicates;
    out.interval = interval;
    out.bca = diag;
    if (diag.percentile_fallback)
        out.warnings.push_back("BCa acceleration undefined (zero jackknife variance); "
                               "percentile interval reported");
    if (diag.clamped)
        out.warnings.push_back("BCa bias-correction proportion clamped; all replicates fell on "
                               "one side of the observed difference");
    return out;
}

}  // namespace detail

/// Full pairwise analysis of two systems: observed difference, confidence
/// interval by the configured method, and Fisher-Pitman p-value. All
/// randomness derives from cfg.seed substreams.
inline ComparisonResult compare_pair(const PairedEvaluationSet& eval, const std::string& system_a,
                                     const std::string& system_b, const MetricSpec& metric,
                                     const ResamplingConfig& cfg,
                                     const TestOptions& test = TestOptions{}) {
    cfg.validate();
    check_metric_applicable(metric, eval);

    ComparisonResult result;
    result.system_a = system_a;
    result.system_b = system_b;
    result.metric = metric.name;

    const ColumnView gold = eval.gold().view();
    const ColumnView pred_a = eval.predictions(system_a).view();
    const ColumnView pred_b = eval.predictions(system_b).view();
    ScoreDiagnostics full_diag;
    result.score_a = metric(gold, pred_a, &full_diag);
    result.score_b = metric(gold, pred_b, &full_diag);
    result.theta_hat = result.score_a - result.score_b;
    if (full_diag.degenerate_samples > 0)
        result.warnings.push_back("full-set score is degenerate (zero-variance input scored as 0)");

    detail::IntervalOutcome ci = detail::estimate_difference_interval(
        eval, system_a, system_b, metric, result.theta_hat, cfg);
    result.interval = ci.interval;
    result.bca = ci.bca;
    for (auto& w : ci.warnings) result.warnings.push_back(std::move(w));

    if (test.exact) {
        result.permutation =
            fisher_pitman_exact(eval, system_a, system_b, metric, test.alternative, cfg.workers);
    } else {
        result.permutation =
            fisher_pitman_mc(eval, system_a, system_b, metric, cfg.replicates, cfg.seed,
                             test.alternative, cfg.allow_small_replicates, cfg.workers);
    }
    return result;
}

/// One system with its full-set score and compact-display letters.
struct RankedSystem {
    std::string name;
    double score = 0.0;
    std::string letters;
};

/// All-pairs comparison over a multi-system evaluation set: systems ranked by
/// descending score, one ComparisonResult per (higher, lower) pair in rank
/// order, significance letters from the pairwise pattern.
struct MatrixComparison {
    std::vector<RankedSystem> ranked;
    std::vector<ComparisonResult> pairs;  // (0,1), (0,2), ..., (1,2), ... by rank
    LetterGrouping grouping;
    double alpha = 0.05;
    std::vector<std::string> warnings;
};

inline MatrixComparison compare_all(const PairedEvaluationSet& eval, const MetricSpec& metric,
                                    const ResamplingConfig& cfg,
                                    const TestOptions& test = TestOptions{}) {
    cfg.validate();
    check_metric_applicable(metric, eval);
    const std::vector<std::string> names = eval.system_names();
    if (names.size() < 2) throw InputError("need at least 2 systems to compare");

    MatrixComparison matrix;
    matrix.alpha = test.alpha;

    const ColumnView gold = eval.gold().view();
    for (const auto& name : names) {
        RankedSystem rs;
        rs.name = name;
        rs.score = metric(gold, eval.predictions(name).view(), nullptr);
        matrix.ranked.push_back(std::move(rs));
    }
    std::stable_sort(matrix.ranked.begin(), matrix.ranked.end(),
                     [](const RankedSystem& x, const RankedSystem& y) { return x.score > y.score; });

    const std::size_t k = matrix.ranked.size();
    std::vector<std::vector<bool>> significant(k, std::vector<bool>(k, false));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            ComparisonResult pair = compare_pair(eval, matrix.ranked[i].name, matrix.ranked[j].name,
                                                 metric, cfg, test);
            const bool sig = pair.permutation.p_value <= test.alpha;
            significant[i][j] = sig;
            significant[j][i] = sig;
            matrix.pairs.push_back(std::move(pair));
        }
    }

    matrix.grouping = letter_groups(significant);
    for (std::size_t i = 0; i < k; ++i) matrix.ranked[i].letters = matrix.grouping.letters[i];
    if (matrix.grouping.noncontiguous_nonsignificance)
        matrix.warnings.push_back(
            "non-transitive significance pattern: some non-significant pair spans a significant "
            "system and shares no letter; read the letters together with the pairwise table");
    return matrix;
}

/// Per-run numbers that feed the repeated-cross-validation aggregation.
struct RunOutcome {
    double score_a = 0.0;
    double score_b = 0.0;
    double theta_hat = 0.0;
    double p_value = 1.0;
    double ci_lower = 0.0;
    double ci_upper = 0.0;
};

/// Column-wise min/max/count aggregation over repeated runs of one pair,
/// in the layout of a repeated-CV results table: score of each condition from
/// run 0, p-value range, significance count, and ranges of the lower limit,
/// the difference, and the upper limit.
struct RepeatedSummary {
    std::string system_a;
    std::string system_b;
    std::string metric;
    double score_a = 0.0;  // from run 0
    double score_b = 0.0;  // from run 0
    double p_min = 1.0;
    double p_max = 0.0;
    std::uint64_t n_significant = 0;
    double ci_lower_min = 0.0;
    double ci_lower_max = 0.0;
    double diff_min = 0.0;
    double diff_max = 0.0;
    double ci_upper_min = 0.0;
    double ci_upper_max = 0.0;
    std::uint64_t n_runs = 0;
    double alpha = 0.05;
    std::vector<std::string> warnings;  // distinct warnings seen across runs
};

/// Pure aggregation over already-computed run outcomes. Split out so the
/// aggregation identity can be tested against brute force with injected
/// values.
inline RepeatedSummary aggregate_runs(const std::string& system_a, const std::string& system_b,
                                      const std::string& metric_name,
                                      std::span<const RunOutcome> runs, double alpha) {
    if (runs.empty()) throw InputError("repeated aggregation needs at least one run");
    RepeatedSummary summary;
    summary.system_a = system_a;
    summary.system_b = system_b;
    summary.metric = metric_name;
    summary.alpha = alpha;
    summary.n_runs = runs.size();
    summary.score_a = runs[0].score_a;
    summary.score_b = runs[0].score_b;
    summary.p_min = runs[0].p_value;
    summary.p_max = runs[0].p_value;
    summary.ci_lower_min = runs[0].ci_lower;
    summary.ci_lower_max = runs[0].ci_lower;
    summary.diff_min = runs[0].theta_hat;
    summary.diff_max = runs[0].theta_hat;
    summary.ci_upper_min = runs[0].ci_upper;
    summary.ci_upper_max = runs[0].ci_upper;
    for (const RunOutcome& run : runs) {
        summary.p_min = std::min(summary.p_min, run.p_value);
        summary.p_max = std::max(summary.p_max, run.p_value);
        if (run.p_value <= alpha) ++summary.n_significant;
        summary.ci_lower_min = std::min(summary.ci_lower_min, run.ci_lower);
        summary.ci_lower_max = std::max(summary.ci_lower_max, run.ci_lower);
        summary.diff_min = std::min(summary.diff_min, run.theta_hat);
        summary.diff_max = std::max(summary.diff_max, run.theta_hat);
        summary.ci_upper_min = std::min(summary.ci_upper_min, run.ci_upper);
        summary.ci_upper_max = std::max(summary.ci_upper_max, run.ci_upper);
    }
    return summary;
}

/// Full repeated-run analysis: compare_pair per run (each run on a seed
/// forked from cfg.seed by run index), then the min/max/count aggregation.
inline RepeatedSummary repeated_comparison(std::span<const PairedEvaluationSet> runs,
                                           const std::string& system_a,
                                           const std::string& system_b, const MetricSpec& metric,
                                           const ResamplingConfig& cfg,
                                           const TestOptions& test = TestOptions{}) {
    if (runs.empty()) throw InputError("repeated comparison needs at least one run");
    std::vector<RunOutcome> outcomes;
    outcomes.reserve(runs.size());
    std::vector<std::string> warnings;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        ResamplingConfig run_cfg = cfg;
        run_cfg.seed = fork_seed(cfg.seed, StreamPurpose::repeated_run, r);
        const ComparisonResult res = compare_pair(runs[r], system_a, system_b, metric, run_cfg, test);
        RunOutcome out;
        out.score_a = res.score_a;
        out.score_b = res.score_b;
        out.theta_hat = res.theta_hat;
        out.p_value = res.permutation.p_value;
        out.ci_lower = res.interval.lower;
        out.ci_upper = res.interval.upper;
        outcomes.push_back(out);
        for (const auto& w : res.warnings)
            if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
                warnings.push_back(w);
    }
    RepeatedSummary summary = aggregate_runs(system_a, system_b, metric.name, outcomes, test.alpha);
    summary.warnings = std::move(warnings);
    return summary;
}

}  // namespace bootcmp
