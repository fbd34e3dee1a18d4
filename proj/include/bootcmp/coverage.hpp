#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bootcmp/compare.hpp"
#include "bootcmp/metrics.hpp"
#include "bootcmp/population.hpp"
#include "bootcmp/resampling.hpp"
#include "bootcmp/rng.hpp"

namespace bootcmp {

/// Outcome of a coverage-validation run: the fraction of repeated-experiment
/// confidence intervals that contained the analytically known population
/// difference. Nominal behavior is empirical_coverage close to the level.
struct CoverageReport {
    std::string population;
    std::string metric;
    double true_difference = 0.0;
    double nominal_level = 0.95;
    IntervalMethod method = IntervalMethod::bca;
    std::uint64_t n_eval = 0;
    std::uint64_t trials = 0;
    std::uint64_t covered = 0;
    double empirical_coverage = 0.0;
    double mean_interval_length = 0.0;
    std::uint64_t replicates = 0;
    std::vector<std::string> warnings;
};

/// For each trial: draw a fresh evaluation set of n_eval paired outcomes from
/// the population, build the configured confidence interval for the metric
/// difference, and record whether it contains the true difference. Trial data
/// and trial bootstrap seeds are both forked from cfg.seed by trial index, so
/// trials are independent and any worker layout gives identical results.
inline CoverageReport coverage_simulation(const SyntheticPopulationSpec& population,
                                          std::uint64_t n_eval, std::uint64_t trials,
                                          const ResamplingConfig& cfg,
                                          const MetricRegistry& registry = MetricRegistry{}) {
    cfg.validate();
    if (n_eval == 0) throw InputError("coverage simulation needs n_eval >= 1");
    if (trials == 0) throw InputError("coverage simulation needs at least one trial");

    const MetricSpec& metric = registry.get(population.metric_name());
    if (metric.kind == MetricKind::regression && n_eval < 2)
        throw GuardError("correlation metrics need n_eval >= 2");
    const double true_diff = population.true_difference();
    const ReplicateStream data_stream(cfg.seed, StreamPurpose::coverage_trial);

    std::vector<std::uint8_t> contained(trials, 0);
    std::vector<double> lengths(trials, 0.0);

    detail::parallel_chunks(trials, cfg.workers, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng rng = data_stream.substream(t);
            const PairedEvaluationSet eval = population.sample(n_eval, rng);
            const ColumnView gold = eval.gold().view();
            const double theta_hat = metric(gold, eval.predictions("A").view(), nullptr) -
                                     metric(gold, eval.predictions("B").view(), nullptr);
            ResamplingConfig trial_cfg = cfg;
            trial_cfg.seed = fork_seed(cfg.seed, StreamPurpose::coverage_boot, t);
            trial_cfg.workers = 1;  // parallelism lives at the trial level
            const detail::IntervalOutcome outcome =
                detail::estimate_difference_interval(eval, "A", "B", metric, theta_hat, trial_cfg);
            contained[t] = (outcome.interval.lower <= true_diff &&
                            true_diff <= outcome.interval.upper)
                               ? 1
                               : 0;
            lengths[t] = outcome.interval.upper - outcome.interval.lower;
        }
    });

    CoverageReport report;
    report.population = population.describe();
    report.metric = metric.name;
    report.true_difference = true_diff;
    report.nominal_level = cfg.confidence_level;
    report.method = cfg.method;
    report.n_eval = n_eval;
    report.trials = trials;
    report.replicates = cfg.replicates;
    for (std::uint64_t t = 0; t < trials; ++t) {
        report.covered += contained[t];
        report.mean_interval_length += lengths[t];
    }
    report.empirical_coverage = static_cast<double>(report.covered) / static_cast<double>(trials);
    report.mean_interval_length /= static_cast<double>(trials);
    if (trials < 100)
        report.warnings.push_back("only " + std::to_string(trials) +
                                  " trials; the coverage estimate has little statistical power");
    return report;
}

}  // namespace bootcmp
