// bootcmp: paired-bootstrap comparison of systems evaluated on the same
// instances. Subcommands: compare, matrix, repeated, coverage.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bootcmp/bootcmp.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bootcmp;

struct CommonArgs {
    std::string gold;
    std::vector<std::string> systems;  // NAME=PATH entries
    std::string sys_a;                 // convenience: path only, name = stem
    std::string sys_b;
    std::string metric = "accuracy";
    std::string method = "bca";
    std::uint64_t replicates = 10000;
    double level = 0.95;
    double alpha = 0.05;
    std::string alternative = "two-sided";
    bool exact = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string format = "text";
    unsigned workers = 1;
    bool allow_small_replicates = false;
    std::string output;
};

void add_analysis_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--metric", args.metric, "Performance metric: accuracy, macro-f1 or pearson")
        ->default_val("accuracy");
    cmd->add_option("--method", args.method, "Interval method: bca or percentile")
        ->default_val("bca");
    cmd->add_option("--replicates", args.replicates,
                    "Bootstrap/permutation replicate count B")
        ->default_val(10000);
    cmd->add_option("--level", args.level, "Confidence level (default 0.95)")->default_val(0.95);
    cmd->add_option("--alpha", args.alpha, "Significance threshold for tests (default 0.05)")
        ->default_val(0.05);
    cmd->add_option("--alternative", args.alternative,
                    "Permutation alternative: two-sided, greater or less")
        ->default_val("two-sided");
    cmd->add_flag("--exact", args.exact, "Force exact permutation enumeration (N <= 20)");
    cmd->add_option("--seed", args.seed, "64-bit master seed (required for json/svg output)")
        ->each([&args](const std::string&) { args.seed_given = true; });
    cmd->add_option("--format", args.format, "Output format: text, tsv, json or svg")
        ->default_val("text");
    cmd->add_option("--workers", args.workers,
                    "Worker threads; never changes results, only wall time")
        ->default_val(1);
    cmd->add_flag("--allow-small-replicates", args.allow_small_replicates,
                  "Override the B >= 100 guard");
    cmd->add_option("-o,--output", args.output, "Write the report to a file instead of stdout");
}

void add_input_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--gold", args.gold, "Gold-standard file (id<TAB>value)")->required();
    cmd->add_option("--sys", args.systems, "System prediction file as NAME=PATH (repeatable)");
    cmd->add_option("--sys-a", args.sys_a, "First system file (name taken from the file stem)");
    cmd->add_option("--sys-b", args.sys_b, "Second system file (name taken from the file stem)");
}

std::vector<std::pair<std::string, fs::path>> resolve_systems(const CommonArgs& args) {
    std::vector<std::pair<std::string, fs::path>> out;
    for (const auto& entry : args.systems) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
            throw InputError("--sys expects NAME=PATH, got '" + entry + "'");
        out.emplace_back(entry.substr(0, eq), fs::path(entry.substr(eq + 1)));
    }
    if (!args.sys_a.empty()) out.emplace_back(fs::path(args.sys_a).stem().string(), args.sys_a);
    if (!args.sys_b.empty()) out.emplace_back(fs::path(args.sys_b).stem().string(), args.sys_b);
    return out;
}

ResamplingConfig make_config(const CommonArgs& args) {
    ResamplingConfig cfg;
    cfg.replicates = args.replicates;
    cfg.confidence_level = args.level;
    cfg.method = interval_method_from_string(args.method);
    cfg.seed = args.seed;
    cfg.allow_small_replicates = args.allow_small_replicates;
    cfg.workers = args.workers == 0 ? 1 : args.workers;
    return cfg;
}

TestOptions make_test_options(const CommonArgs& args) {
    TestOptions test;
    test.alternative = alternative_from_string(args.alternative);
    test.exact = args.exact;
    test.alpha = args.alpha;
    return test;
}

/// json/svg outputs must be reproducible from their own header, so the seed
/// has to be explicit. text/tsv fall back to an entropy seed that is still
/// echoed in the report.
void settle_seed(CommonArgs& args, ReportFormat format) {
    if (args.seed_given) return;
    if (format == ReportFormat::json || format == ReportFormat::svg)
        throw InputError("--seed is required for json and svg output");
    std::random_device rd;
    args.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

ReportMeta make_meta(const CommonArgs& args, const std::string& command,
                     std::uint64_t n_instances) {
    ReportMeta meta;
    meta.command = command;
    meta.metric = args.metric;
    meta.method = interval_method_from_string(args.method);
    meta.replicates = args.replicates;
    meta.level = args.level;
    meta.alpha = args.alpha;
    meta.alternative = alternative_from_string(args.alternative);
    meta.exact = args.exact;
    meta.seed = args.seed;
    meta.n_instances = n_instances;
    return meta;
}

void emit(const CommonArgs& args, const std::string& rendered) {
    if (args.output.empty()) {
        std::fwrite(rendered.data(), 1, rendered.size(), stdout);
        return;
    }
    std::ofstream out(args.output, std::ios::binary);
    if (!out) throw InputError("cannot write to '" + args.output + "'");
    out << rendered;
}

std::string render(const ComparisonReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::text: return render_text(report);
        case ReportFormat::tsv: return render_tsv(report);
        case ReportFormat::json: return render_json(report);
        case ReportFormat::svg: return render_forest_svg(report);
    }
    throw InputError("unhandled format");
}

int run_compare(CommonArgs& args) {
    const ReportFormat format = report_format_from_string(args.format);
    settle_seed(args, format);
    auto system_files = resolve_systems(args);
    if (system_files.size() != 2)
        throw InputError("compare needs exactly 2 systems (got " +
                         std::to_string(system_files.size()) + "); use matrix for more");
    const PairedEvaluationSet eval = load_evaluation(args.gold, system_files);
    const MetricRegistry registry;
    const MetricSpec& metric = registry.get(args.metric);
    const ComparisonResult result = compare_pair(eval, system_files[0].first,
                                                 system_files[1].first, metric, make_config(args),
                                                 make_test_options(args));
    ComparisonReport report = make_report(make_meta(args, "compare", eval.n_instances()), result);
    emit(args, render(report, format));
    return 0;
}

int run_matrix(CommonArgs& args) {
    const ReportFormat format = report_format_from_string(args.format);
    settle_seed(args, format);
    auto system_files = resolve_systems(args);
    if (system_files.size() < 2) throw InputError("matrix needs at least 2 systems");
    const PairedEvaluationSet eval = load_evaluation(args.gold, system_files);
    const MetricRegistry registry;
    const MetricSpec& metric = registry.get(args.metric);
    MatrixComparison matrix =
        compare_all(eval, metric, make_config(args), make_test_options(args));
    ComparisonReport report =
        make_report(make_meta(args, "matrix", eval.n_instances()), std::move(matrix));
    emit(args, render(report, format));
    return 0;
}

int run_repeated(CommonArgs& args, const std::string& runs_dir) {
    const ReportFormat format = report_format_from_string(args.format);
    if (format == ReportFormat::svg) throw InputError("svg output is not defined for repeated mode");
    settle_seed(args, format);
    auto system_files = resolve_systems(args);
    if (system_files.size() < 2) throw InputError("repeated needs at least 2 systems");
    if (fs::path(args.gold).is_absolute())
        throw InputError("--gold must be a path relative to each run directory in repeated mode");
    for (const auto& [name, path] : system_files)
        if (path.is_absolute())
            throw InputError("system paths must be relative to each run directory in repeated mode");

    std::vector<PairedEvaluationSet> runs;
    for (const fs::path& run_dir : list_run_directories(runs_dir)) {
        std::vector<std::pair<std::string, fs::path>> run_files;
        for (const auto& [name, path] : system_files) run_files.emplace_back(name, run_dir / path);
        runs.push_back(load_evaluation(run_dir / args.gold, run_files));
    }

    const MetricRegistry registry;
    const MetricSpec& metric = registry.get(args.metric);
    const ResamplingConfig cfg = make_config(args);
    const TestOptions test = make_test_options(args);

    std::vector<RepeatedSummary> rows;
    for (std::size_t i = 0; i < system_files.size(); ++i)
        for (std::size_t j = i + 1; j < system_files.size(); ++j)
            rows.push_back(repeated_comparison(runs, system_files[i].first, system_files[j].first,
                                               metric, cfg, test));

    RepeatedReport report = make_report(make_meta(args, "repeated", runs[0].n_instances()),
                                        std::move(rows), runs.size());
    switch (format) {
        case ReportFormat::text: emit(args, render_text(report)); break;
        case ReportFormat::tsv: emit(args, render_tsv(report)); break;
        case ReportFormat::json: emit(args, render_json(report)); break;
        default: throw InputError("unhandled format");
    }
    return 0;
}

int run_coverage(CommonArgs& args, const std::string& population_text, std::uint64_t n_eval,
                 std::uint64_t trials) {
    const ReportFormat format = report_format_from_string(args.format);
    if (format == ReportFormat::svg) throw InputError("svg output is not defined for coverage mode");
    settle_seed(args, format);
    const SyntheticPopulationSpec population = SyntheticPopulationSpec::parse(population_text);
    args.metric = population.metric_name();
    const CoverageReport body =
        coverage_simulation(population, n_eval, trials, make_config(args));
    CoverageReportDoc doc = make_report(make_meta(args, "coverage", n_eval), body);
    switch (format) {
        case ReportFormat::text: emit(args, render_text(doc)); break;
        case ReportFormat::tsv: emit(args, render_tsv(doc)); break;
        case ReportFormat::json: emit(args, render_json(doc)); break;
        default: throw InputError("unhandled format");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"paired-bootstrap confidence intervals and permutation tests "
                 "for comparing systems on a shared evaluation set"};
    app.set_version_flag("--version", std::string("bootcmp ") + bootcmp::kVersion);
    app.require_subcommand(1);

    CommonArgs args;

    CLI::App* compare = app.add_subcommand(
        "compare", "Two systems: observed difference, bootstrap CI, Fisher-Pitman p-value");
    add_input_flags(compare, args);
    add_analysis_flags(compare, args);

    CLI::App* matrix = app.add_subcommand(
        "matrix", "All pairwise comparisons with significance letter groups and a forest plot");
    add_input_flags(matrix, args);
    add_analysis_flags(matrix, args);

    std::string runs_dir;
    CLI::App* repeated = app.add_subcommand(
        "repeated", "Aggregate one comparison across repeated cross-validation runs");
    repeated->add_option("--runs", runs_dir, "Directory with one subdirectory per repetition")
        ->required();
    add_input_flags(repeated, args);
    add_analysis_flags(repeated, args);

    std::string population_text;
    std::uint64_t n_eval = 500, trials = 1000;
    CLI::App* coverage = app.add_subcommand(
        "coverage", "Monte Carlo check that interval coverage matches the nominal level");
    coverage->add_option("--population", population_text,
                         "paired-bernoulli:PA,PB,AGREEMENT or paired-gaussian:RA,RB,COUPLING")
        ->required();
    coverage->add_option("--n", n_eval, "Instances per simulated evaluation set")->default_val(500);
    coverage->add_option("--trials", trials, "Number of simulated experiments")->default_val(1000);
    add_analysis_flags(coverage, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (compare->parsed()) return run_compare(args);
        if (matrix->parsed()) return run_matrix(args);
        if (repeated->parsed()) return run_repeated(args, runs_dir);
        if (coverage->parsed()) return run_coverage(args, population_text, n_eval, trials);
        std::cerr << "error: no subcommand given\n";
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "guard error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
