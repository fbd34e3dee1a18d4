#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "bootcmp/compare.hpp"
#include "bootcmp/coverage.hpp"
#include "bootcmp/error.hpp"
#include "bootcmp/version.hpp"

namespace bootcmp {

enum class ReportFormat { text, tsv, json, svg };

inline ReportFormat report_format_from_string(const std::string& s) {
    if (s == "text") return ReportFormat::text;
    if (s == "tsv") return ReportFormat::tsv;
    if (s == "json") return ReportFormat::json;
    if (s == "svg") return ReportFormat::svg;
    throw InputError("unknown format '" + s + "' (expected text, tsv, json or svg)");
}

/// Analysis configuration echoed into every report so published numbers can
/// be reproduced from the same prediction files.
struct ReportMeta {
    std::string command;  // compare | matrix | repeated | coverage
    std::string metric;
    IntervalMethod method = IntervalMethod::bca;
    std::uint64_t replicates = 10000;
    double level = 0.95;
    double alpha = 0.05;
    Alternative alternative = Alternative::two_sided;
    bool exact = false;
    std::uint64_t seed = 0;
    std::uint64_t n_instances = 0;
};

/// Report body for the compare and matrix commands.
struct ComparisonReport {
    ReportMeta meta;
    std::vector<RankedSystem> systems;
    bool has_letters = false;
    std::vector<ComparisonResult> comparisons;
    std::vector<std::string> warnings;
};

struct RepeatedReport {
    ReportMeta meta;
    std::uint64_t n_runs = 0;
    std::vector<RepeatedSummary> rows;
    std::vector<std::string> warnings;
};

struct CoverageReportDoc {
    ReportMeta meta;
    CoverageReport body;
};

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::string shortest(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string pad_right(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

inline std::string pad_left(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Moves per-pair warnings into the report-level warnings array, prefixed
/// with the pair so nothing is silently dropped.
inline void hoist_warnings(ComparisonReport& report) {
    for (auto& pair : report.comparisons) {
        for (auto& w : pair.warnings)
            report.warnings.push_back(pair.system_a + " vs " + pair.system_b + ": " + std::move(w));
        pair.warnings.clear();
    }
}

}  // namespace detail

/// Assembles the report for a single pairwise comparison.
inline ComparisonReport make_report(const ReportMeta& meta, ComparisonResult result) {
    ComparisonReport report;
    report.meta = meta;
    report.systems.push_back({result.system_a, result.score_a, ""});
    report.systems.push_back({result.system_b, result.score_b, ""});
    report.has_letters = false;
    report.comparisons.push_back(std::move(result));
    detail::hoist_warnings(report);
    return report;
}

/// Assembles the report for a multi-system matrix comparison.
inline ComparisonReport make_report(const ReportMeta& meta, MatrixComparison matrix) {
    ComparisonReport report;
    report.meta = meta;
    report.systems = std::move(matrix.ranked);
    report.has_letters = true;
    report.comparisons = std::move(matrix.pairs);
    report.warnings = std::move(matrix.warnings);
    detail::hoist_warnings(report);
    return report;
}

inline RepeatedReport make_report(const ReportMeta& meta, std::vector<RepeatedSummary> rows,
                                  std::uint64_t n_runs) {
    RepeatedReport report;
    report.meta = meta;
    report.n_runs = n_runs;
    report.rows = std::move(rows);
    for (auto& row : report.rows) {
        for (auto& w : row.warnings)
            report.warnings.push_back(row.system_a + " vs " + row.system_b + ": " + std::move(w));
        row.warnings.clear();
    }
    return report;
}

inline CoverageReportDoc make_report(const ReportMeta& meta, CoverageReport body) {
    CoverageReportDoc doc;
    doc.meta = meta;
    doc.body = std::move(body);
    return doc;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json meta_to_json(const ReportMeta& meta) {
    return nlohmann::ordered_json{
        {"metric", meta.metric},
        {"method", to_string(meta.method)},
        {"replicates", meta.replicates},
        {"level", meta.level},
        {"alpha", meta.alpha},
        {"alternative", to_string(meta.alternative)},
        {"exact", meta.exact},
    };
}

inline ReportMeta meta_from_json(const nlohmann::json& doc) {
    ReportMeta meta;
    meta.command = doc.at("command").get<std::string>();
    meta.seed = doc.at("seed").get<std::uint64_t>();
    const auto& cfg = doc.at("config");
    meta.metric = cfg.at("metric").get<std::string>();
    meta.method = interval_method_from_string(cfg.at("method").get<std::string>());
    meta.replicates = cfg.at("replicates").get<std::uint64_t>();
    meta.level = cfg.at("level").get<double>();
    meta.alpha = cfg.at("alpha").get<double>();
    meta.alternative = alternative_from_string(cfg.at("alternative").get<std::string>());
    meta.exact = cfg.at("exact").get<bool>();
    if (doc.contains("n_instances")) meta.n_instances = doc.at("n_instances").get<std::uint64_t>();
    return meta;
}

inline nlohmann::ordered_json comparison_to_json(const ComparisonResult& c) {
    nlohmann::ordered_json j{
        {"system_a", c.system_a},
        {"system_b", c.system_b},
        {"metric", c.metric},
        {"score_a", c.score_a},
        {"score_b", c.score_b},
        {"theta_hat", c.theta_hat},
        {"interval",
         {{"lower", c.interval.lower},
          {"upper", c.interval.upper},
          {"level", c.interval.level},
          {"method", to_string(c.interval.method)},
          {"replicates_used", c.interval.replicates_used}}},
        {"permutation",
         {{"p_value", c.permutation.p_value},
          {"observed_stat", c.permutation.observed_stat},
          {"permutations", c.permutation.permutations},
          {"mode", to_string(c.permutation.mode)},
          {"as_or_more_extreme", c.permutation.as_or_more_extreme},
          {"alternative", to_string(c.permutation.alternative)}}},
    };
    if (c.bca) {
        j["bca"] = nlohmann::ordered_json{{"z0", c.bca->z0},
                                          {"acceleration", c.bca->acceleration},
                                          {"clamped", c.bca->clamped},
                                          {"percentile_fallback", c.bca->percentile_fallback},
                                          {"degenerate_replicates", c.bca->degenerate_replicates}};
    } else {
        j["bca"] = nullptr;
    }
    return j;
}

inline ComparisonResult comparison_from_json(const nlohmann::json& j) {
    ComparisonResult c;
    c.system_a = j.at("system_a").get<std::string>();
    c.system_b = j.at("system_b").get<std::string>();
    c.metric = j.at("metric").get<std::string>();
    c.score_a = j.at("score_a").get<double>();
    c.score_b = j.at("score_b").get<double>();
    c.theta_hat = j.at("theta_hat").get<double>();
    const auto& ival = j.at("interval");
    c.interval.point_estimate = c.theta_hat;
    c.interval.lower = ival.at("lower").get<double>();
    c.interval.upper = ival.at("upper").get<double>();
    c.interval.level = ival.at("level").get<double>();
    c.interval.method = interval_method_from_string(ival.at("method").get<std::string>());
    c.interval.replicates_used = ival.at("replicates_used").get<std::uint64_t>();
    if (j.contains("bca") && !j.at("bca").is_null()) {
        BcaDiagnostics diag;
        const auto& b = j.at("bca");
        diag.z0 = b.at("z0").get<double>();
        diag.acceleration = b.at("acceleration").get<double>();
        diag.clamped = b.at("clamped").get<bool>();
        diag.percentile_fallback = b.at("percentile_fallback").get<bool>();
        diag.degenerate_replicates = b.at("degenerate_replicates").get<std::int64_t>();
        c.bca = diag;
    }
    const auto& perm = j.at("permutation");
    c.permutation.p_value = perm.at("p_value").get<double>();
    c.permutation.observed_stat = perm.at("observed_stat").get<double>();
    c.permutation.permutations = perm.at("permutations").get<std::uint64_t>();
    c.permutation.mode = perm.at("mode").get<std::string>() == "exact" ? PermutationMode::exact
                                                                       : PermutationMode::monte_carlo;
    c.permutation.as_or_more_extreme = perm.at("as_or_more_extreme").get<std::uint64_t>();
    c.permutation.alternative = alternative_from_string(perm.at("alternative").get<std::string>());
    return c;
}

}  // namespace detail

inline std::string render_json(const ComparisonReport& report) {
    nlohmann::ordered_json doc;
    doc["schema"] = kReportSchema;
    doc["command"] = report.meta.command;
    doc["generator"] = std::string("bootcmp ") + kVersion;
    doc["seed"] = report.meta.seed;
    doc["config"] = detail::meta_to_json(report.meta);
    doc["n_instances"] = report.meta.n_instances;
    auto systems = nlohmann::ordered_json::array();
    for (const auto& s : report.systems) {
        nlohmann::ordered_json js{{"name", s.name}, {"score", s.score}};
        if (report.has_letters) js["letters"] = s.letters;
        systems.push_back(std::move(js));
    }
    doc["systems"] = std::move(systems);
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& c : report.comparisons) pairs.push_back(detail::comparison_to_json(c));
    doc["comparisons"] = std::move(pairs);
    doc["warnings"] = report.warnings;
    return doc.dump(2) + "\n";
}

inline ComparisonReport comparison_report_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("schema").get<std::string>() != kReportSchema)
        throw InputError("unsupported report schema '" + doc.at("schema").get<std::string>() + "'");
    ComparisonReport report;
    report.meta = detail::meta_from_json(doc);
    for (const auto& js : doc.at("systems")) {
        RankedSystem s;
        s.name = js.at("name").get<std::string>();
        s.score = js.at("score").get<double>();
        if (js.contains("letters")) {
            s.letters = js.at("letters").get<std::string>();
            report.has_letters = true;
        }
        report.systems.push_back(std::move(s));
    }
    for (const auto& jc : doc.at("comparisons"))
        report.comparisons.push_back(detail::comparison_from_json(jc));
    report.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return report;
}

inline std::string render_json(const RepeatedReport& report) {
    nlohmann::ordered_json doc;
    doc["schema"] = kReportSchema;
    doc["command"] = report.meta.command;
    doc["generator"] = std::string("bootcmp ") + kVersion;
    doc["seed"] = report.meta.seed;
    doc["config"] = detail::meta_to_json(report.meta);
    doc["n_runs"] = report.n_runs;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        rows.push_back(nlohmann::ordered_json{
            {"system_a", r.system_a},
            {"system_b", r.system_b},
            {"metric", r.metric},
            {"score_a", r.score_a},
            {"score_b", r.score_b},
            {"p_min", r.p_min},
            {"p_max", r.p_max},
            {"n_significant", r.n_significant},
            {"ci_lower_min", r.ci_lower_min},
            {"ci_lower_max", r.ci_lower_max},
            {"diff_min", r.diff_min},
            {"diff_max", r.diff_max},
            {"ci_upper_min", r.ci_upper_min},
            {"ci_upper_max", r.ci_upper_max},
            {"n_runs", r.n_runs},
            {"alpha", r.alpha},
        });
    }
    doc["rows"] = std::move(rows);
    doc["warnings"] = report.warnings;
    return doc.dump(2) + "\n";
}

inline RepeatedReport repeated_report_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("schema").get<std::string>() != kReportSchema)
        throw InputError("unsupported report schema '" + doc.at("schema").get<std::string>() + "'");
    RepeatedReport report;
    report.meta = detail::meta_from_json(doc);
    report.n_runs = doc.at("n_runs").get<std::uint64_t>();
    for (const auto& jr : doc.at("rows")) {
        RepeatedSummary r;
        r.system_a = jr.at("system_a").get<std::string>();
        r.system_b = jr.at("system_b").get<std::string>();
        r.metric = jr.at("metric").get<std::string>();
        r.score_a = jr.at("score_a").get<double>();
        r.score_b = jr.at("score_b").get<double>();
        r.p_min = jr.at("p_min").get<double>();
        r.p_max = jr.at("p_max").get<double>();
        r.n_significant = jr.at("n_significant").get<std::uint64_t>();
        r.ci_lower_min = jr.at("ci_lower_min").get<double>();
        r.ci_lower_max = jr.at("ci_lower_max").get<double>();
        r.diff_min = jr.at("diff_min").get<double>();
        r.diff_max = jr.at("diff_max").get<double>();
        r.ci_upper_min = jr.at("ci_upper_min").get<double>();
        r.ci_upper_max = jr.at("ci_upper_max").get<double>();
        r.n_runs = jr.at("n_runs").get<std::uint64_t>();
        r.alpha = jr.at("alpha").get<double>();
        report.rows.push_back(std::move(r));
    }
    report.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return report;
}

inline std::string render_json(const CoverageReportDoc& doc) {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["command"] = doc.meta.command;
    j["generator"] = std::string("bootcmp ") + kVersion;
    j["seed"] = doc.meta.seed;
    j["config"] = detail::meta_to_json(doc.meta);
    j["population"] = doc.body.population;
    j["true_difference"] = doc.body.true_difference;
    j["nominal_level"] = doc.body.nominal_level;
    j["n_eval"] = doc.body.n_eval;
    j["trials"] = doc.body.trials;
    j["covered"] = doc.body.covered;
    j["empirical_coverage"] = doc.body.empirical_coverage;
    j["mean_interval_length"] = doc.body.mean_interval_length;
    j["warnings"] = doc.body.warnings;
    return j.dump(2) + "\n";
}

inline CoverageReportDoc coverage_report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("schema").get<std::string>() != kReportSchema)
        throw InputError("unsupported report schema '" + j.at("schema").get<std::string>() + "'");
    CoverageReportDoc doc;
    doc.meta = detail::meta_from_json(j);
    doc.body.population = j.at("population").get<std::string>();
    doc.body.metric = doc.meta.metric;
    doc.body.true_difference = j.at("true_difference").get<double>();
    doc.body.nominal_level = j.at("nominal_level").get<double>();
    doc.body.method = doc.meta.method;
    doc.body.n_eval = j.at("n_eval").get<std::uint64_t>();
    doc.body.trials = j.at("trials").get<std::uint64_t>();
    doc.body.covered = j.at("covered").get<std::uint64_t>();
    doc.body.empirical_coverage = j.at("empirical_coverage").get<double>();
    doc.body.mean_interval_length = j.at("mean_interval_length").get<double>();
    doc.body.replicates = doc.meta.replicates;
    doc.body.warnings = j.at("warnings").get<std::vector<std::string>>();
    return doc;
}

// ---------------------------------------------------------------------------
// Text
// ---------------------------------------------------------------------------

namespace detail {

inline std::string meta_lines(const ReportMeta& meta) {
    std::string out;
    out += "metric: " + meta.metric + "  method: " + to_string(meta.method) +
           "  level: " + fixed6(meta.level) + "  alpha: " + fixed6(meta.alpha) + "\n";
    out += "replicates: " + std::to_string(meta.replicates) + "  seed: " +
           std::to_string(meta.seed) + "  alternative: " + to_string(meta.alternative) + "\n";
    return out;
}

inline void append_warnings(std::string& out, const std::vector<std::string>& warnings) {
    if (warnings.empty()) return;
    out += "warnings:\n";
    for (const auto& w : warnings) out += "  - " + w + "\n";
}

}  // namespace detail

inline std::string render_text(const ComparisonReport& report) {
    using detail::fixed6;
    std::string out = "bootcmp " + report.meta.command + " report\n";
    out += detail::meta_lines(report.meta);
    out += "instances: " + std::to_string(report.meta.n_instances) + "\n";
    out += "note: p-values are raw per-pair results; no multiplicity correction is applied.\n\n";

    std::size_t name_width = 6;
    for (const auto& s : report.systems) name_width = std::max(name_width, s.name.size());

    out += report.has_letters ? "systems (descending score):\n" : "systems:\n";
    out += "  rank  " + detail::pad_right("system", name_width) + "  score    ";
    if (report.has_letters) out += "  letters";
    out += "\n";
    for (std::size_t i = 0; i < report.systems.size(); ++i) {
        const auto& s = report.systems[i];
        out += "  " + detail::pad_left(std::to_string(i + 1), 4) + "  " +
               detail::pad_right(s.name, name_width) + "  " + fixed6(s.score);
        if (report.has_letters) out += "  " + s.letters;
        out += "\n";
    }

    out += report.has_letters ? "\ncomparisons (each system vs those ranked lower):\n"
                              : "\ncomparisons:\n";
    std::size_t pair_width = 4;
    for (const auto& c : report.comparisons)
        pair_width = std::max(pair_width, c.system_a.size() + c.system_b.size() + 4);
    for (const auto& c : report.comparisons) {
        const std::string label = c.system_a + " vs " + c.system_b;
        out += "  " + detail::pad_right(label, pair_width) + "  diff " + fixed6(c.theta_hat) +
               "  ci [" + fixed6(c.interval.lower) + ", " + fixed6(c.interval.upper) + "] (" +
               to_string(c.interval.method) + ")  p " + fixed6(c.permutation.p_value) + " (" +
               to_string(c.permutation.mode) + ")\n";
    }
    out += "\n";
    detail::append_warnings(out, report.warnings);
    return out;
}

inline std::string render_tsv(const ComparisonReport& report) {
    using detail::fixed6;
    std::string out =
        "system_a\tsystem_b\tmetric\tscore_a\tscore_b\tdifference\tci_lower\tci_upper\tlevel\t"
        "interval_method\treplicates_used\tp_value\tpermutation_mode\tpermutations\t"
        "as_or_more_extreme\talternative\tseed\n";
    for (const auto& c : report.comparisons) {
        out += c.system_a + "\t" + c.system_b + "\t" + c.metric + "\t" + fixed6(c.score_a) + "\t" +
               fixed6(c.score_b) + "\t" + fixed6(c.theta_hat) + "\t" + fixed6(c.interval.lower) +
               "\t" + fixed6(c.interval.upper) + "\t" + fixed6(c.interval.level) + "\t" +
               to_string(c.interval.method) + "\t" + std::to_string(c.interval.replicates_used) +
               "\t" + fixed6(c.permutation.p_value) + "\t" + to_string(c.permutation.mode) + "\t" +
               std::to_string(c.permutation.permutations) + "\t" +
               std::to_string(c.permutation.as_or_more_extreme) + "\t" +
               to_string(c.permutation.alternative) + "\t" + std::to_string(report.meta.seed) +
               "\n";
    }
    return out;
}

inline std::string render_text(const RepeatedReport& report) {
    using detail::fixed6;
    using detail::pad_left;
    using detail::pad_right;
    std::string out = "bootcmp repeated report\n";
    out += detail::meta_lines(report.meta);
    out += "runs: " + std::to_string(report.n_runs) + "\n";
    out += "note: p-values are raw per-run results; no multiplicity correction is applied.\n\n";

    std::size_t name_width = 8;
    for (const auto& r : report.rows) {
        name_width = std::max(name_width, r.system_a.size());
        name_width = std::max(name_width, r.system_b.size());
    }

    const std::size_t w = 9;  // numeric column width (6 decimals, sign fits)
    auto num = [&](double v) { return pad_left(fixed6(v), w); };

    // paired Min/Max columns for the p-value, the lower confidence limit,
    // the difference, and the upper confidence limit
    out += pad_right("", 2 * name_width + 4) + pad_left("Score", 2 * w + 2) +
           pad_left("p-value", 2 * w + 8) + pad_left("Lower CL", 2 * w + 2) +
           pad_left("Difference", 2 * w + 2) + pad_left("Upper CL", 2 * w + 2) + "\n";
    out += pad_right("C1", name_width) + "  " + pad_right("C2", name_width) + "  " +
           pad_left("C1", w) + " " + pad_left("C2", w) + " " + pad_left("Min", w) + " " +
           pad_left("Max", w) + " " + pad_left("#sig", 5) + " " + pad_left("Min", w) + " " +
           pad_left("Max", w) + " " + pad_left("Min", w) + " " + pad_left("Max", w) + " " +
           pad_left("Min", w) + " " + pad_left("Max", w) + "\n";
    for (const auto& r : report.rows) {
        out += pad_right(r.system_a, name_width) + "  " + pad_right(r.system_b, name_width) + "  " +
               num(r.score_a) + " " + num(r.score_b) + " " + num(r.p_min) + " " + num(r.p_max) +
               " " + pad_left(std::to_string(r.n_significant), 5) + " " + num(r.ci_lower_min) +
               " " + num(r.ci_lower_max) + " " + num(r.diff_min) + " " + num(r.diff_max) + " " +
               num(r.ci_upper_min) + " " + num(r.ci_upper_max) + "\n";
    }
    out += "\n";
    detail::append_warnings(out, report.warnings);
    return out;
}

inline std::string render_tsv(const RepeatedReport& report) {
    using detail::fixed6;
    std::string out =
        "system_a\tsystem_b\tmetric\tscore_a\tscore_b\tp_min\tp_max\tn_significant\t"
        "ci_lower_min\tci_lower_max\tdiff_min\tdiff_max\tci_upper_min\tci_upper_max\tn_runs\t"
        "alpha\tseed\n";
    for (const auto& r : report.rows) {
        out += r.system_a + "\t" + r.system_b + "\t" + r.metric + "\t" + fixed6(r.score_a) + "\t" +
               fixed6(r.score_b) + "\t" + fixed6(r.p_min) + "\t" + fixed6(r.p_max) + "\t" +
               std::to_string(r.n_significant) + "\t" + fixed6(r.ci_lower_min) + "\t" +
               fixed6(r.ci_lower_max) + "\t" + fixed6(r.diff_min) + "\t" + fixed6(r.diff_max) +
               "\t" + fixed6(r.ci_upper_min) + "\t" + fixed6(r.ci_upper_max) + "\t" +
               std::to_string(r.n_runs) + "\t" + fixed6(r.alpha) + "\t" +
               std::to_string(report.meta.seed) + "\n";
    }
    return out;
}

inline std::string render_text(const CoverageReportDoc& doc) {
    using detail::fixed6;
    std::string out = "bootcmp coverage report\n";
    out += detail::meta_lines(doc.meta);
    out += "population: " + doc.body.population + "\n";
    out += "n_eval: " + std::to_string(doc.body.n_eval) +
           "  trials: " + std::to_string(doc.body.trials) + "\n";
    out += "true difference: " + fixed6(doc.body.true_difference) + "\n";
    out += "covered: " + std::to_string(doc.body.covered) + " / " +
           std::to_string(doc.body.trials) + "\n";
    out += "empirical coverage: " + fixed6(doc.body.empirical_coverage) + "\n";
    out += "mean interval length: " + fixed6(doc.body.mean_interval_length) + "\n";
    detail::append_warnings(out, doc.body.warnings);
    return out;
}

inline std::string render_tsv(const CoverageReportDoc& doc) {
    using detail::fixed6;
    std::string out =
        "population\tmetric\tmethod\ttrue_difference\tnominal_level\tn_eval\ttrials\tcovered\t"
        "empirical_coverage\tmean_interval_length\treplicates\tseed\n";
    out += doc.body.population + "\t" + doc.body.metric + "\t" + to_string(doc.body.method) +
           "\t" + fixed6(doc.body.true_difference) + "\t" + fixed6(doc.body.nominal_level) + "\t" +
           std::to_string(doc.body.n_eval) + "\t" + std::to_string(doc.body.trials) + "\t" +
           std::to_string(doc.body.covered) + "\t" + fixed6(doc.body.empirical_coverage) + "\t" +
           fixed6(doc.body.mean_interval_length) + "\t" + std::to_string(doc.body.replicates) +
           "\t" + std::to_string(doc.meta.seed) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// SVG forest plot
// ---------------------------------------------------------------------------

namespace detail {

inline std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace detail

/// Forest plot of a comparison report: one horizontal interval per pair, an X
/// marker at the observed difference, and a vertical reference line at zero.
/// The plot group carries the axis mapping as data attributes so every pixel
/// position can be recomputed from the emitted document.
inline std::string render_forest_svg(const ComparisonReport& report) {
    if (report.comparisons.empty())
        throw InputError("forest plot needs at least one comparison");
    using detail::fixed6;
    using detail::px;
    using detail::shortest;
    using detail::xml_escape;

    // data domain: cover zero and every interval, with padding
    double dmin = 0.0, dmax = 0.0;
    for (const auto& c : report.comparisons) {
        dmin = std::min({dmin, c.interval.lower, c.theta_hat});
        dmax = std::max({dmax, c.interval.upper, c.theta_hat});
    }
    if (dmax - dmin < 1e-12) {
        dmin -= 0.01;
        dmax += 0.01;
    }
    const double pad = 0.06 * (dmax - dmin);
    dmin -= pad;
    dmax += pad;

    const double px_min = 340.0, px_max = 840.0;
    const double width = 880.0;
    auto x_of = [&](double v) { return px_min + (v - dmin) / (dmax - dmin) * (px_max - px_min); };

    const double header_h = 64.0;
    const double system_row_h = 18.0;
    const double systems_h = system_row_h * static_cast<double>(report.systems.size()) + 10.0;
    const double row_h = 24.0;
    const double rows_h = row_h * static_cast<double>(report.comparisons.size());
    const double axis_h = 40.0;
    const double plot_top = header_h + systems_h;
    const double plot_bottom = plot_top + rows_h + 8.0;
    const double height = plot_bottom + axis_h;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + px(width) +
           "\" height=\"" + px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) +
           "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + px(width) + "\" height=\"" + px(height) +
           "\" fill=\"white\"/>\n";
    svg += "<text x=\"16\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
           "font-weight=\"bold\">bootcmp " + xml_escape(report.meta.command) +
           " report (" + xml_escape(report.meta.metric) + ")</text>\n";
    svg += "<text x=\"16\" y=\"44\" font-family=\"sans-serif\" font-size=\"11\">method " +
           std::string(to_string(report.meta.method)) + ", level " + fixed6(report.meta.level) +
           ", replicates " + std::to_string(report.meta.replicates) + ", seed " +
           std::to_string(report.meta.seed) + "</text>\n";

    double y = header_h;
    for (std::size_t i = 0; i < report.systems.size(); ++i) {
        const auto& s = report.systems[i];
        std::string line = std::to_string(i + 1) + ". " + s.name + "  " + fixed6(s.score);
        if (report.has_letters && !s.letters.empty()) line += "  [" + s.letters + "]";
        svg += "<text x=\"16\" y=\"" + px(y + 12.0) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(line) + "</text>\n";
        y += system_row_h;
    }

    svg += "<g id=\"plot\" data-domain-min=\"" + shortest(dmin) + "\" data-domain-max=\"" +
           shortest(dmax) + "\" data-range-min=\"" + shortest(px_min) + "\" data-range-max=\"" +
           shortest(px_max) + "\">\n";

    // zero reference line
    svg += "<line class=\"zero\" x1=\"" + px(x_of(0.0)) + "\" y1=\"" + px(plot_top) + "\" x2=\"" +
           px(x_of(0.0)) + "\" y2=\"" + px(plot_bottom) +
           "\" stroke=\"#999999\" stroke-dasharray=\"4,3\"/>\n";

    double row_y = plot_top + row_h / 2.0;
    for (const auto& c : report.comparisons) {
        const double x_lo = x_of(c.interval.lower);
        const double x_hi = x_of(c.interval.upper);
        const double x_mid = x_of(c.theta_hat);
        svg += "<g class=\"pair\" data-lower=\"" + shortest(c.interval.lower) + "\" data-diff=\"" +
               shortest(c.theta_hat) + "\" data-upper=\"" + shortest(c.interval.upper) + "\">\n";
        svg += "  <text x=\"330\" y=\"" + px(row_y + 4.0) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               xml_escape(c.system_a + " - " + c.system_b) + "</text>\n";
        svg += "  <line class=\"ci\" x1=\"" + px(x_lo) + "\" y1=\"" + px(row_y) + "\" x2=\"" +
               px(x_hi) + "\" y2=\"" + px(row_y) + "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
        svg += "  <line x1=\"" + px(x_lo) + "\" y1=\"" + px(row_y - 4.0) + "\" x2=\"" + px(x_lo) +
               "\" y2=\"" + px(row_y + 4.0) + "\" stroke=\"black\"/>\n";
        svg += "  <line x1=\"" + px(x_hi) + "\" y1=\"" + px(row_y - 4.0) + "\" x2=\"" + px(x_hi) +
               "\" y2=\"" + px(row_y + 4.0) + "\" stroke=\"black\"/>\n";
        svg += "  <path class=\"marker\" d=\"M " + px(x_mid - 3.5) + " " + px(row_y - 3.5) +
               " L " + px(x_mid + 3.5) + " " + px(row_y + 3.5) + " M " + px(x_mid - 3.5) + " " +
               px(row_y + 3.5) + " L " + px(x_mid + 3.5) + " " + px(row_y - 3.5) +
               "\" stroke=\"black\" stroke-width=\"1.5\" fill=\"none\"/>\n";
        svg += "</g>\n";
        row_y += row_h;
    }

    // axis with five evenly spaced ticks
    svg += "<line class=\"axis\" x1=\"" + px(px_min) + "\" y1=\"" + px(plot_bottom) + "\" x2=\"" +
           px(px_max) + "\" y2=\"" + px(plot_bottom) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = dmin + (dmax - dmin) * static_cast<double>(t) / 4.0;
        const double x = x_of(v);
        svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(plot_bottom) + "\" x2=\"" + px(x) +
               "\" y2=\"" + px(plot_bottom + 5.0) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + px(x) + "\" y=\"" + px(plot_bottom + 18.0) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               fixed6(v) + "</text>\n";
    }
    svg += "<text x=\"" + px((px_min + px_max) / 2.0) + "\" y=\"" + px(plot_bottom + 34.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           xml_escape(report.meta.metric) + " difference</text>\n";
    svg += "</g>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace bootcmp
