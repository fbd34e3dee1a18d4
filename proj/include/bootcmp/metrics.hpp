#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bootcmp/error.hpp"
#include "bootcmp/evaluation.hpp"

namespace bootcmp {

enum class MetricKind { classification, regression };
enum class Orientation { higher_is_better };

/// Counters a metric may bump while scoring. Bootstrap resamples can be
/// legitimately degenerate (e.g. constant predictions under Pearson); the
/// engine surfaces the per-replicate count instead of aborting.
struct ScoreDiagnostics {
    std::int64_t degenerate_samples = 0;
};

namespace detail {

template <typename T>
void check_aligned(std::span<const T> gold, std::span<const T> pred) {
    if (gold.size() != pred.size())
        throw InputError("gold and predictions are misaligned: " + std::to_string(gold.size()) +
                         " vs " + std::to_string(pred.size()) + " values");
    if (gold.empty()) throw InputError("cannot score an empty sequence");
}

}  // namespace detail

/// Fraction of positions where the prediction equals the gold value.
template <typename T>
double accuracy(std::span<const T> gold, std::span<const T> pred) {
    detail::check_aligned(gold, pred);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i)
        if (gold[i] == pred[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(gold.size());
}

/// Unweighted mean of per-class F1 over the classes present in gold OR pred
/// of the sequence being scored. Per-class F1 = 2PR/(P+R) with the 0/0 -> 0
/// convention for P, R and F1. The class set is *per call*, which matters for
/// bootstrap resamples that drop a class entirely.
template <typename T>
double macro_f1(std::span<const T> gold, std::span<const T> pred) {
    detail::check_aligned(gold, pred);

    std::vector<std::int64_t> tp, fp, fn;
    auto tally = [&](std::size_t g, std::size_t p) {
        const std::size_t need = std::max(g, p) + 1;
        if (need > tp.size()) {
            tp.resize(need, 0);
            fp.resize(need, 0);
            fn.resize(need, 0);
        }
        if (g == p) {
            ++tp[g];
        } else {
            ++fn[g];
            ++fp[p];
        }
    };

    if constexpr (std::is_integral_v<T>) {
        // interned codes: dense counting
        for (std::size_t i = 0; i < gold.size(); ++i)
            tally(static_cast<std::size_t>(gold[i]), static_cast<std::size_t>(pred[i]));
    } else {
        std::map<T, std::size_t> class_index;
        auto index_of = [&](const T& v) {
            return class_index.emplace(v, class_index.size()).first->second;
        };
        for (std::size_t i = 0; i < gold.size(); ++i) tally(index_of(gold[i]), index_of(pred[i]));
    }

    double f1_sum = 0.0;
    std::size_t n_classes = 0;
    for (std::size_t c = 0; c < tp.size(); ++c) {
        const std::int64_t support = tp[c] + fp[c] + fn[c];
        if (support == 0) continue;  // class absent from gold and pred
        ++n_classes;
        const double precision = (tp[c] + fp[c]) > 0 ? double(tp[c]) / double(tp[c] + fp[c]) : 0.0;
        const double recall = (tp[c] + fn[c]) > 0 ? double(tp[c]) / double(tp[c] + fn[c]) : 0.0;
        f1_sum += (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return f1_sum / static_cast<double>(n_classes);
}

/// Sample Pearson correlation. A zero-variance input yields 0 with the
/// degenerate flag set rather than an error, so resampling loops survive
/// constant resamples; callers count the flagged replicates.
inline double pearson_r(std::span<const double> gold, std::span<const double> pred,
                        bool* degenerate = nullptr) {
    detail::check_aligned(gold, pred);
    if (gold.size() < 2) throw GuardError("pearson correlation needs at least 2 values");

    const auto n = static_cast<double>(gold.size());
    double mean_g = 0.0, mean_p = 0.0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        mean_g += gold[i];
        mean_p += pred[i];
    }
    mean_g /= n;
    mean_p /= n;

    double cov = 0.0, var_g = 0.0, var_p = 0.0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const double dg = gold[i] - mean_g;
        const double dp = pred[i] - mean_p;
        cov += dg * dp;
        var_g += dg * dg;
        var_p += dp * dp;
    }
    if (var_g == 0.0 || var_p == 0.0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    const double r = cov / std::sqrt(var_g * var_p);
    return std::clamp(r, -1.0, 1.0);
}

/// Named pure scoring function over aligned columns. The comparison engine
/// never inspects metric internals; anything honoring this contract can be
/// registered and compared.
struct MetricSpec {
    std::string name;
    MetricKind kind = MetricKind::classification;
    Orientation orientation = Orientation::higher_is_better;
    std::function<double(const ColumnView&, const ColumnView&, ScoreDiagnostics*)> score;

    double operator()(const ColumnView& gold, const ColumnView& pred,
                      ScoreDiagnostics* diag = nullptr) const {
        return score(gold, pred, diag);
    }
};

namespace detail {

inline double accuracy_on_view(const ColumnView& gold, const ColumnView& pred,
                               ScoreDiagnostics*) {
    return gold.kind == ValueKind::categorical ? accuracy(gold.codes, pred.codes)
                                               : accuracy(gold.reals, pred.reals);
}

inline double macro_f1_on_view(const ColumnView& gold, const ColumnView& pred,
                               ScoreDiagnostics*) {
    return gold.kind == ValueKind::categorical ? macro_f1(gold.codes, pred.codes)
                                               : macro_f1(gold.reals, pred.reals);
}

inline double pearson_on_view(const ColumnView& gold, const ColumnView& pred,
                              ScoreDiagnostics* diag) {
    if (gold.kind != ValueKind::real)
        throw InputError("pearson requires real-valued data, got categorical labels");
    bool degenerate = false;
    const double r = pearson_r(gold.reals, pred.reals, &degenerate);
    if (degenerate && diag) ++diag->degenerate_samples;
    return r;
}

}  // namespace detail

/// Metric lookup by name, preloaded with the three built-ins.
class MetricRegistry {
public:
    MetricRegistry() {
        add({"accuracy", MetricKind::classification, Orientation::higher_is_better,
             &detail::accuracy_on_view});
        add({"macro-f1", MetricKind::classification, Orientation::higher_is_better,
             &detail::macro_f1_on_view});
        add({"pearson", MetricKind::regression, Orientation::higher_is_better,
             &detail::pearson_on_view});
    }

    void add(MetricSpec spec) {
        for (const auto& m : metrics_)
            if (m.name == spec.name) throw InputError("metric '" + spec.name + "' already registered");
        metrics_.push_back(std::move(spec));
    }

    const MetricSpec& get(const std::string& name) const {
        for (const auto& m : metrics_)
            if (m.name == name) return m;
        throw InputError("unknown metric '" + name + "' (known: " + joined_names() + ")");
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& m : metrics_) out.push_back(m.name);
        return out;
    }

private:
    std::string joined_names() const {
        std::string s;
        for (const auto& m : metrics_) {
            if (!s.empty()) s += ", ";
            s += m.name;
        }
        return s;
    }

    std::vector<MetricSpec> metrics_;
};

/// Fails early when a metric cannot score the given data.
inline void check_metric_applicable(const MetricSpec& metric, const PairedEvaluationSet& eval) {
    if (metric.kind == MetricKind::regression && eval.value_kind() != ValueKind::real)
        throw InputError("metric '" + metric.name + "' requires real-valued data, but the evaluation set is categorical");
}

}  // namespace bootcmp
