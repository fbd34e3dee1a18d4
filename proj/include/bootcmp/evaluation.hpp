#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bootcmp/error.hpp"

namespace bootcmp {

/// One observed value: a categorical label or a real number. Within a single
/// evaluation set every column holds the same variant.
using LabelValue = std::variant<std::string, double>;

enum class ValueKind { categorical, real };

inline const char* to_string(ValueKind k) {
    return k == ValueKind::categorical ? "categorical" : "real";
}

/// Non-owning view of one column. Categorical labels are interned to dense
/// int32 codes by the owning evaluation set; metrics only ever see codes.
struct ColumnView {
    ValueKind kind = ValueKind::categorical;
    std::span<const std::int32_t> codes;
    std::span<const double> reals;

    std::size_t size() const {
        return kind == ValueKind::categorical ? codes.size() : reals.size();
    }
};

/// Owning column storage, either interned label codes or raw doubles.
class ValueColumn {
public:
    static ValueColumn categorical(std::vector<std::int32_t> codes) {
        ValueColumn c;
        c.kind_ = ValueKind::categorical;
        c.codes_ = std::move(codes);
        return c;
    }

    static ValueColumn real(std::vector<double> values) {
        ValueColumn c;
        c.kind_ = ValueKind::real;
        c.reals_ = std::move(values);
        return c;
    }

    ValueKind kind() const { return kind_; }
    std::size_t size() const {
        return kind_ == ValueKind::categorical ? codes_.size() : reals_.size();
    }

    ColumnView view() const {
        ColumnView v;
        v.kind = kind_;
        v.codes = codes_;
        v.reals = reals_;
        return v;
    }

    std::span<const std::int32_t> codes() const { return codes_; }
    std::span<const double> reals() const { return reals_; }

private:
    ValueKind kind_ = ValueKind::categorical;
    std::vector<std::int32_t> codes_;
    std::vector<double> reals_;
};

/// Aligned gold values plus per-system predictions over N instances.
/// Systems keep their insertion order; lookups are by name.
class PairedEvaluationSet {
public:
    PairedEvaluationSet(std::vector<std::string> instance_ids, ValueColumn gold)
        : instance_ids_(std::move(instance_ids)), gold_(std::move(gold)) {
        if (gold_.size() == 0) throw InputError("evaluation set must have at least one instance");
        if (instance_ids_.size() != gold_.size())
            throw InputError("instance id count does not match gold value count");
        std::unordered_map<std::string, std::size_t> seen;
        seen.reserve(instance_ids_.size());
        for (std::size_t i = 0; i < instance_ids_.size(); ++i) {
            if (!seen.emplace(instance_ids_[i], i).second)
                throw InputError("duplicate instance id '" + instance_ids_[i] + "' in gold data");
        }
    }

    void add_system(std::string name, ValueColumn predictions) {
        if (predictions.size() != gold_.size())
            throw InputError("system '" + name + "' has " + std::to_string(predictions.size()) +
                             " predictions for " + std::to_string(gold_.size()) + " instances");
        if (predictions.kind() != gold_.kind())
            throw InputError("system '" + name + "' holds " + to_string(predictions.kind()) +
                             " values but gold is " + to_string(gold_.kind()));
        if (index_by_name_.count(name))
            throw InputError("system '" + name + "' added twice");
        index_by_name_.emplace(name, systems_.size());
        systems_.emplace_back(std::move(name), std::move(predictions));
    }

    std::size_t n_instances() const { return gold_.size(); }
    ValueKind value_kind() const { return gold_.kind(); }
    const std::vector<std::string>& instance_ids() const { return instance_ids_; }
    const ValueColumn& gold() const { return gold_; }

    std::size_t n_systems() const { return systems_.size(); }

    const ValueColumn& predictions(const std::string& system) const {
        auto it = index_by_name_.find(system);
        if (it == index_by_name_.end()) throw InputError("unknown system '" + system + "'");
        return systems_[it->second].second;
    }

    bool has_system(const std::string& system) const { return index_by_name_.count(system) != 0; }

    /// System names in insertion order.
    std::vector<std::string> system_names() const {
        std::vector<std::string> names;
        names.reserve(systems_.size());
        for (const auto& [name, col] : systems_) names.push_back(name);
        return names;
    }

    /// Interning table shared by gold and all prediction columns.
    const std::vector<std::string>& label_table() const { return label_table_; }
    void set_label_table(std::vector<std::string> labels) { label_table_ = std::move(labels); }

private:
    std::vector<std::string> instance_ids_;
    ValueColumn gold_;
    std::vector<std::pair<std::string, ValueColumn>> systems_;
    std::unordered_map<std::string, std::size_t> index_by_name_;
    std::vector<std::string> label_table_;
};

/// Interns label strings into dense codes, building the set in one pass.
/// Convenience for tests and synthetic data.
class EvaluationBuilder {
public:
    EvaluationBuilder& gold_labels(const std::vector<std::string>& labels) {
        gold_ = ValueColumn::categorical(intern(labels));
        return *this;
    }

    EvaluationBuilder& gold_reals(std::vector<double> values) {
        gold_ = ValueColumn::real(std::move(values));
        return *this;
    }

    EvaluationBuilder& system_labels(std::string name, const std::vector<std::string>& labels) {
        systems_.emplace_back(std::move(name), ValueColumn::categorical(intern(labels)));
        return *this;
    }

    EvaluationBuilder& system_reals(std::string name, std::vector<double> values) {
        systems_.emplace_back(std::move(name), ValueColumn::real(std::move(values)));
        return *this;
    }

    EvaluationBuilder& ids(std::vector<std::string> instance_ids) {
        ids_ = std::move(instance_ids);
        return *this;
    }

    PairedEvaluationSet build() {
        if (ids_.empty()) {
            ids_.reserve(gold_.size());
            for (std::size_t i = 0; i < gold_.size(); ++i) ids_.push_back("i" + std::to_string(i));
        }
        PairedEvaluationSet eval(std::move(ids_), std::move(gold_));
        for (auto& [name, col] : systems_) eval.add_system(std::move(name), std::move(col));
        eval.set_label_table(std::move(labels_));
        return eval;
    }

private:
    std::vector<std::int32_t> intern(const std::vector<std::string>& labels) {
        std::vector<std::int32_t> codes;
        codes.reserve(labels.size());
        for (const auto& s : labels) {
            auto [it, inserted] = code_of_.emplace(s, static_cast<std::int32_t>(labels_.size()));
            if (inserted) labels_.push_back(s);
            codes.push_back(it->second);
        }
        return codes;
    }

    std::vector<std::string> ids_;
    ValueColumn gold_;
    std::vector<std::pair<std::string, ValueColumn>> systems_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::int32_t> code_of_;
};

}  // namespace bootcmp
