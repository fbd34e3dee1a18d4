#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bootcmp/error.hpp"
#include "bootcmp/evaluation.hpp"
#include "bootcmp/normal.hpp"
#include "bootcmp/rng.hpp"

namespace bootcmp {

/// Paired Bernoulli outcomes: each instance is (A correct?, B correct?) with
/// marginal accuracies p_a, p_b and an agreement knob kappa in [0,1] that
/// interpolates between independence (0) and maximal overlap (1):
///
///   P(both correct) = (1-kappa) p_a p_b + kappa min(p_a, p_b)
///
/// All four cell probabilities stay valid for any kappa in [0,1], and the
/// true accuracy difference is exactly p_a - p_b.
struct PairedBernoulliPopulation {
    double accuracy_a = 0.8;
    double accuracy_b = 0.75;
    double agreement = 0.9;

    void validate() const {
        if (!(accuracy_a >= 0.0 && accuracy_a <= 1.0) || !(accuracy_b >= 0.0 && accuracy_b <= 1.0))
            throw InputError("paired-bernoulli accuracies must be in [0,1]");
        if (!(agreement >= 0.0 && agreement <= 1.0))
            throw InputError("paired-bernoulli agreement must be in [0,1]");
    }

    double p_both_correct() const {
        return (1.0 - agreement) * accuracy_a * accuracy_b +
               agreement * std::min(accuracy_a, accuracy_b);
    }
    double true_difference() const { return accuracy_a - accuracy_b; }
};

/// Paired real-valued predictions with known population Pearson correlations:
/// gold g ~ N(0,1); each system predicts r*g plus unit-variance noise, and
/// `coupling` in [0,1] is the fraction of noise variance the two systems
/// share. Population correlation with gold is exactly r_a (resp. r_b), so the
/// true Pearson difference is r_a - r_b.
struct PairedGaussianPopulation {
    double correlation_a = 0.85;
    double correlation_b = 0.80;
    double coupling = 0.5;

    void validate() const {
        if (!(correlation_a > -1.0 && correlation_a < 1.0) ||
            !(correlation_b > -1.0 && correlation_b < 1.0))
            throw InputError("paired-gaussian correlations must be strictly inside (-1,1)");
        if (!(coupling >= 0.0 && coupling <= 1.0))
            throw InputError("paired-gaussian coupling must be in [0,1]");
    }

    double true_difference() const { return correlation_a - correlation_b; }
};

/// A population with an analytically known true metric difference; drives the
/// coverage-validation harness.
class SyntheticPopulationSpec {
public:
    explicit SyntheticPopulationSpec(PairedBernoulliPopulation p) : population_(p) {
        p.validate();
    }
    explicit SyntheticPopulationSpec(PairedGaussianPopulation p) : population_(p) {
        p.validate();
    }

    /// CLI syntax: "paired-bernoulli:PA,PB,AGREEMENT" or
    /// "paired-gaussian:RA,RB,COUPLING".
    static SyntheticPopulationSpec parse(const std::string& text) {
        const auto colon = text.find(':');
        if (colon == std::string::npos)
            throw InputError("population spec '" + text + "' is missing the parameter list");
        const std::string kind = text.substr(0, colon);
        std::vector<double> params;
        std::size_t pos = colon + 1;
        while (pos <= text.size()) {
            const auto comma = text.find(',', pos);
            const std::string field =
                text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            try {
                std::size_t used = 0;
                params.push_back(std::stod(field, &used));
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw InputError("population spec '" + text + "' has a malformed number '" + field + "'");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (params.size() != 3)
            throw InputError("population spec '" + text + "' needs exactly 3 parameters");
        if (kind == "paired-bernoulli")
            return SyntheticPopulationSpec(PairedBernoulliPopulation{params[0], params[1], params[2]});
        if (kind == "paired-gaussian")
            return SyntheticPopulationSpec(PairedGaussianPopulation{params[0], params[1], params[2]});
        throw InputError("unknown population kind '" + kind +
                         "' (expected paired-bernoulli or paired-gaussian)");
    }

    bool is_bernoulli() const {
        return std::holds_alternative<PairedBernoulliPopulation>(population_);
    }

    double true_difference() const {
        return is_bernoulli() ? std::get<PairedBernoulliPopulation>(population_).true_difference()
                              : std::get<PairedGaussianPopulation>(population_).true_difference();
    }

    /// The built-in metric this population is scored with.
    std::string metric_name() const { return is_bernoulli() ? "accuracy" : "pearson"; }

    std::string describe() const {
        char buf[128];
        if (is_bernoulli()) {
            const auto& p = std::get<PairedBernoulliPopulation>(population_);
            std::snprintf(buf, sizeof(buf), "paired-bernoulli:%g,%g,%g", p.accuracy_a, p.accuracy_b,
                          p.agreement);
        } else {
            const auto& p = std::get<PairedGaussianPopulation>(population_);
            std::snprintf(buf, sizeof(buf), "paired-gaussian:%g,%g,%g", p.correlation_a,
                          p.correlation_b, p.coupling);
        }
        return buf;
    }

    /// Draws one evaluation set of n paired outcomes with systems "A" and "B".
    PairedEvaluationSet sample(std::size_t n, Rng& rng) const {
        if (n == 0) throw InputError("cannot sample an empty evaluation set");
        std::vector<std::string> ids;
        ids.reserve(n);
        for (std::size_t i = 0; i < n; ++i) ids.push_back("i" + std::to_string(i));

        if (is_bernoulli()) {
            const auto& p = std::get<PairedBernoulliPopulation>(population_);
            const double p11 = p.p_both_correct();
            const double p10 = p.accuracy_a - p11;
            const double p01 = p.accuracy_b - p11;
            // gold is the constant label "correct" (code 0); a system predicts
            // code 0 when it is correct on the instance, code 1 otherwise
            std::vector<std::int32_t> gold(n, 0), pred_a(n), pred_b(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double u = rng.next_unit_open();
                bool a_ok, b_ok;
                if (u < p11) {
                    a_ok = true; b_ok = true;
                } else if (u < p11 + p10) {
                    a_ok = true; b_ok = false;
                } else if (u < p11 + p10 + p01) {
                    a_ok = false; b_ok = true;
                } else {
                    a_ok = false; b_ok = false;
                }
                pred_a[i] = a_ok ? 0 : 1;
                pred_b[i] = b_ok ? 0 : 1;
            }
            PairedEvaluationSet eval(std::move(ids), ValueColumn::categorical(std::move(gold)));
            eval.add_system("A", ValueColumn::categorical(std::move(pred_a)));
            eval.add_system("B", ValueColumn::categorical(std::move(pred_b)));
            eval.set_label_table({"correct", "wrong"});
            return eval;
        }

        const auto& p = std::get<PairedGaussianPopulation>(population_);
        const double load_a = std::sqrt(1.0 - p.correlation_a * p.correlation_a);
        const double load_b = std::sqrt(1.0 - p.correlation_b * p.correlation_b);
        const double shared_w = std::sqrt(p.coupling);
        const double own_w = std::sqrt(1.0 - p.coupling);
        std::vector<double> gold(n), pred_a(n), pred_b(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double g = normal_quantile(rng.next_unit_open());
            const double shared = normal_quantile(rng.next_unit_open());
            const double noise_a = normal_quantile(rng.next_unit_open());
            const double noise_b = normal_quantile(rng.next_unit_open());
            gold[i] = g;
            pred_a[i] = p.correlation_a * g + load_a * (shared_w * shared + own_w * noise_a);
            pred_b[i] = p.correlation_b * g + load_b * (shared_w * shared + own_w * noise_b);
        }
        PairedEvaluationSet eval(std::move(ids), ValueColumn::real(std::move(gold)));
        eval.add_system("A", ValueColumn::real(std::move(pred_a)));
        eval.add_system("B", ValueColumn::real(std::move(pred_b)));
        return eval;
    }

private:
    std::variant<PairedBernoulliPopulation, PairedGaussianPopulation> population_;
};

}  // namespace bootcmp
