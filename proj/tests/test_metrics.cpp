#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <numeric>
#include <string>
#include <vector>

#include "bootcmp/metrics.hpp"
#include "bootcmp/rng.hpp"

using namespace bootcmp;
using Catch::Approx;

namespace {

std::span<const std::string> sp(const std::vector<std::string>& v) { return v; }
std::span<const double> sp(const std::vector<double>& v) { return v; }

std::vector<std::string> labels(std::initializer_list<const char*> xs) {
    return {xs.begin(), xs.end()};
}

}  // namespace

TEST_CASE("accuracy matches hand-counted fractions") {
    REQUIRE(accuracy(sp(labels({"p", "n", "u"})), sp(labels({"p", "n", "u"}))) == 1.0);
    REQUIRE(accuracy(sp(labels({"p", "n", "u"})), sp(labels({"p", "n", "n"}))) ==
            Approx(2.0 / 3.0).margin(1e-9));
    REQUIRE(accuracy(sp(labels({"p", "p", "p", "p"})), sp(labels({"n", "n", "n", "n"}))) == 0.0);
}

TEST_CASE("accuracy rejects misaligned or empty input") {
    REQUIRE_THROWS_AS(accuracy(sp(labels({"a", "b"})), sp(labels({"a"}))), InputError);
    const std::vector<std::string> empty;
    REQUIRE_THROWS_AS(accuracy(sp(empty), sp(empty)), InputError);
}

TEST_CASE("accuracy equals one minus the mismatch rate") {
    Rng rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.next_below(40);
        std::vector<std::int32_t> gold(n), pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            gold[i] = static_cast<std::int32_t>(rng.next_below(3));
            pred[i] = static_cast<std::int32_t>(rng.next_below(3));
        }
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (gold[i] != pred[i]) ++mismatches;
        const double err = static_cast<double>(mismatches) / static_cast<double>(n);
        REQUIRE(accuracy<std::int32_t>(gold, pred) == Approx(1.0 - err).margin(1e-15));
    }
}

TEST_CASE("macro-f1 matches reference values") {
    REQUIRE(macro_f1(sp(labels({"a", "a", "b", "b"})), sp(labels({"a", "a", "b", "b"}))) == 1.0);
    // per-class F1 = (0.5 + 0.5) / 2, cross-checked against a reference scorer
    REQUIRE(macro_f1(sp(labels({"a", "a", "b", "b"})), sp(labels({"a", "b", "a", "b"}))) ==
            Approx(0.5).margin(1e-12));
    // both classes present, both with P+R = 0
    REQUIRE(macro_f1(sp(labels({"a", "a", "a"})), sp(labels({"b", "b", "b"}))) == 0.0);
}

TEST_CASE("macro-f1 class set comes from gold union pred of the scored call") {
    // class c appears only in pred; it still contributes an F1 of 0
    const double with_spurious =
        macro_f1(sp(labels({"a", "a", "b"})), sp(labels({"a", "c", "b"})));
    // classes a (F1 2/3... precision 1, recall 1/2 -> 2/3), b (1.0), c (0.0)
    const double f1_a = 2.0 * (1.0 * 0.5) / (1.0 + 0.5);
    REQUIRE(with_spurious == Approx((f1_a + 1.0 + 0.0) / 3.0).margin(1e-12));
}

TEST_CASE("macro-f1 equals accuracy on symmetric binary confusions") {
    // mismatches are balanced across the two classes
    auto gold = labels({"a", "a", "b", "b"});
    auto pred = labels({"a", "b", "a", "b"});
    REQUIRE(macro_f1(sp(gold), sp(pred)) == Approx(accuracy(sp(gold), sp(pred))).margin(1e-12));

    auto gold2 = labels({"a", "a", "a", "b", "b", "b"});
    auto pred2 = labels({"a", "a", "b", "b", "b", "a"});
    REQUIRE(macro_f1(sp(gold2), sp(pred2)) == Approx(accuracy(sp(gold2), sp(pred2))).margin(1e-12));
}

TEST_CASE("pearson matches hand computation") {
    REQUIRE(pearson_r(sp({1.0, 2.0, 3.0}), sp({2.0, 4.0, 6.0})) == Approx(1.0).margin(1e-12));
    REQUIRE(pearson_r(sp({1.0, 2.0, 3.0}), sp({3.0, 2.0, 1.0})) == Approx(-1.0).margin(1e-12));
    // covariance 4, both variances 5 -> r = 4/5
    REQUIRE(pearson_r(sp({1.0, 2.0, 3.0, 4.0}), sp({1.0, 3.0, 2.0, 4.0})) ==
            Approx(0.8).margin(1e-12));
}

TEST_CASE("pearson degenerate input returns 0 and sets the flag") {
    bool degenerate = false;
    REQUIRE(pearson_r(sp({2.0, 2.0, 2.0}), sp({1.0, 2.0, 3.0}), &degenerate) == 0.0);
    REQUIRE(degenerate);
    degenerate = false;
    REQUIRE(pearson_r(sp({1.0, 2.0, 3.0}), sp({7.0, 7.0, 7.0}), &degenerate) == 0.0);
    REQUIRE(degenerate);
}

TEST_CASE("pearson guards short and misaligned input") {
    const std::vector<double> one{1.0}, two{1.0, 2.0};
    REQUIRE_THROWS_AS(pearson_r(one, one), GuardError);
    REQUIRE_THROWS_AS(pearson_r(two, one), InputError);
}

TEST_CASE("pearson is invariant under positive affine transforms") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng.next_below(50);
        std::vector<double> x(n), y(n), x2(n), y2(n);
        const double a1 = 0.1 + 5.0 * rng.next_unit_open();
        const double b1 = 10.0 * rng.next_unit_open() - 5.0;
        const double a2 = 0.1 + 5.0 * rng.next_unit_open();
        const double b2 = 10.0 * rng.next_unit_open() - 5.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.next_unit_open() * 4.0 - 2.0;
            y[i] = rng.next_unit_open() * 4.0 - 2.0;
            x2[i] = a1 * x[i] + b1;
            y2[i] = a2 * y[i] + b2;
        }
        REQUIRE(pearson_r(x, y) == Approx(pearson_r(x2, y2)).margin(1e-9));
    }
}

TEST_CASE("metrics are permutation-equivariant") {
    Rng rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.next_below(30);
        std::vector<std::int32_t> gold(n), pred(n);
        std::vector<double> gr(n), pr(n);
        for (std::size_t i = 0; i < n; ++i) {
            gold[i] = static_cast<std::int32_t>(rng.next_below(4));
            pred[i] = static_cast<std::int32_t>(rng.next_below(4));
            gr[i] = rng.next_unit_open();
            pr[i] = rng.next_unit_open();
        }
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_below(i)]);

        std::vector<std::int32_t> gold_p(n), pred_p(n);
        std::vector<double> gr_p(n), pr_p(n);
        for (std::size_t i = 0; i < n; ++i) {
            gold_p[i] = gold[perm[i]];
            pred_p[i] = pred[perm[i]];
            gr_p[i] = gr[perm[i]];
            pr_p[i] = pr[perm[i]];
        }
        REQUIRE(accuracy<std::int32_t>(gold, pred) == accuracy<std::int32_t>(gold_p, pred_p));
        REQUIRE(macro_f1<std::int32_t>(gold, pred) ==
                Approx(macro_f1<std::int32_t>(gold_p, pred_p)).margin(1e-12));
        REQUIRE(pearson_r(gr, pr) == Approx(pearson_r(gr_p, pr_p)).margin(1e-12));
    }
}

TEST_CASE("metric scoring is bit-deterministic") {
    Rng rng(11);
    const std::size_t n = 64;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.next_unit_open();
        y[i] = rng.next_unit_open();
    }
    const double first = pearson_r(x, y);
    const double second = pearson_r(x, y);
    REQUIRE(std::memcmp(&first, &second, sizeof first) == 0);
}

TEST_CASE("metric registry resolves built-ins and rejects unknowns") {
    MetricRegistry registry;
    REQUIRE(registry.get("accuracy").kind == MetricKind::classification);
    REQUIRE(registry.get("macro-f1").kind == MetricKind::classification);
    REQUIRE(registry.get("pearson").kind == MetricKind::regression);
    REQUIRE_THROWS_AS(registry.get("bleu"), InputError);
    REQUIRE(registry.names().size() == 3);
}

TEST_CASE("user metrics register through the same contract") {
    MetricRegistry registry;
    MetricSpec negated_error;
    negated_error.name = "neg-error";
    negated_error.kind = MetricKind::classification;
    negated_error.score = [](const ColumnView& gold, const ColumnView& pred, ScoreDiagnostics*) {
        return accuracy(gold.codes, pred.codes) - 1.0;
    };
    registry.add(negated_error);
    REQUIRE_THROWS_AS(registry.add(negated_error), InputError);

    std::vector<std::int32_t> gold{0, 1, 2}, pred{0, 1, 1};
    ColumnView gv{ValueKind::categorical, gold, {}};
    ColumnView pv{ValueKind::categorical, pred, {}};
    REQUIRE(registry.get("neg-error")(gv, pv) == Approx(2.0 / 3.0 - 1.0).margin(1e-12));
}

TEST_CASE("regression metrics refuse categorical evaluation sets") {
    EvaluationBuilder builder;
    builder.gold_labels({"a", "b"}).system_labels("s", {"a", "a"});
    const PairedEvaluationSet eval = builder.build();
    MetricRegistry registry;
    REQUIRE_THROWS_AS(check_metric_applicable(registry.get("pearson"), eval), InputError);
    REQUIRE_NOTHROW(check_metric_applicable(registry.get("accuracy"), eval));
}
