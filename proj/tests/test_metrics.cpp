#include <doctest.h>

#include <random>

#include "policygrade/classify.hpp"
#include "policygrade/error.hpp"
#include "policygrade/metrics.hpp"
#include "support/oracles.hpp"

using namespace pg;

namespace {

ScoreMap one_hot(Label l) {
    ScoreMap s{};
    s[index_of(l)] = 1.0;
    return s;
}

}  // namespace

TEST_CASE("perfect predictions") {
    const std::vector<Label> y{Label::good, Label::bad, Label::blocker, Label::bad};
    std::vector<ScoreMap> s;
    for (Label l : y) s.push_back(one_hot(l));
    const auto r = compute_metrics(y, y, s, "m");
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == 1.0);
    CHECK(r.accuracy == 1.0);
    CHECK(r.auc == 1.0);
    CHECK(r.model_name == "m");
}

TEST_CASE("weighted recall of the hand example") {
    const std::vector<Label> t{Label::good, Label::good, Label::bad}, p{Label::good, Label::bad, Label::bad};
    std::vector<ScoreMap> s;
    for (Label l : p) s.push_back(one_hot(l));
    const auto r = compute_metrics(t, p, s);
    CHECK(r.accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(r.recall == doctest::Approx(2.0 / 3.0));
    // precision(good)=1, precision(bad)=1/2
    CHECK(r.precision == doctest::Approx((2 * 1.0 + 1 * 0.5) / 3));
    const auto cm = confusion_matrix(t, p);
    CHECK(cm[index_of(Label::good)][index_of(Label::bad)] == 1);
}

TEST_CASE("metrics agree with the direct definitions and recall equals accuracy") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> lab(0, 3), len(1, 60);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 300; ++t) {
        std::vector<Label> yt, yp;
        std::vector<ScoreMap> ys;
        for (int i = 0, n = len(rng); i < n; ++i) {
            yt.push_back(static_cast<Label>(lab(rng)));
            yp.push_back(static_cast<Label>(lab(rng)));
            ScoreMap s{u(rng), u(rng), u(rng), u(rng)};
            ys.push_back(s);
        }
        const auto r = compute_metrics(yt, yp, ys);
        const auto o = oracle::naive_weighted(yt, yp);
        CHECK(std::abs(r.recall - r.accuracy) <= 1e-12);
        CHECK(r.precision == doctest::Approx(o.precision).epsilon(1e-12));
        CHECK(r.recall == doctest::Approx(o.recall).epsilon(1e-12));
        CHECK(r.f1 == doctest::Approx(o.f1).epsilon(1e-12));
        CHECK(r.accuracy == o.accuracy);
    }
}

TEST_CASE("roc_auc matches the Mann-Whitney statistic") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> coarse(0, 5), len(2, 40);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> s;
        std::vector<std::uint8_t> pos;
        for (int i = 0, n = len(rng); i < n; ++i) {
            s.push_back(coarse(rng) / 5.0);
            pos.push_back(coarse(rng) < 2);
        }
        const bool any_pos = std::count(pos.begin(), pos.end(), 1) > 0;
        const bool any_neg = std::count(pos.begin(), pos.end(), 0) > 0;
        const auto a = roc_auc(s, pos);
        REQUIRE(a.has_value() == (any_pos && any_neg));
        if (a) CHECK(*a == doctest::Approx(oracle::mann_whitney_auc(s, pos)).epsilon(1e-12));
    }
    const std::vector<double> s{0.9, 0.8, 0.2};
    const std::vector<std::uint8_t> p{1, 1, 0};
    CHECK(*roc_auc(s, p) == 1.0);
}

TEST_CASE("metrics errors") {
    const std::vector<Label> a{Label::good}, b{Label::good, Label::bad};
    const std::vector<ScoreMap> s(2);
    CHECK_THROWS_AS(compute_metrics(a, b, s), Error);
    CHECK_THROWS_AS(compute_metrics({}, {}, {}), Error);
}

TEST_CASE("evaluate a toy knn on held-out points") {
    auto at = [](double x) { return std::vector<double>{x, 0.0}; };
    const std::vector<Example> train{{at(0.0), Label::good}, {at(0.1), Label::good}, {at(1.0), Label::bad},
                                     {at(1.1), Label::bad}, {at(1.2), Label::bad}};
    const std::vector<Example> test{{at(0.05), Label::good}, {at(0.6), Label::good}};
    const auto m = fit_classifier(ClassifierKind::knn, train, {});
    // 0.05 -> good (2/3); 0.6 -> neighbours 1.0, 0.1, 1.1 -> bad.
    const std::vector<NamedModel> models{{"knn", m}, {"knn-copy", m}};
    const auto rows = evaluate(models, test);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].accuracy == 0.5);
    CHECK(rows[0].recall == 0.5);
    CHECK(rows[0].precision == doctest::Approx(1.0));
    auto copy = rows[1];
    copy.model_name = "knn";
    CHECK(copy == rows[0]);
    CHECK(evaluate({}, test).empty());
}
