#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "policygrade/classify.hpp"
#include "policygrade/error.hpp"
#include "support/oracles.hpp"

using namespace pg;

namespace {

constexpr std::size_t kDim = 4;

std::vector<double> at(double x) {
    std::vector<double> v(kDim, 0.25);
    v[1] = x;
    return v;
}

std::vector<Example> toy() {
    return {{at(0.0), Label::good}, {at(0.1), Label::good}, {at(1.0), Label::bad}, {at(1.1), Label::bad},
            {at(1.2), Label::bad}};
}

void check_prediction_shape(const Prediction& p) {
    double sum = 0.0;
    for (double s : p.scores) sum += s;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.scores[index_of(p.label)] == *std::max_element(p.scores.begin(), p.scores.end()));
}

std::vector<Example> random_instance(std::mt19937_64& rng, std::size_t n, std::size_t d, int grid) {
    std::uniform_int_distribution<int> coord(0, grid), label(0, 3);
    std::vector<Example> out;
    for (std::size_t i = 0; i < n; ++i) {
        Example e;
        for (std::size_t j = 0; j < d; ++j) e.features.push_back(coord(rng) * 0.5);
        e.label = static_cast<Label>(label(rng));
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace

TEST_CASE("knn fit preconditions") {
    CHECK(knn_fit(toy(), 3, "fp").points().size() == 5);
    auto two = toy();
    two.resize(2);
    CHECK_THROWS_AS(knn_fit(two, 3, "fp"), Error);
    CHECK_THROWS_AS(knn_fit(toy(), 0, "fp"), Error);
    auto mixed = toy();
    mixed[2].features.push_back(1.0);
    CHECK_THROWS_AS(knn_fit(mixed, 3, "fp"), Error);
}

TEST_CASE("knn toy set") {
    const auto m = knn_fit(toy(), 3, "fp");
    auto p = knn_predict(m, at(1.05));
    CHECK(p.label == Label::bad);
    CHECK(p.scores[index_of(Label::bad)] == 1.0);
    p = knn_predict(m, at(0.05));
    CHECK(p.label == Label::good);
    CHECK(p.scores[index_of(Label::good)] == doctest::Approx(2.0 / 3.0));
    CHECK(p.scores[index_of(Label::bad)] == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(knn_predict(m, std::vector<double>{1.0}), Error);
}

TEST_CASE("knn with k=1 returns a stored point's own label") {
    const auto m = knn_fit(toy(), 1, "fp");
    for (const auto& e : toy()) CHECK(knn_predict(m, e.features).label == e.label);
}

TEST_CASE("single-label training set") {
    std::vector<Example> pts;
    for (int i = 0; i < 6; ++i) pts.push_back({at(i * 0.3), Label::blocker});
    const auto m = knn_fit(pts, 3, "fp");
    const auto p = knn_predict(m, at(-4.0));
    CHECK(p.label == Label::blocker);
    CHECK(p.scores[index_of(Label::blocker)] == 1.0);
}

TEST_CASE("knn matches the naive full-sort oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> n_dist(1, 50), d_dist(1, 8);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = n_dist(rng), d = d_dist(rng);
        const auto train = random_instance(rng, n, d, 4);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
        const auto m = knn_fit(train, k, "fp");
        for (const auto& q : random_instance(rng, 5, d, 4)) {
            const auto got = knn_predict(m, q.features);
            const auto want = oracle::naive_knn(train, k, q.features);
            CHECK(got.label == want.label);
            CHECK(got.scores == want.scores);
            check_prediction_shape(got);
        }
    }
}

TEST_CASE("knn is invariant to training order away from exact distance ties") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::vector<Example> train;
    for (int i = 0; i < 40; ++i) train.push_back({{g(rng), g(rng), g(rng)}, static_cast<Label>(i % 4)});
    auto shuffled = train;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = knn_fit(train, 5, "fp"), b = knn_fit(shuffled, 5, "fp");
    for (int q = 0; q < 100; ++q) {
        const std::vector<double> x{g(rng), g(rng), g(rng)};
        const auto pa = knn_predict(a, x), pb = knn_predict(b, x);
        CHECK(pa.scores == pb.scores);
        // Vote ties are broken by the nearest tied neighbour, which is order-free
        // unless two neighbours sit at exactly the same distance.
        CHECK(pa.label == pb.label);
    }
}

TEST_CASE("gaussian naive bayes on separated blobs") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 0.3);
    const std::array<std::array<double, 2>, 4> centers{{{0, 0}, {5, 0}, {0, 5}, {5, 5}}};
    std::vector<Example> train;
    for (std::size_t c = 0; c < 4; ++c)
        for (int i = 0; i < 25; ++i) train.push_back({{centers[c][0] + g(rng), centers[c][1] + g(rng)}, kAllLabels[c]});
    const auto m = fit_gaussian_nb(train);
    for (std::size_t c = 0; c < 4; ++c) {
        const std::vector<double> x{centers[c][0], centers[c][1]};
        const auto p = m.predict(x);
        CHECK(p.label == kAllLabels[c]);
        check_prediction_shape(p);
        // Hand posterior at the centre: log prior + sum of log normal densities.
        std::array<double, 4> logp{};
        for (std::size_t k = 0; k < 4; ++k) {
            const auto& s = m.stats()[k];
            logp[k] = std::log(s.prior);
            for (std::size_t j = 0; j < 2; ++j)
                logp[k] += -0.5 * std::log(2 * M_PI * s.variance[j]) -
                           (x[j] - s.mean[j]) * (x[j] - s.mean[j]) / (2 * s.variance[j]);
        }
        const double mx = *std::max_element(logp.begin(), logp.end());
        double z = 0;
        for (double l : logp) z += std::exp(l - mx);
        for (std::size_t k = 0; k < 4; ++k) CHECK(p.scores[k] == doctest::Approx(std::exp(logp[k] - mx) / z));
    }
}

TEST_CASE("gaussian naive bayes errors") {
    CHECK_THROWS_AS(fit_gaussian_nb({}), Error);
    auto pts = toy();
    try {
        fit_gaussian_nb(pts);
        FAIL("expected missing class error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("neutral") != std::string::npos);
    }
}

TEST_CASE("depth-1 tree cuts between the classes") {
    std::vector<Example> train;
    for (double x : {0.0, 1.0, 2.0}) train.push_back({{x}, Label::good});
    for (double x : {5.0, 6.0, 7.0}) train.push_back({{x}, Label::bad});
    ClassifierParams params;
    params.max_depth = 1;
    const auto m = fit_decision_tree(train, params);
    REQUIRE(m.nodes().size() == 3);
    CHECK(m.nodes()[0].feature == 0);
    CHECK(m.nodes()[0].threshold == 3.5);
    CHECK(m.depth() == 1);
    CHECK(m.predict(std::vector<double>{3.4}).label == Label::good);
    CHECK(m.predict(std::vector<double>{3.6}).label == Label::bad);
}

TEST_CASE("tree picks the informative feature") {
    std::vector<Example> train;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 60; ++i) {
        const double signal = u(rng);
        train.push_back({{u(rng), signal, u(rng)}, signal < 0.5 ? Label::neutral : Label::blocker});
    }
    const auto m = fit_decision_tree(train, {});
    CHECK(m.nodes()[0].feature == 1);
    for (const auto& e : train) CHECK(m.predict(e.features).label == e.label);
    CHECK(m.predict(std::vector<double>{0.5, 0.1, 0.5}).label == Label::neutral);
}

TEST_CASE("fit_classifier dispatch") {
    std::vector<Example> train;
    for (int i = 0; i < 8; ++i) train.push_back({at(i), kAllLabels[i % 4]});
    for (auto kind : {ClassifierKind::knn, ClassifierKind::gaussian_nb, ClassifierKind::decision_tree}) {
        const auto m = fit_classifier(kind, train, {});
        CHECK(m->kind() == kind);
        CHECK(m->dimension() == kDim);
        check_prediction_shape(m->predict(at(2.2)));
        CHECK(parse_classifier_kind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_classifier_kind("svm"), Error);
}
