#include <doctest.h>

#include <random>

#include "policygrade/error.hpp"
#include "policygrade/score_grade.hpp"

using namespace pg;

TEST_CASE("site score examples") {
    CHECK(site_score({10, 5, 3, 1}) == 4);
    CHECK(site_score({0, 0, 0, 0}) == 0);
    CHECK(site_score({1, 0, 1, 0}) == 0);
}

TEST_CASE("site score is linear and ignores neutral") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::int64_t> c(0, 100000);
    for (int t = 0; t < 1000; ++t) {
        CountSummary k{c(rng), c(rng), c(rng), c(rng)};
        CHECK(site_score(k) == k.good - k.bad - 3 * k.blocker);
        auto more_neutral = k;
        more_neutral.neutral += c(rng);
        CHECK(site_score(more_neutral) == site_score(k));
    }
}

TEST_CASE("tally") {
    const std::vector<Label> ls{Label::good, Label::bad, Label::bad, Label::blocker};
    const auto k = tally(ls);
    CHECK(k == CountSummary{1, 0, 2, 1});
    CHECK(k.total() == 4);
}

TEST_CASE("letter grade examples") {
    CHECK(letter_grade(0, 0) == Grade::C);
    CHECK(letter_grade(8, 10) == Grade::A);
    CHECK(letter_grade(-5, 10) == Grade::E);
    CHECK(letter_grade(4, 10) == Grade::A);
    CHECK(letter_grade(1, 10) == Grade::B);
    CHECK(letter_grade(-1, 10) == Grade::C);
    CHECK(letter_grade(-4, 10) == Grade::D);
    CHECK_THROWS_AS(letter_grade(0, -1), Error);
}

TEST_CASE("grade is monotone in good and blocker counts") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::int64_t> c(0, 20);
    for (int t = 0; t < 2000; ++t) {
        CountSummary k{c(rng), c(rng), c(rng), c(rng)};
        const Grade g = letter_grade(site_score(k), k.total());
        auto plus_good = k;
        plus_good.add(Label::good);
        auto plus_blocker = k;
        plus_blocker.add(Label::blocker);
        // Letters compare A < E, so "not worse" is <=.
        CHECK(letter_grade(site_score(plus_good), plus_good.total()) <= g);
        CHECK(letter_grade(site_score(plus_blocker), plus_blocker.total()) >= g);
    }
}

TEST_CASE("thresholds must be strictly decreasing") {
    CHECK_NOTHROW(GradeThresholds{}.validate());
    CHECK_THROWS_AS((GradeThresholds{0.1, 0.4, -0.1, -0.4}.validate()), Error);
    CHECK(letter_grade(1, 10, {0.5, 0.05, 0.0, -0.5}) == Grade::B);
    for (Grade g : {Grade::A, Grade::B, Grade::C, Grade::D, Grade::E}) CHECK(parse_grade(to_string(g)) == g);
}
