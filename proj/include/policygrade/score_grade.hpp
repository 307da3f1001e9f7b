#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "policygrade/labels.hpp"

namespace pg {

struct CountSummary {
    std::int64_t good = 0;
    std::int64_t neutral = 0;
    std::int64_t bad = 0;
    std::int64_t blocker = 0;

    std::int64_t total() const noexcept { return good + neutral + bad + blocker; }
    void add(Label l) noexcept;

    friend bool operator==(const CountSummary&, const CountSummary&) = default;
};

CountSummary tally(std::span<const Label> labels) noexcept;

/// Per-class weights of the site score. Defaults give good - bad - 3*blocker.
struct ScoreWeights {
    std::int64_t good = 1;
    std::int64_t neutral = 0;
    std::int64_t bad = -1;
    std::int64_t blocker = -3;
};

std::int64_t site_score(const CountSummary& counts, const ScoreWeights& weights = {}) noexcept;

enum class Grade : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E' };

std::string_view to_string(Grade g) noexcept;
Grade parse_grade(std::string_view s);

/// Lower bounds on the normalized score for grades A..D; anything below
/// `d` is an E. Must be strictly decreasing.
struct GradeThresholds {
    double a = 0.4;
    double b = 0.1;
    double c = -0.1;
    double d = -0.4;

    void validate() const;
};

/// Grades score / max(1, classified_total). Throws on a negative total.
Grade letter_grade(std::int64_t score, std::int64_t classified_total,
                   const GradeThresholds& thresholds = {});

}  // namespace pg
