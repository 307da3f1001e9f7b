#include "policygrade/score_grade.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "policygrade/error.hpp"

namespace pg {

void CountSummary::add(Label l) noexcept {
    switch (l) {
        case Label::good: ++good; break;
        case Label::neutral: ++neutral; break;
        case Label::bad: ++bad; break;
        case Label::blocker: ++blocker; break;
    }
}

CountSummary tally(std::span<const Label> labels) noexcept {
    CountSummary c;
    for (Label l : labels) c.add(l);
    return c;
}

std::int64_t site_score(const CountSummary& c, const ScoreWeights& w) noexcept {
    return w.good * c.good + w.neutral * c.neutral + w.bad * c.bad + w.blocker * c.blocker;
}

std::string_view to_string(Grade g) noexcept {
    switch (g) {
        case Grade::A: return "A";
        case Grade::B: return "B";
        case Grade::C: return "C";
        case Grade::D: return "D";
        case Grade::E: return "E";
    }
    return "?";
}

Grade parse_grade(std::string_view s) {
    for (auto g : {Grade::A, Grade::B, Grade::C, Grade::D, Grade::E})
        if (to_string(g) == s) return g;
    throw Error(Errc::parse_error, "unknown grade \"" + std::string(s) + "\"");
}

void GradeThresholds::validate() const {
    for (double t : {a, b, c, d})
        if (!std::isfinite(t)) throw Error(Errc::invalid_argument, "grade thresholds must be finite");
    if (!(a > b && b > c && c > d))
        throw Error(Errc::invalid_argument, "grade thresholds must be strictly decreasing A > B > C > D");
}

Grade letter_grade(std::int64_t score, std::int64_t classified_total, const GradeThresholds& t) {
    if (classified_total < 0) throw Error(Errc::invalid_argument, "classified total must be non-negative");
    t.validate();
    const double normalized =
        static_cast<double>(score) / static_cast<double>(std::max<std::int64_t>(1, classified_total));
    if (normalized >= t.a) return Grade::A;
    if (normalized >= t.b) return Grade::B;
    if (normalized >= t.c) return Grade::C;
    if (normalized >= t.d) return Grade::D;
    return Grade::E;
}

}  // namespace pg
