#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace pg {

/// Point class of a policy snippet, ordered from most to least favourable.
enum class Label : unsigned char { good = 0, neutral = 1, bad = 2, blocker = 3 };

inline constexpr std::size_t kNumLabels = 4;
inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::good, Label::neutral, Label::bad, Label::blocker};

/// Per-class value indexed by `index_of(label)`.
using ScoreMap = std::array<double, kNumLabels>;

constexpr std::size_t index_of(Label l) noexcept { return static_cast<std::size_t>(l); }

std::string_view to_string(Label l) noexcept;

/// Accepts exactly "good", "neutral", "bad", "blocker"; throws pg::Error otherwise.
Label parse_label(std::string_view s);

}  // namespace pg
