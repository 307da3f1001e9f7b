#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "policygrade/textprep.hpp"

namespace pg {

/// Maximum summary length in words; `max_words == nullopt` means the
/// paragraph is short enough to pass through untouched.
struct SummaryBudget {
    std::optional<std::size_t> max_words;

    bool is_none() const noexcept { return !max_words.has_value(); }
    friend bool operator==(const SummaryBudget&, const SummaryBudget&) = default;
};

enum class SummarizerBackend { builtin_extractive, external };

std::string_view to_string(SummarizerBackend b) noexcept;
SummarizerBackend parse_summarizer_backend(std::string_view s);

struct Summary {
    std::size_t paragraph_index = 0;
    std::string text;
    std::size_t word_count = 0;
    SummarizerBackend backend = SummarizerBackend::builtin_extractive;
    /// Set when the external backend failed and the builtin one stood in.
    bool degraded = false;
};

struct SummarizerConfig {
    SummarizerBackend backend = SummarizerBackend::builtin_extractive;
    std::string external_endpoint;
    std::chrono::milliseconds external_timeout{10000};

    void validate() const;
};

/// Length tier for a paragraph, decided once on its original word count:
/// >400 -> 200, >200 -> 100, >100 -> 75, >75 -> 50, otherwise none.
SummaryBudget plan_budget(std::size_t word_count) noexcept;

/// Splits text into sentences ending at `.`, `?` or `!`. A sentence is the
/// run of whitespace tokens up to and including the token carrying the
/// terminator; trailing tokens without one form a final sentence.
std::vector<std::vector<std::string_view>> split_sentences(std::string_view text);

/// Deterministic frequency-based extractive summary within the word budget.
Summary extractive_summarize(const CleanParagraph& paragraph, SummaryBudget budget);

/// Summarizes each paragraph in order. The external backend receives
/// {"text", "max_words"} and must answer {"summary"}; any failure falls back
/// to the builtin summarizer for that paragraph and marks it degraded.
std::vector<Summary> summarize_document(std::span<const CleanParagraph> paragraphs,
                                        const SummarizerConfig& cfg);

}  // namespace pg
