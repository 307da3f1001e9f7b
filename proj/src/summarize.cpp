#include "policygrade/summarize.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include "policygrade/error.hpp"
#include "policygrade/http_client.hpp"

namespace pg {

namespace {

constexpr std::size_t kMaxInFlight = 8;

bool is_terminator(char c) noexcept { return c == '.' || c == '?' || c == '!'; }

bool is_punct(char c) noexcept {
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '\'' || c == '?' || c == '!' ||
           c == '-';
}

// Term identity ignores punctuation glued to either end of the token.
std::string_view term_key(std::string_view token) noexcept {
    while (!token.empty() && is_punct(token.front())) token.remove_prefix(1);
    while (!token.empty() && is_punct(token.back())) token.remove_suffix(1);
    return token;
}

std::vector<std::string_view> tokenize(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

std::string join(std::span<const std::string_view> words) {
    std::string out;
    for (const auto w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

Summary passthrough(const CleanParagraph& p) {
    return {p.index, p.text, p.word_count, SummarizerBackend::builtin_extractive, false};
}

Summary call_external(const CleanParagraph& p, std::size_t max_words,
                      const SummarizerConfig& cfg) {
    const nlohmann::json body = {{"text", p.text}, {"max_words", max_words}};
    const auto response = http::post_json(cfg.external_endpoint, body, cfg.external_timeout);
    if (!response.is_object() || !response.contains("summary") || !response["summary"].is_string())
        throw Error(Errc::backend_unavailable, "external summarizer response lacks \"summary\"");
    std::string text = response["summary"].get<std::string>();
    const std::size_t wc = count_words(text);
    if (wc == 0) throw Error(Errc::backend_unavailable, "external summarizer returned an empty summary");
    return {p.index, std::move(text), wc, SummarizerBackend::external, false};
}

}  // namespace

std::string_view to_string(SummarizerBackend b) noexcept {
    return b == SummarizerBackend::external ? "external" : "builtin_extractive";
}

SummarizerBackend parse_summarizer_backend(std::string_view s) {
    if (s == "builtin_extractive" || s == "builtin") return SummarizerBackend::builtin_extractive;
    if (s == "external") return SummarizerBackend::external;
    throw Error(Errc::invalid_argument, "unknown summarizer backend \"" + std::string(s) + "\"");
}

void SummarizerConfig::validate() const {
    const bool external = backend == SummarizerBackend::external;
    if (external == external_endpoint.empty())
        throw Error(Errc::invalid_argument,
                    "summarizer endpoint must be set exactly when the backend is external");
    if (external_timeout.count() <= 0)
        throw Error(Errc::invalid_argument, "summarizer timeout must be positive");
}

SummaryBudget plan_budget(std::size_t word_count) noexcept {
    if (word_count > 400) return {200};
    if (word_count > 200) return {100};
    if (word_count > 100) return {75};
    if (word_count > 75) return {50};
    return {};
}

std::vector<std::vector<std::string_view>> split_sentences(std::string_view text) {
    std::vector<std::vector<std::string_view>> sentences;
    std::vector<std::string_view> current;
    for (const auto token : tokenize(text)) {
        current.push_back(token);
        if (is_terminator(token.back())) sentences.push_back(std::exchange(current, {}));
    }
    if (!current.empty()) sentences.push_back(std::move(current));
    return sentences;
}

Summary extractive_summarize(const CleanParagraph& paragraph, SummaryBudget budget) {
    if (budget.is_none()) return passthrough(paragraph);
    const std::size_t cap = *budget.max_words;

    const auto sentences = split_sentences(paragraph.text);
    if (sentences.empty()) return {paragraph.index, "", 0, SummarizerBackend::builtin_extractive};

    std::unordered_map<std::string_view, std::size_t> freq;
    std::size_t total = 0;
    for (const auto& s : sentences) {
        for (const auto tok : s) {
            ++total;
            if (auto key = term_key(tok); !key.empty()) ++freq[key];
        }
    }

    std::vector<double> score(sentences.size(), 0.0);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        double sum = 0.0;
        for (const auto tok : sentences[i]) {
            if (auto key = term_key(tok); !key.empty())
                sum += static_cast<double>(freq[key]) / static_cast<double>(total);
        }
        score[i] = sum / static_cast<double>(sentences[i].size());
    }

    std::vector<std::size_t> order(sentences.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });

    std::vector<bool> chosen(sentences.size(), false);
    std::size_t used = 0;
    for (std::size_t idx : order) {
        if (used + sentences[idx].size() <= cap) {
            chosen[idx] = true;
            used += sentences[idx].size();
        }
    }

    std::vector<std::string_view> words;
    if (used == 0) {
        const auto& top = sentences[order.front()];
        words.assign(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(std::min(cap, top.size())));
    } else {
        for (std::size_t i = 0; i < sentences.size(); ++i)
            if (chosen[i]) words.insert(words.end(), sentences[i].begin(), sentences[i].end());
    }
    return {paragraph.index, join(words), words.size(), SummarizerBackend::builtin_extractive};
}

std::vector<Summary> summarize_document(std::span<const CleanParagraph> paragraphs,
                                        const SummarizerConfig& cfg) {
    cfg.validate();
    std::vector<Summary> out(paragraphs.size());
    std::vector<std::size_t> remote;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        const auto budget = plan_budget(paragraphs[i].word_count);
        if (budget.is_none()) {
            out[i] = passthrough(paragraphs[i]);
        } else if (cfg.backend == SummarizerBackend::builtin_extractive) {
            out[i] = extractive_summarize(paragraphs[i], budget);
        } else {
            remote.push_back(i);
        }
    }

    for (std::size_t start = 0; start < remote.size(); start += kMaxInFlight) {
        const std::size_t end = std::min(remote.size(), start + kMaxInFlight);
        std::vector<std::future<Summary>> inflight;
        for (std::size_t r = start; r < end; ++r) {
            const CleanParagraph& p = paragraphs[remote[r]];
            inflight.push_back(std::async(std::launch::async, [&p, &cfg] {
                const auto budget = plan_budget(p.word_count);
                try {
                    return call_external(p, *budget.max_words, cfg);
                } catch (const std::exception&) {
                    Summary fallback = extractive_summarize(p, budget);
                    fallback.degraded = true;
                    return fallback;
                }
            }));
        }
        for (std::size_t r = start; r < end; ++r) out[remote[r]] = inflight[r - start].get();
    }
    return out;
}

}  // namespace pg
