#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pg {

enum class DocumentKind { privacy_policy, terms_of_service, cookie_policy, unknown };

std::string_view to_string(DocumentKind kind) noexcept;
DocumentKind parse_document_kind(std::string_view s);

struct RawDocument {
    std::string source_url;
    DocumentKind kind = DocumentKind::unknown;
    std::string body;  // raw HTML or plain text, UTF-8
};

struct CleanParagraph {
    std::size_t index = 0;
    std::string text;
    std::size_t word_count = 0;

    friend bool operator==(const CleanParagraph&, const CleanParagraph&) = default;
};

/// Characters that may survive cleaning: a-z, 0-9, space and `. , ; : ' ? ! -`.
bool is_permitted_char(char c) noexcept;

/// Number of whitespace-delimited tokens.
std::size_t count_words(std::string_view text) noexcept;

// Individual cleaning stages, applied in this order by clean_text().

/// Removes markup. Text between tags is kept; the bodies of script and style
/// elements and HTML comments are dropped. Each removed tag becomes a space.
std::string strip_tags(std::string_view html);

/// Decodes named and numeric character references to UTF-8. Unknown
/// references are left untouched.
std::string decode_entities(std::string_view text);

/// Canonical decomposition followed by removal of combining marks. Code
/// points that do not reduce to ASCII become a space, except typographic
/// quotes and dashes which map to `'` and `-`.
std::string fold_to_ascii(std::string_view utf8);

/// Full cleaning pipeline: tags, entities, accent folding, lowercasing,
/// character filtering, whitespace collapse. Idempotent.
std::string clean_text(std::string_view body);

inline std::string clean(const RawDocument& raw) { return clean_text(raw.body); }

/// One CleanParagraph per non-empty block, reindexed from 0 in input order.
std::vector<CleanParagraph> split_paragraphs(std::span<const std::string> cleaned_blocks);

}  // namespace pg
