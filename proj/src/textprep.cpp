#include "policygrade/textprep.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include "policygrade/error.hpp"

namespace pg {

namespace {

char ascii_lower(char c) noexcept {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool iequals_at(std::string_view hay, std::size_t pos, std::string_view needle) {
    if (pos + needle.size() > hay.size()) return false;
    for (std::size_t i = 0; i < needle.size(); ++i)
        if (ascii_lower(hay[pos + i]) != needle[i]) return false;
    return true;
}

std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
    for (std::size_t i = from; i + needle.size() <= hay.size(); ++i)
        if (iequals_at(hay, i, needle)) return i;
    return std::string_view::npos;
}

// Position of the '>' closing the tag opened at `open`, honouring quoted
// attribute values.
std::size_t tag_end(std::string_view s, std::size_t open) {
    char quote = 0;
    for (std::size_t i = open + 1; i < s.size(); ++i) {
        const char c = s[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '>') {
            return i;
        }
    }
    return std::string_view::npos;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        out += ' ';
    } else if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

const std::unordered_map<std::string_view, std::uint32_t>& named_entities() {
    static const std::unordered_map<std::string_view, std::uint32_t> table = {
        {"amp", '&'},     {"lt", '<'},        {"gt", '>'},       {"quot", '"'},
        {"apos", '\''},   {"nbsp", 0xA0},     {"copy", 0xA9},    {"reg", 0xAE},
        {"trade", 0x2122}, {"hellip", 0x2026}, {"ndash", 0x2013}, {"mdash", 0x2014},
        {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
        {"bull", 0x2022}, {"middot", 0xB7},   {"laquo", 0xAB},   {"raquo", 0xBB},
        {"sect", 0xA7},   {"para", 0xB6},     {"deg", 0xB0},     {"euro", 0x20AC},
        {"pound", 0xA3},  {"yen", 0xA5},      {"cent", 0xA2},    {"shy", 0xAD},
        {"szlig", 0xDF},  {"aelig", 0xE6},    {"AElig", 0xC6},   {"oslash", 0xF8},
        {"Oslash", 0xD8}, {"eth", 0xF0},      {"thorn", 0xFE},   {"times", 0xD7},
    };
    return table;
}

// &eacute; &Ouml; ... : base letter followed by a diacritic suffix.
std::optional<std::string> diacritic_entity(std::string_view name) {
    static constexpr std::array<std::pair<std::string_view, std::uint32_t>, 7> marks = {{
        {"grave", 0x300}, {"acute", 0x301}, {"circ", 0x302}, {"tilde", 0x303},
        {"uml", 0x308},   {"ring", 0x30A},  {"cedil", 0x327},
    }};
    if (name.size() < 2 || !std::isalpha(static_cast<unsigned char>(name[0]))) return std::nullopt;
    const std::string_view suffix = name.substr(1);
    for (const auto& [s, mark] : marks) {
        if (suffix == s) {
            std::string out(1, name[0]);
            append_utf8(out, mark);
            return out;
        }
    }
    return std::nullopt;
}

std::uint32_t fold_punctuation(UChar32 cp) {
    switch (cp) {
        case 0x2018: case 0x2019: case 0x201B: case 0x2032: return '\'';
        case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2212: return '-';
        default: return ' ';
    }
}

}  // namespace

std::string_view to_string(DocumentKind kind) noexcept {
    switch (kind) {
        case DocumentKind::privacy_policy: return "privacy_policy";
        case DocumentKind::terms_of_service: return "terms_of_service";
        case DocumentKind::cookie_policy: return "cookie_policy";
        case DocumentKind::unknown: return "unknown";
    }
    return "unknown";
}

DocumentKind parse_document_kind(std::string_view s) {
    for (auto k : {DocumentKind::privacy_policy, DocumentKind::terms_of_service,
                   DocumentKind::cookie_policy, DocumentKind::unknown})
        if (to_string(k) == s) return k;
    throw Error(Errc::parse_error, "unknown document kind \"" + std::string(s) + "\"");
}

bool is_permitted_char(char c) noexcept {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) return true;
    switch (c) {
        case ' ': case '.': case ',': case ';': case ':':
        case '\'': case '?': case '!': case '-':
            return true;
        default:
            return false;
    }
}

std::size_t count_words(std::string_view text) noexcept {
    std::size_t n = 0;
    bool in_word = false;
    for (char c : text) {
        const bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!ws && !in_word) ++n;
        in_word = !ws;
    }
    return n;
}

std::string strip_tags(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '<') {
            out += s[i++];
            continue;
        }
        if (s.compare(i, 4, "<!--") == 0) {
            const auto end = s.find("-->", i + 4);
            i = end == std::string_view::npos ? s.size() : end + 3;
            out += ' ';
            continue;
        }
        const char next = i + 1 < s.size() ? s[i + 1] : '\0';
        const bool looks_like_tag = std::isalpha(static_cast<unsigned char>(next)) ||
                                    next == '/' || next == '!' || next == '?';
        const auto close = looks_like_tag ? tag_end(s, i) : std::string_view::npos;
        if (close == std::string_view::npos) {
            out += s[i++];
            continue;
        }
        std::string name;
        for (std::size_t j = i + 1; j < close && std::isalnum(static_cast<unsigned char>(s[j])); ++j)
            name += ascii_lower(s[j]);
        i = close + 1;
        if (name == "script" || name == "style") {
            const auto end_tag = ifind(s, "</" + name, i);
            if (end_tag == std::string_view::npos) {
                i = s.size();
            } else {
                const auto gt = tag_end(s, end_tag);
                i = gt == std::string_view::npos ? s.size() : gt + 1;
            }
        }
        out += ' ';
    }
    return out;
}

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        const auto semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12 || semi == i + 1) {
            out += s[i++];
            continue;
        }
        const std::string_view name = s.substr(i + 1, semi - i - 1);
        bool decoded = false;
        if (name[0] == '#') {
            const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
            const std::string_view digits = name.substr(hex ? 2 : 1);
            std::uint32_t cp = 0;
            bool ok = !digits.empty();
            for (char c : digits) {
                int v;
                if (c >= '0' && c <= '9') v = c - '0';
                else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
                else { ok = false; break; }
                cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
                if (cp > 0x10FFFF) { ok = false; break; }
            }
            if (ok) {
                append_utf8(out, cp);
                decoded = true;
            }
        } else if (auto it = named_entities().find(name); it != named_entities().end()) {
            append_utf8(out, it->second);
            decoded = true;
        } else if (auto composed = diacritic_entity(name)) {
            out += *composed;
            decoded = true;
        }
        if (decoded) {
            i = semi + 1;
        } else {
            out += s[i++];
        }
    }
    return out;
}

std::string fold_to_ascii(std::string_view utf8) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
    if (U_FAILURE(status)) throw Error(Errc::invalid_argument, "ICU NFD normalizer unavailable");

    const icu::UnicodeString src = icu::UnicodeString::fromUTF8(
        icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    const icu::UnicodeString decomposed = nfd->normalize(src, status);
    if (U_FAILURE(status)) throw Error(Errc::invalid_argument, "canonical decomposition failed");

    std::string out;
    out.reserve(utf8.size());
    for (int32_t i = 0; i < decomposed.length();) {
        const UChar32 cp = decomposed.char32At(i);
        i += U16_LENGTH(cp);
        if (cp < 0x80) {
            out += static_cast<char>(cp);
            continue;
        }
        const auto gc = u_charType(cp);
        if (gc == U_NON_SPACING_MARK || gc == U_COMBINING_SPACING_MARK || gc == U_ENCLOSING_MARK)
            continue;
        out += static_cast<char>(fold_punctuation(cp));
    }
    return out;
}

std::string clean_text(std::string_view body) {
    const std::string folded = fold_to_ascii(decode_entities(strip_tags(body)));
    std::string out;
    out.reserve(folded.size());
    for (char c : folded) {
        c = ascii_lower(c);
        if (!is_permitted_char(c)) c = ' ';
        if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
        out += c;
    }
    if (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<CleanParagraph> split_paragraphs(std::span<const std::string> cleaned_blocks) {
    std::vector<CleanParagraph> out;
    for (const auto& block : cleaned_blocks) {
        const std::size_t wc = count_words(block);
        if (wc == 0) continue;
        out.push_back({out.size(), block, wc});
    }
    return out;
}

}  // namespace pg
