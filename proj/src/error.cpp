#include "policygrade/error.hpp"
#include "policygrade/labels.hpp"

namespace pg {

const char* to_string(Errc code) {
    switch (code) {
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::empty_text: return "EmptyText";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::backend_unavailable: return "BackendUnavailable";
        case Errc::parse_error: return "ParseError";
        case Errc::io_error: return "IoError";
        case Errc::fingerprint_mismatch: return "FingerprintMismatch";
        case Errc::no_analyzable_text: return "NoAnalyzableText";
        case Errc::payload_too_large: return "PayloadTooLarge";
        case Errc::model_missing: return "ModelMissing";
    }
    return "Unknown";
}

std::string_view to_string(Label l) noexcept {
    switch (l) {
        case Label::good: return "good";
        case Label::neutral: return "neutral";
        case Label::bad: return "bad";
        case Label::blocker: return "blocker";
    }
    return "unknown";
}

Label parse_label(std::string_view s) {
    for (Label l : kAllLabels)
        if (to_string(l) == s) return l;
    throw Error(Errc::parse_error, "unknown point label \"" + std::string(s) + "\"");
}

}  // namespace pg
