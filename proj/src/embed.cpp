#include "policygrade/embed.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

#include "policygrade/error.hpp"
#include "policygrade/http_client.hpp"

namespace pg {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
// Re-keys the sign hash so it is independent of the bucket hash.
constexpr std::uint64_t kSignKey = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool is_blank(std::string_view s) noexcept {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

std::vector<std::string_view> whitespace_tokens(std::string_view text) {
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

void normalize_in_place(std::vector<double>& v, std::string_view what) {
    double sq = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) throw Error(Errc::backend_unavailable, std::string(what) + ": non-finite entry");
        sq += x * x;
    }
    const double n = std::sqrt(sq);
    if (n == 0.0) throw Error(Errc::empty_text, std::string(what) + ": embedding has zero norm");
    for (double& x : v) x /= n;
}

EmbeddingVector embed_builtin(std::string_view text, const EmbedderConfig& cfg) {
    const auto tokens = whitespace_tokens(text);
    std::vector<double> acc(cfg.dimension, 0.0);
    std::string gram;
    for (unsigned order : cfg.ngram_orders) {
        if (tokens.size() < order) continue;
        for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
            gram.assign(tokens[i]);
            for (std::size_t j = 1; j < order; ++j) {
                gram += ' ';
                gram += tokens[i + j];
            }
            const std::uint64_t bucket_hash = seeded_hash(gram, cfg.hash_seed);
            const std::uint64_t sign_hash = seeded_hash(gram, cfg.hash_seed ^ kSignKey);
            acc[bucket_hash % cfg.dimension] += (sign_hash & 1U) == 0 ? 1.0 : -1.0;
        }
    }
    normalize_in_place(acc, "builtin embedder");
    return {std::move(acc)};
}

std::vector<EmbeddingVector> embed_external(std::span<const std::string> texts,
                                            const EmbedderConfig& cfg) {
    const nlohmann::json body = {{"texts", texts}};
    const auto response = http::post_json(cfg.external_endpoint, body, cfg.external_timeout);
    if (!response.is_object() || !response.contains("vectors") || !response["vectors"].is_array())
        throw Error(Errc::backend_unavailable, "external embedder response lacks \"vectors\"");
    const auto& vectors = response["vectors"];
    if (vectors.size() != texts.size())
        throw Error(Errc::backend_unavailable, "external embedder returned " +
                                                   std::to_string(vectors.size()) + " vectors for " +
                                                   std::to_string(texts.size()) + " texts");
    std::vector<EmbeddingVector> out;
    out.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const auto& v = vectors[i];
        if (!v.is_array())
            throw Error(Errc::backend_unavailable, "external embedder vector is not an array", i);
        if (v.size() != cfg.dimension)
            throw Error(Errc::dimension_mismatch,
                        "external embedder returned dimension " + std::to_string(v.size()) +
                            ", expected " + std::to_string(cfg.dimension),
                        i);
        std::vector<double> values;
        values.reserve(v.size());
        for (const auto& x : v) {
            if (!x.is_number())
                throw Error(Errc::backend_unavailable, "external embedder vector has non-numeric entry", i);
            values.push_back(x.get<double>());
        }
        normalize_in_place(values, "external embedder");
        out.push_back({std::move(values)});
    }
    return out;
}

}  // namespace

double EmbeddingVector::norm() const noexcept {
    return std::sqrt(std::inner_product(values.begin(), values.end(), values.begin(), 0.0));
}

std::string_view to_string(EmbedderBackend b) noexcept {
    return b == EmbedderBackend::external ? "external" : "builtin_hashed";
}

EmbedderBackend parse_embedder_backend(std::string_view s) {
    if (s == "builtin_hashed" || s == "builtin") return EmbedderBackend::builtin_hashed;
    if (s == "external") return EmbedderBackend::external;
    throw Error(Errc::invalid_argument, "unknown embedder backend \"" + std::string(s) + "\"");
}

void EmbedderConfig::validate() const {
    if (dimension < 2) throw Error(Errc::invalid_argument, "embedding dimension must be at least 2");
    if (ngram_orders.empty() || ngram_orders.count(0) != 0)
        throw Error(Errc::invalid_argument, "n-gram orders must be a non-empty set of positive integers");
    const bool external = backend == EmbedderBackend::external;
    if (external == external_endpoint.empty())
        throw Error(Errc::invalid_argument,
                    "embedder endpoint must be set exactly when the backend is external");
}

std::string EmbedderConfig::fingerprint() const {
    std::string fp(to_string(backend));
    fp += ":dim=" + std::to_string(dimension);
    if (backend == EmbedderBackend::external) {
        fp += ":endpoint=" + external_endpoint;
        return fp;
    }
    fp += ":orders=";
    bool first = true;
    for (unsigned o : ngram_orders) {
        if (!first) fp += ',';
        fp += std::to_string(o);
        first = false;
    }
    fp += ":seed=" + std::to_string(hash_seed);
    return fp;
}

std::uint64_t seeded_hash(std::string_view bytes, std::uint64_t seed) noexcept {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return splitmix64(h ^ splitmix64(seed));
}

EmbeddingVector embed(std::string_view text, const EmbedderConfig& cfg) {
    cfg.validate();
    if (is_blank(text)) throw Error(Errc::empty_text, "cannot embed empty text");
    if (cfg.backend == EmbedderBackend::builtin_hashed) return embed_builtin(text, cfg);
    const std::string owned(text);
    return std::move(embed_external(std::span<const std::string>(&owned, 1), cfg).front());
}

std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts,
                                         const EmbedderConfig& cfg) {
    cfg.validate();
    for (std::size_t i = 0; i < texts.size(); ++i)
        if (is_blank(texts[i]))
            throw Error(Errc::empty_text, "cannot embed empty text at index " + std::to_string(i), i);
    if (texts.empty()) return {};

    if (cfg.backend == EmbedderBackend::external) return embed_external(texts, cfg);

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        try {
            out.push_back(embed_builtin(texts[i], cfg));
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + " (index " + std::to_string(i) + ")", i);
        }
    }
    return out;
}

}  // namespace pg
