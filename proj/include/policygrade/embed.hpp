#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pg {

inline constexpr std::size_t kDefaultEmbeddingDimension = 768;

/// Unit-norm fixed-length representation of one summary.
struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dimension() const noexcept { return values.size(); }
    double norm() const noexcept;

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

enum class EmbedderBackend { builtin_hashed, external };

std::string_view to_string(EmbedderBackend b) noexcept;
EmbedderBackend parse_embedder_backend(std::string_view s);

struct EmbedderConfig {
    EmbedderBackend backend = EmbedderBackend::builtin_hashed;
    std::size_t dimension = kDefaultEmbeddingDimension;
    std::set<unsigned> ngram_orders{1, 2};
    std::uint64_t hash_seed = 0;
    std::string external_endpoint;
    std::chrono::milliseconds external_timeout{10000};

    void validate() const;

    /// Identity of the embedding space. Models refuse queries produced under
    /// a different fingerprint.
    std::string fingerprint() const;

    friend bool operator==(const EmbedderConfig&, const EmbedderConfig&) = default;
};

/// Seeded 64-bit hash of a byte string (FNV-1a followed by a SplitMix64
/// finalizer keyed by `seed`).
std::uint64_t seeded_hash(std::string_view bytes, std::uint64_t seed) noexcept;

/// Builtin: signed feature hashing of whitespace n-grams, L2-normalized.
/// External: POST {"texts": [text]} -> {"vectors": [[...]]}, L2-normalized.
/// Throws Error(empty_text) for blank input, Error(dimension_mismatch) and
/// Error(backend_unavailable) for external failures. Never falls back.
EmbeddingVector embed(std::string_view text, const EmbedderConfig& cfg);

/// Element-wise embed(). A failing element fails the whole batch; the error
/// carries the offending index.
std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts,
                                         const EmbedderConfig& cfg);

}  // namespace pg
