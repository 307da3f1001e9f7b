#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "policygrade/classify.hpp"
#include "policygrade/embed.hpp"

namespace pg {

/// A trained classifier together with the embedding space it was trained in.
///
/// On-disk layout (all integers little-endian):
///
///   "PGMODEL\0"            8-byte magic
///   u32 format_version
///   u64 header_size, header JSON (format_version, kind, params, embedder,
///                    embedder_fingerprint, classes, dimension, metadata)
///   u64 payload_size, payload (kind-specific, IEEE-754 doubles)
///
/// Serialization is canonical: write -> read -> write reproduces the bytes.
struct ModelArtifact {
    static constexpr std::uint32_t kFormatVersion = 1;

    ClassifierKind kind = ClassifierKind::knn;
    ClassifierParams params;
    EmbedderConfig embedder;
    std::string embedder_fingerprint;
    nlohmann::json metadata = nlohmann::json::object();
    std::shared_ptr<const Classifier> model;
};

std::string serialize_artifact(const ModelArtifact& artifact);
ModelArtifact deserialize_artifact(std::string_view bytes);

void write_artifact(const ModelArtifact& artifact, const std::filesystem::path& path);
ModelArtifact read_artifact(const std::filesystem::path& path);

nlohmann::json embedder_to_json(const EmbedderConfig& cfg);
EmbedderConfig embedder_from_json(const nlohmann::json& j);

}  // namespace pg
