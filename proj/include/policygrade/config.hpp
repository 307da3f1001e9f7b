#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "policygrade/embed.hpp"
#include "policygrade/score_grade.hpp"
#include "policygrade/summarize.hpp"

namespace pg {

/// Runtime settings shared by the CLI and the HTTP service.
///
/// JSON config layout (every key optional):
///   {
///     "model_path": "model.pgm", "port": 8080, "host": "127.0.0.1",
///     "summarizer": {"backend": "external", "endpoint": "...", "timeout_ms": 10000},
///     "embedder":   {"backend": "builtin_hashed", "dimension": 768, "ngram_orders": [1, 2],
///                    "hash_seed": 0, "endpoint": "...", "timeout_ms": 10000},
///     "grading":    {"thresholds": {"A": 0.4, "B": 0.1, "C": -0.1, "D": -0.4}},
///     "scoring":    {"weights": {"good": 1, "neutral": 0, "bad": -1, "blocker": -3}},
///     "cors":       {"allowed_origins": ["chrome-extension://*"]}
///   }
struct AppConfig {
    SummarizerConfig summarizer;
    /// When present the loaded model must have been trained in this space.
    std::optional<EmbedderConfig> embedder;
    GradeThresholds thresholds;
    ScoreWeights weights;
    /// Exact origins, or prefixes ending in '*'.
    std::vector<std::string> cors_allowed_origins{"chrome-extension://*", "moz-extension://*"};
    std::string model_path;
    std::string host = "127.0.0.1";
    int port = 8080;

    void validate() const;
};

AppConfig config_from_json(const nlohmann::json& j);
AppConfig load_config(const std::filesystem::path& path);

/// Overlays PG_MODEL_PATH, PG_PORT, PG_SUMMARIZER_ENDPOINT,
/// PG_SUMMARIZER_TIMEOUT_MS and PG_EMBEDDER_ENDPOINT when set.
void apply_environment(AppConfig& cfg);

}  // namespace pg
