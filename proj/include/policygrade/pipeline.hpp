#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "policygrade/classify.hpp"
#include "policygrade/dataset.hpp"
#include "policygrade/embed.hpp"
#include "policygrade/metrics.hpp"
#include "policygrade/model_io.hpp"
#include "policygrade/summarize.hpp"

namespace pg {

/// Output of clean -> summarize -> embed for a batch of raw texts. Texts that
/// clean to nothing are dropped; `source_index` maps each survivor back.
struct EmbeddedTexts {
    std::vector<std::size_t> source_index;
    std::vector<Summary> summaries;
    std::vector<EmbeddingVector> vectors;
    bool degraded = false;
};

EmbeddedTexts embed_texts(std::span<const std::string> raw_texts, const SummarizerConfig& summarizer,
                          const EmbedderConfig& embedder);

/// Labeled feature vectors for one dataset, ready for fitting or scoring.
struct PreparedSet {
    std::vector<Example> examples;
    std::size_t dropped_empty = 0;  // points whose text cleaned to nothing
};

PreparedSet prepare_examples(const Dataset& ds, const SummarizerConfig& summarizer,
                             const EmbedderConfig& embedder);

struct PreparedSplit {
    std::string dataset_name;
    SplitSpec split;
    std::size_t train_size = 0;  // points assigned by the split, before cleaning
    std::size_t test_size = 0;
    PreparedSet train;
    PreparedSet test;
};

/// load -> split -> prepare both halves. Errors are prefixed with the
/// failing stage ("load", "split", "prepare train", "prepare test").
PreparedSplit prepare_split(const std::filesystem::path& dataset_path, const SplitSpec& split,
                            const SummarizerConfig& summarizer, const EmbedderConfig& embedder);

struct TrainResult {
    ModelArtifact artifact;
    MetricsRow metrics;
};

/// Fits one classifier on the training half, scores it on the test half and
/// writes the artifact to `out_path` (skipped when empty). Deterministic for
/// builtin backends.
TrainResult train_pipeline(const std::filesystem::path& dataset_path, const SplitSpec& split,
                           const SummarizerConfig& summarizer, const EmbedderConfig& embedder,
                           ClassifierKind kind, const ClassifierParams& params,
                           const std::filesystem::path& out_path);

/// Fits every registered classifier kind on the same split and returns one
/// metrics row per kind (knn, gaussian_nb, decision_tree).
std::vector<MetricsRow> evaluate_pipeline(const std::filesystem::path& dataset_path, const SplitSpec& split,
                                          const SummarizerConfig& summarizer, const EmbedderConfig& embedder,
                                          const ClassifierParams& params);

nlohmann::json metrics_to_json(const MetricsRow& row);

}  // namespace pg
