#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "policygrade/classify.hpp"
#include "policygrade/labels.hpp"

namespace pg {

/// rows = true class, columns = predicted class.
using ConfusionMatrix = std::array<std::array<std::size_t, kNumLabels>, kNumLabels>;

ConfusionMatrix confusion_matrix(std::span<const Label> y_true, std::span<const Label> y_pred);

struct MetricsRow {
    std::string model_name;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    double auc = 0.0;

    friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

/// One-vs-rest ROC area for scores where `positive[i]` marks the positive
/// rows (nonzero entries). Built by sweeping thresholds from high to low over distinct scores
/// and integrating with the trapezoid rule. Returns nullopt when either side
/// is empty.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const std::uint8_t> positive);

/// Support-weighted precision/recall/F1 from the confusion matrix, accuracy
/// as trace/total, support-weighted one-vs-rest AUC. Classes without support
/// carry no weight. AUC is 0.5 when no class has both positives and negatives.
MetricsRow compute_metrics(std::span<const Label> y_true, std::span<const Label> y_pred,
                           std::span<const ScoreMap> y_scores, std::string model_name = "");

struct NamedModel {
    std::string name;
    std::shared_ptr<const Classifier> model;
};

/// One row per model in input order.
std::vector<MetricsRow> evaluate(std::span<const NamedModel> models, std::span<const Example> test);

}  // namespace pg
