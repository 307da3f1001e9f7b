#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "policygrade/labels.hpp"

namespace pg {

struct Example {
    std::vector<double> features;
    Label label = Label::neutral;
};

struct Prediction {
    Label label = Label::neutral;
    ScoreMap scores{};  // sums to 1
};

enum class ClassifierKind { knn, gaussian_nb, decision_tree };

std::string_view to_string(ClassifierKind k) noexcept;
ClassifierKind parse_classifier_kind(std::string_view s);

struct ClassifierParams {
    std::size_t k = 3;                  // knn
    std::size_t max_depth = 12;         // decision_tree
    std::size_t max_thresholds = 32;    // decision_tree: candidate cuts per dimension
    std::size_t min_samples_split = 2;  // decision_tree

    friend bool operator==(const ClassifierParams&, const ClassifierParams&) = default;
};

/// Trained model over fixed-dimension feature vectors. Implementations are
/// immutable after construction, so predict() may be called concurrently.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual ClassifierKind kind() const noexcept = 0;
    virtual std::size_t dimension() const noexcept = 0;
    /// Throws Error(dimension_mismatch) when `x` has the wrong length.
    virtual Prediction predict(std::span<const double> x) const = 0;
};

// ---------------------------------------------------------------------------
// k-nearest neighbours

/// Lazy learner: keeps every training point. Neighbours are ranked by
/// Euclidean distance, equal distances by stored index. Each neighbour casts
/// one vote; vote ties go to the class of the nearest tied neighbour.
class KnnModel final : public Classifier {
public:
    KnnModel(std::size_t k, std::vector<Example> points, std::string embedder_fingerprint);

    ClassifierKind kind() const noexcept override { return ClassifierKind::knn; }
    std::size_t dimension() const noexcept override { return dimension_; }
    Prediction predict(std::span<const double> x) const override;

    std::size_t k() const noexcept { return k_; }
    const std::vector<Example>& points() const noexcept { return points_; }
    const std::string& embedder_fingerprint() const noexcept { return fingerprint_; }

private:
    std::size_t k_;
    std::size_t dimension_;
    std::vector<Example> points_;
    std::string fingerprint_;
};

KnnModel knn_fit(std::vector<Example> train, std::size_t k, std::string fingerprint);
Prediction knn_predict(const KnnModel& model, std::span<const double> query);

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

struct GaussianClassStats {
    double prior = 0.0;
    std::vector<double> mean;
    std::vector<double> variance;  // floored at kVarianceFloor
};

class GaussianNbModel final : public Classifier {
public:
    static constexpr double kVarianceFloor = 1e-9;

    explicit GaussianNbModel(std::array<GaussianClassStats, kNumLabels> stats);

    ClassifierKind kind() const noexcept override { return ClassifierKind::gaussian_nb; }
    std::size_t dimension() const noexcept override { return stats_[0].mean.size(); }
    Prediction predict(std::span<const double> x) const override;

    const std::array<GaussianClassStats, kNumLabels>& stats() const noexcept { return stats_; }

private:
    std::array<GaussianClassStats, kNumLabels> stats_;
};

/// Requires every class to be present in `train`.
GaussianNbModel fit_gaussian_nb(std::span<const Example> train);

// ---------------------------------------------------------------------------
// CART decision tree (Gini impurity)

struct TreeNode {
    int feature = -1;  // -1 for a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    Label label = Label::neutral;
    ScoreMap scores{};  // class frequencies of the training rows reaching this node

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTreeModel final : public Classifier {
public:
    DecisionTreeModel(std::size_t dimension, std::vector<TreeNode> nodes);

    ClassifierKind kind() const noexcept override { return ClassifierKind::decision_tree; }
    std::size_t dimension() const noexcept override { return dimension_; }
    Prediction predict(std::span<const double> x) const override;

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const;

private:
    std::size_t dimension_;
    std::vector<TreeNode> nodes_;  // nodes_[0] is the root
};

DecisionTreeModel fit_decision_tree(std::span<const Example> train, const ClassifierParams& params);

// ---------------------------------------------------------------------------

/// Trains a model of the given kind. `fingerprint` is only used by knn.
std::shared_ptr<const Classifier> fit_classifier(ClassifierKind kind, std::span<const Example> train,
                                                 const ClassifierParams& params,
                                                 std::string fingerprint = "unspecified");

}  // namespace pg
