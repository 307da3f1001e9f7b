#include "policygrade/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "policygrade/error.hpp"

namespace pg {

namespace {

void check_dimension(std::size_t expected, std::size_t got) {
    if (expected != got)
        throw Error(Errc::dimension_mismatch, "feature dimension " + std::to_string(got) +
                                                  " does not match model dimension " +
                                                  std::to_string(expected));
}

std::size_t uniform_dimension(std::span<const Example> train) {
    if (train.empty()) throw Error(Errc::invalid_argument, "training set is empty");
    const std::size_t dim = train.front().features.size();
    if (dim == 0) throw Error(Errc::invalid_argument, "training vectors have dimension 0");
    for (std::size_t i = 1; i < train.size(); ++i)
        if (train[i].features.size() != dim)
            throw Error(Errc::dimension_mismatch,
                        "training vector " + std::to_string(i) + " has dimension " +
                            std::to_string(train[i].features.size()) + ", expected " +
                            std::to_string(dim),
                        i);
    return dim;
}

// First index attaining the maximum.
Label argmax(const ScoreMap& s) noexcept {
    return kAllLabels[static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin())];
}

double gini(const std::array<std::size_t, kNumLabels>& counts, std::size_t n) noexcept {
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (auto c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(n);
        sum += p * p;
    }
    return 1.0 - sum;
}

}  // namespace

std::string_view to_string(ClassifierKind k) noexcept {
    switch (k) {
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::gaussian_nb: return "gaussian_nb";
        case ClassifierKind::decision_tree: return "decision_tree";
    }
    return "unknown";
}

ClassifierKind parse_classifier_kind(std::string_view s) {
    for (auto k : {ClassifierKind::knn, ClassifierKind::gaussian_nb, ClassifierKind::decision_tree})
        if (to_string(k) == s) return k;
    throw Error(Errc::invalid_argument, "unknown classifier kind \"" + std::string(s) + "\"");
}

// ---------------------------------------------------------------------------

KnnModel::KnnModel(std::size_t k, std::vector<Example> points, std::string embedder_fingerprint)
    : k_(k), dimension_(0), points_(std::move(points)), fingerprint_(std::move(embedder_fingerprint)) {
    if (k_ == 0) throw Error(Errc::invalid_argument, "k must be at least 1");
    if (k_ > points_.size())
        throw Error(Errc::invalid_argument, "k=" + std::to_string(k_) + " exceeds the " +
                                                std::to_string(points_.size()) + " training points");
    if (fingerprint_.empty()) throw Error(Errc::invalid_argument, "embedder fingerprint is empty");
    dimension_ = uniform_dimension(points_);
}

Prediction KnnModel::predict(std::span<const double> x) const {
    check_dimension(dimension_, x.size());
    std::vector<double> dist(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i].features;
        double sq = 0.0;
        for (std::size_t d = 0; d < dimension_; ++d) {
            const double diff = x[d] - p[d];
            sq += diff * diff;
        }
        dist[i] = std::sqrt(sq);
    }
    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
                      });

    std::array<std::size_t, kNumLabels> votes{};
    for (std::size_t r = 0; r < k_; ++r) ++votes[index_of(points_[order[r]].label)];
    const std::size_t top = *std::max_element(votes.begin(), votes.end());

    Prediction pred;
    for (std::size_t c = 0; c < kNumLabels; ++c)
        pred.scores[c] = static_cast<double>(votes[c]) / static_cast<double>(k_);
    for (std::size_t r = 0; r < k_; ++r) {
        const Label l = points_[order[r]].label;
        if (votes[index_of(l)] == top) {
            pred.label = l;
            break;
        }
    }
    return pred;
}

KnnModel knn_fit(std::vector<Example> train, std::size_t k, std::string fingerprint) {
    return KnnModel(k, std::move(train), std::move(fingerprint));
}

Prediction knn_predict(const KnnModel& model, std::span<const double> query) {
    return model.predict(query);
}

// ---------------------------------------------------------------------------

GaussianNbModel::GaussianNbModel(std::array<GaussianClassStats, kNumLabels> stats)
    : stats_(std::move(stats)) {
    const std::size_t dim = stats_[0].mean.size();
    for (const auto& s : stats_)
        if (s.mean.size() != dim || s.variance.size() != dim)
            throw Error(Errc::dimension_mismatch, "inconsistent naive Bayes parameter dimensions");
}

Prediction GaussianNbModel::predict(std::span<const double> x) const {
    check_dimension(dimension(), x.size());
    ScoreMap log_post{};
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        const auto& s = stats_[c];
        double lp = std::log(s.prior);
        for (std::size_t d = 0; d < x.size(); ++d) {
            const double diff = x[d] - s.mean[d];
            lp -= 0.5 * std::log(2.0 * std::numbers::pi * s.variance[d]) +
                  diff * diff / (2.0 * s.variance[d]);
        }
        log_post[c] = lp;
    }
    const double peak = *std::max_element(log_post.begin(), log_post.end());
    double total = 0.0;
    Prediction pred;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        pred.scores[c] = std::exp(log_post[c] - peak);
        total += pred.scores[c];
    }
    for (double& v : pred.scores) v /= total;
    pred.label = argmax(log_post);
    return pred;
}

GaussianNbModel fit_gaussian_nb(std::span<const Example> train) {
    const std::size_t dim = uniform_dimension(train);
    std::array<std::size_t, kNumLabels> counts{};
    for (const auto& e : train) ++counts[index_of(e.label)];
    for (std::size_t c = 0; c < kNumLabels; ++c)
        if (counts[c] == 0)
            throw Error(Errc::invalid_argument, "gaussian_nb requires every class in the training set; "
                                                "missing class \"" +
                                                    std::string(to_string(kAllLabels[c])) + "\"");

    std::array<GaussianClassStats, kNumLabels> stats;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        stats[c].prior = static_cast<double>(counts[c]) / static_cast<double>(train.size());
        stats[c].mean.assign(dim, 0.0);
        stats[c].variance.assign(dim, 0.0);
    }
    for (const auto& e : train) {
        auto& mean = stats[index_of(e.label)].mean;
        for (std::size_t d = 0; d < dim; ++d) mean[d] += e.features[d];
    }
    for (std::size_t c = 0; c < kNumLabels; ++c)
        for (double& m : stats[c].mean) m /= static_cast<double>(counts[c]);
    for (const auto& e : train) {
        auto& s = stats[index_of(e.label)];
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = e.features[d] - s.mean[d];
            s.variance[d] += diff * diff;
        }
    }
    for (std::size_t c = 0; c < kNumLabels; ++c)
        for (double& v : stats[c].variance)
            v = std::max(v / static_cast<double>(counts[c]), GaussianNbModel::kVarianceFloor);
    return GaussianNbModel(std::move(stats));
}

// ---------------------------------------------------------------------------

DecisionTreeModel::DecisionTreeModel(std::size_t dimension, std::vector<TreeNode> nodes)
    : dimension_(dimension), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw Error(Errc::invalid_argument, "decision tree has no nodes");
    const int n = static_cast<int>(nodes_.size());
    for (const auto& node : nodes_) {
        if (node.is_leaf()) continue;
        if (static_cast<std::size_t>(node.feature) >= dimension_ || node.left <= 0 ||
            node.right <= 0 || node.left >= n || node.right >= n)
            throw Error(Errc::parse_error, "decision tree node references are out of range");
    }
}

Prediction DecisionTreeModel::predict(std::span<const double> x) const {
    check_dimension(dimension_, x.size());
    std::size_t at = 0;
    // Children always follow their parent, so this walk terminates.
    while (!nodes_[at].is_leaf()) {
        const auto& node = nodes_[at];
        const auto next = static_cast<std::size_t>(
            x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
        if (next <= at) throw Error(Errc::parse_error, "decision tree contains a cycle");
        at = next;
    }
    return {nodes_[at].label, nodes_[at].scores};
}

std::size_t DecisionTreeModel::depth() const {
    std::function<std::size_t(std::size_t)> walk = [&](std::size_t i) -> std::size_t {
        const auto& n = nodes_[i];
        if (n.is_leaf()) return 0;
        return 1 + std::max(walk(static_cast<std::size_t>(n.left)), walk(static_cast<std::size_t>(n.right)));
    };
    return walk(0);
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(std::span<const Example> train, std::size_t dim, const ClassifierParams& params)
        : train_(train), dim_(dim), params_(params) {}

    std::vector<TreeNode> build() {
        std::vector<std::size_t> all(train_.size());
        std::iota(all.begin(), all.end(), 0);
        grow(std::move(all), 0);
        return std::move(nodes_);
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };

    int grow(std::vector<std::size_t> rows, std::size_t depth) {
        std::array<std::size_t, kNumLabels> counts{};
        for (auto r : rows) ++counts[index_of(train_[r].label)];

        TreeNode node;
        for (std::size_t c = 0; c < kNumLabels; ++c)
            node.scores[c] = static_cast<double>(counts[c]) / static_cast<double>(rows.size());
        node.label = argmax(node.scores);

        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(node);

        const bool pure = std::count(counts.begin(), counts.end(), 0U) == kNumLabels - 1;
        if (pure || depth >= params_.max_depth || rows.size() < params_.min_samples_split) return id;

        const Split best = find_split(rows, counts);
        if (best.feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (auto r : rows)
            (train_[r].features[static_cast<std::size_t>(best.feature)] <= best.threshold ? left : right)
                .push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        nodes_[static_cast<std::size_t>(id)].feature = best.feature;
        nodes_[static_cast<std::size_t>(id)].threshold = best.threshold;
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        nodes_[static_cast<std::size_t>(id)].left = l;
        nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    Split find_split(const std::vector<std::size_t>& rows,
                     const std::array<std::size_t, kNumLabels>& counts) const {
        const std::size_t n = rows.size();
        const double parent = gini(counts, n);
        Split best;
        std::vector<std::pair<double, Label>> column(n);
        std::vector<std::size_t> boundaries;
        std::vector<bool> candidate(n, false);

        for (std::size_t d = 0; d < dim_; ++d) {
            for (std::size_t i = 0; i < n; ++i)
                column[i] = {train_[rows[i]].features[d], train_[rows[i]].label};
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            boundaries.clear();
            for (std::size_t p = 1; p < n; ++p)
                if (column[p - 1].first < column[p].first) boundaries.push_back(p);
            if (boundaries.empty()) continue;

            std::fill(candidate.begin(), candidate.end(), false);
            const std::size_t b = boundaries.size();
            const std::size_t m = std::max<std::size_t>(1, params_.max_thresholds);
            if (b <= m) {
                for (auto p : boundaries) candidate[p] = true;
            } else {
                for (std::size_t j = 0; j < m; ++j) candidate[boundaries[(2 * j + 1) * b / (2 * m)]] = true;
            }

            std::array<std::size_t, kNumLabels> left{};
            for (std::size_t p = 1; p < n; ++p) {
                ++left[index_of(column[p - 1].second)];
                if (!candidate[p]) continue;
                std::array<std::size_t, kNumLabels> right{};
                for (std::size_t c = 0; c < kNumLabels; ++c) right[c] = counts[c] - left[c];
                const double impurity =
                    (static_cast<double>(p) * gini(left, p) +
                     static_cast<double>(n - p) * gini(right, n - p)) /
                    static_cast<double>(n);
                const double gain = parent - impurity;
                if (gain > best.gain + 1e-12) {
                    double mid = column[p - 1].first + (column[p].first - column[p - 1].first) / 2.0;
                    if (!(mid < column[p].first)) mid = column[p - 1].first;
                    best = {static_cast<int>(d), mid, gain};
                }
            }
        }
        return best;
    }

    std::span<const Example> train_;
    std::size_t dim_;
    const ClassifierParams& params_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTreeModel fit_decision_tree(std::span<const Example> train, const ClassifierParams& params) {
    const std::size_t dim = uniform_dimension(train);
    if (params.max_thresholds == 0) throw Error(Errc::invalid_argument, "max_thresholds must be positive");
    return DecisionTreeModel(dim, TreeBuilder(train, dim, params).build());
}

// ---------------------------------------------------------------------------

std::shared_ptr<const Classifier> fit_classifier(ClassifierKind kind, std::span<const Example> train,
                                                 const ClassifierParams& params, std::string fingerprint) {
    if (train.empty()) throw Error(Errc::invalid_argument, "training set is empty");
    switch (kind) {
        case ClassifierKind::knn:
            return std::make_shared<KnnModel>(
                knn_fit(std::vector<Example>(train.begin(), train.end()), params.k, std::move(fingerprint)));
        case ClassifierKind::gaussian_nb:
            return std::make_shared<GaussianNbModel>(fit_gaussian_nb(train));
        case ClassifierKind::decision_tree:
            return std::make_shared<DecisionTreeModel>(fit_decision_tree(train, params));
    }
    throw Error(Errc::invalid_argument, "unknown classifier kind");
}

}  // namespace pg
