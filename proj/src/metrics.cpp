#include "policygrade/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "policygrade/error.hpp"

namespace pg {

ConfusionMatrix confusion_matrix(std::span<const Label> y_true, std::span<const Label> y_pred) {
    if (y_true.size() != y_pred.size())
        throw Error(Errc::invalid_argument, "y_true and y_pred differ in length");
    ConfusionMatrix cm{};
    for (std::size_t i = 0; i < y_true.size(); ++i) ++cm[index_of(y_true[i])][index_of(y_pred[i])];
    return cm;
}

std::optional<double> roc_auc(std::span<const double> scores, std::span<const std::uint8_t> positive) {
    if (scores.size() != positive.size())
        throw Error(Errc::invalid_argument, "scores and labels differ in length");
    const auto pos = static_cast<std::size_t>(
        std::count_if(positive.begin(), positive.end(), [](std::uint8_t p) { return p != 0; }));
    const std::size_t neg = positive.size() - pos;
    if (pos == 0 || neg == 0) return std::nullopt;

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    double area = 0.0;
    double prev_tpr = 0.0, prev_fpr = 0.0;
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores[order[i]];
        while (i < order.size() && scores[order[i]] == threshold) {
            (positive[order[i]] != 0 ? tp : fp)++;
            ++i;
        }
        const double tpr = static_cast<double>(tp) / static_cast<double>(pos);
        const double fpr = static_cast<double>(fp) / static_cast<double>(neg);
        area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    return area;
}

MetricsRow compute_metrics(std::span<const Label> y_true, std::span<const Label> y_pred,
                           std::span<const ScoreMap> y_scores, std::string model_name) {
    if (y_true.size() != y_pred.size() || y_true.size() != y_scores.size())
        throw Error(Errc::invalid_argument, "y_true, y_pred and y_scores must have equal lengths");
    if (y_true.empty()) throw Error(Errc::invalid_argument, "cannot compute metrics on zero samples");

    const auto cm = confusion_matrix(y_true, y_pred);
    const auto total = static_cast<double>(y_true.size());

    MetricsRow row;
    row.model_name = std::move(model_name);
    std::size_t correct = 0;
    double auc_weight = 0.0, auc_sum = 0.0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        correct += cm[c][c];
        const std::size_t support = std::accumulate(cm[c].begin(), cm[c].end(), std::size_t{0});
        if (support == 0) continue;
        std::size_t predicted = 0;
        for (std::size_t r = 0; r < kNumLabels; ++r) predicted += cm[r][c];

        const double tp = static_cast<double>(cm[c][c]);
        const double precision = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
        const double recall = tp / static_cast<double>(support);
        const double f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
        const double w = static_cast<double>(support);
        row.precision += w * precision;
        row.recall += w * recall;
        row.f1 += w * f1;

        std::vector<double> s(y_true.size());
        std::vector<std::uint8_t> positive(y_true.size());
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            s[i] = y_scores[i][c];
            positive[i] = y_true[i] == kAllLabels[c] ? 1 : 0;
        }
        if (auto a = roc_auc(s, positive)) {
            auc_sum += w * *a;
            auc_weight += w;
        }
    }
    row.precision /= total;
    row.recall /= total;
    row.f1 /= total;
    row.accuracy = static_cast<double>(correct) / total;
    row.auc = auc_weight == 0.0 ? 0.5 : auc_sum / auc_weight;
    return row;
}

std::vector<MetricsRow> evaluate(std::span<const NamedModel> models, std::span<const Example> test) {
    if (test.empty()) throw Error(Errc::invalid_argument, "test set is empty");
    std::vector<MetricsRow> rows;
    rows.reserve(models.size());
    std::vector<Label> y_true;
    y_true.reserve(test.size());
    for (const auto& e : test) y_true.push_back(e.label);

    for (const auto& named : models) {
        std::vector<Label> y_pred;
        std::vector<ScoreMap> y_scores;
        y_pred.reserve(test.size());
        y_scores.reserve(test.size());
        try {
            if (!named.model) throw Error(Errc::model_missing, "model is null");
            for (const auto& e : test) {
                auto p = named.model->predict(e.features);
                y_pred.push_back(p.label);
                y_scores.push_back(p.scores);
            }
        } catch (const Error& e) {
            throw Error(e.code(), "model \"" + named.name + "\": " + e.what(), e.index());
        }
        rows.push_back(compute_metrics(y_true, y_pred, y_scores, named.name));
    }
    return rows;
}

}  // namespace pg
