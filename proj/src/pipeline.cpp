#include "policygrade/pipeline.hpp"

#include "policygrade/error.hpp"
#include "policygrade/textprep.hpp"

namespace pg {

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.code(), std::string(name) + ": " + e.what(), e.index());
    } catch (const std::exception& e) {
        throw Error(Errc::invalid_argument, std::string(name) + ": " + e.what());
    }
}

}  // namespace

EmbeddedTexts embed_texts(std::span<const std::string> raw_texts, const SummarizerConfig& summarizer,
                          const EmbedderConfig& embedder) {
    EmbeddedTexts out;
    std::vector<CleanParagraph> paragraphs;
    for (std::size_t i = 0; i < raw_texts.size(); ++i) {
        std::string text = clean_text(raw_texts[i]);
        const std::size_t wc = count_words(text);
        if (wc == 0) continue;
        paragraphs.push_back({paragraphs.size(), std::move(text), wc});
        out.source_index.push_back(i);
    }
    out.summaries = summarize_document(paragraphs, summarizer);
    std::vector<std::string> texts;
    texts.reserve(out.summaries.size());
    for (const auto& s : out.summaries) {
        out.degraded = out.degraded || s.degraded;
        texts.push_back(s.text);
    }
    out.vectors = embed_batch(texts, embedder);
    return out;
}

PreparedSet prepare_examples(const Dataset& ds, const SummarizerConfig& summarizer,
                             const EmbedderConfig& embedder) {
    std::vector<std::string> texts;
    texts.reserve(ds.points.size());
    for (const auto& p : ds.points) texts.push_back(p.quote_text);
    auto embedded = embed_texts(texts, summarizer, embedder);

    PreparedSet out;
    out.dropped_empty = ds.points.size() - embedded.vectors.size();
    out.examples.reserve(embedded.vectors.size());
    for (std::size_t i = 0; i < embedded.vectors.size(); ++i)
        out.examples.push_back(
            {std::move(embedded.vectors[i].values), ds.points[embedded.source_index[i]].label});
    return out;
}

PreparedSplit prepare_split(const std::filesystem::path& dataset_path, const SplitSpec& split,
                            const SummarizerConfig& summarizer, const EmbedderConfig& embedder) {
    PreparedSplit out;
    out.split = split;
    out.dataset_name = dataset_path.filename().string();
    const Dataset ds = stage("load", [&] { return load_dataset(dataset_path); });
    auto [train, test] = stage("split", [&] { return split_dataset(ds, split); });
    out.train_size = train.points.size();
    out.test_size = test.points.size();
    out.train = stage("prepare train", [&] { return prepare_examples(train, summarizer, embedder); });
    out.test = stage("prepare test", [&] { return prepare_examples(test, summarizer, embedder); });
    return out;
}

nlohmann::json metrics_to_json(const MetricsRow& row) {
    return {{"model", row.model_name}, {"precision", row.precision}, {"recall", row.recall},
            {"f1", row.f1},            {"accuracy", row.accuracy},   {"auc", row.auc}};
}

TrainResult train_pipeline(const std::filesystem::path& dataset_path, const SplitSpec& split,
                           const SummarizerConfig& summarizer, const EmbedderConfig& embedder,
                           ClassifierKind kind, const ClassifierParams& params,
                           const std::filesystem::path& out_path) {
    const PreparedSplit data = prepare_split(dataset_path, split, summarizer, embedder);

    TrainResult result;
    auto& a = result.artifact;
    a.kind = kind;
    a.params = params;
    a.embedder = embedder;
    a.embedder_fingerprint = embedder.fingerprint();
    a.model = stage("fit", [&] { return fit_classifier(kind, data.train.examples, params, a.embedder_fingerprint); });

    const NamedModel named{std::string(to_string(kind)), a.model};
    result.metrics = stage("evaluate", [&] {
        return evaluate(std::span<const NamedModel>(&named, 1), data.test.examples).front();
    });

    a.metadata = {
        {"dataset", data.dataset_name},
        {"split",
         {{"seed", split.seed},
          {"train_fraction", split.train_fraction},
          {"train_size", data.train_size},
          {"test_size", data.test_size}}},
        {"dropped_empty", {{"train", data.train.dropped_empty}, {"test", data.test.dropped_empty}}},
        {"summarizer", to_string(summarizer.backend)},
        {"metrics", metrics_to_json(result.metrics)},
    };
    if (!out_path.empty()) stage("write", [&] { write_artifact(a, out_path); });
    return result;
}

std::vector<MetricsRow> evaluate_pipeline(const std::filesystem::path& dataset_path, const SplitSpec& split,
                                          const SummarizerConfig& summarizer, const EmbedderConfig& embedder,
                                          const ClassifierParams& params) {
    const PreparedSplit data = prepare_split(dataset_path, split, summarizer, embedder);
    std::vector<NamedModel> models;
    for (auto kind : {ClassifierKind::knn, ClassifierKind::gaussian_nb, ClassifierKind::decision_tree}) {
        models.push_back({std::string(to_string(kind)),
                          stage("fit", [&] {
                              return fit_classifier(kind, data.train.examples, params, embedder.fingerprint());
                          })});
    }
    return stage("evaluate", [&] { return evaluate(models, data.test.examples); });
}

}  // namespace pg
