#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "policygrade/dataset.hpp"
#include "policygrade/dimred.hpp"
#include "policygrade/error.hpp"
#include "policygrade/pipeline.hpp"
#include "policygrade/service.hpp"

namespace py = pybind11;

namespace {

py::dict scores_dict(const pg::ScoreMap& s) {
    py::dict d;
    for (pg::Label l : pg::kAllLabels) d[py::str(std::string(pg::to_string(l)))] = s[pg::index_of(l)];
    return d;
}

py::dict metrics_dict(const pg::MetricsRow& r) {
    py::dict d;
    d["model"] = r.model_name;
    d["precision"] = r.precision;
    d["recall"] = r.recall;
    d["f1"] = r.f1;
    d["accuracy"] = r.accuracy;
    d["auc"] = r.auc;
    return d;
}

pg::EmbedderConfig embedder_config(std::size_t dimension, std::uint64_t seed) {
    pg::EmbedderConfig cfg;
    cfg.dimension = dimension;
    cfg.hash_seed = seed;
    cfg.validate();
    return cfg;
}

class Model {
public:
    explicit Model(const std::filesystem::path& path)
        : artifact_(std::make_shared<const pg::ModelArtifact>(pg::read_artifact(path))) {}

    std::string kind() const { return std::string(pg::to_string(artifact_->kind)); }
    std::string fingerprint() const { return artifact_->embedder_fingerprint; }
    std::string metadata() const { return artifact_->metadata.dump(); }

    py::list predict(const std::vector<std::string>& texts) const {
        const auto emb = pg::embed_texts(texts, {}, artifact_->embedder);
        py::list out;
        std::size_t next = 0;
        for (std::size_t i = 0; i < texts.size(); ++i) {
            if (next < emb.source_index.size() && emb.source_index[next] == i) {
                const auto p = artifact_->model->predict(emb.vectors[next].values);
                py::dict d;
                d["label"] = std::string(pg::to_string(p.label));
                d["scores"] = scores_dict(p.scores);
                d["summary"] = emb.summaries[next].text;
                out.append(d);
                ++next;
            } else {
                out.append(py::none());
            }
        }
        return out;
    }

    // AnalyzeRequest JSON in, SiteReport JSON out.
    std::string analyze(const std::string& request_json) const {
        const auto j = nlohmann::json::parse(request_json, nullptr, false);
        if (j.is_discarded()) throw pg::Error(pg::Errc::parse_error, "malformed request: body is not valid JSON");
        return pg::to_json(pg::analyze(pg::parse_analyze_request(j), *artifact_, {})).dump();
    }

private:
    std::shared_ptr<const pg::ModelArtifact> artifact_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Policy text cleaning, summarization, embedding, classification and grading";
    m.attr("__version__") = std::string(pg::kVersion);

    static py::exception<pg::Error> error(m, "PolicyGradeError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const pg::Error& e) {
            py::set_error(error, (std::string(pg::to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    m.def("clean_text", &pg::clean_text, py::arg("text"), "Strip markup, fold accents, lowercase and filter.");
    m.def("count_words", &pg::count_words, py::arg("text"));
    m.def(
        "plan_budget", [](std::size_t wc) { return pg::plan_budget(wc).max_words; }, py::arg("word_count"),
        "Summary word cap for a paragraph of this length, or None.");
    m.def(
        "summarize",
        [](const std::string& text) {
            const std::string cleaned = pg::clean_text(text);
            const pg::CleanParagraph p{0, cleaned, pg::count_words(cleaned)};
            return pg::extractive_summarize(p, pg::plan_budget(p.word_count)).text;
        },
        py::arg("text"), "Clean then summarize with the builtin extractive summarizer.");
    m.def(
        "embed",
        [](const std::string& text, std::size_t dimension, std::uint64_t seed) {
            return pg::embed(text, embedder_config(dimension, seed)).values;
        },
        py::arg("text"), py::arg("dimension") = pg::kDefaultEmbeddingDimension, py::arg("seed") = 0);
    m.def(
        "site_score",
        [](std::int64_t good, std::int64_t neutral, std::int64_t bad, std::int64_t blocker) {
            return pg::site_score({good, neutral, bad, blocker});
        },
        py::arg("good"), py::arg("neutral"), py::arg("bad"), py::arg("blocker"));
    m.def(
        "letter_grade",
        [](std::int64_t score, std::int64_t total) { return std::string(pg::to_string(pg::letter_grade(score, total))); },
        py::arg("score"), py::arg("classified_total"));
    m.def(
        "split_indices",
        [](std::size_t n, double train_fraction, std::uint64_t seed) {
            const auto s = pg::split_indices(n, {train_fraction, seed});
            return std::make_pair(s.train, s.test);
        },
        py::arg("n"), py::arg("train_fraction") = 0.8, py::arg("seed") = 42);
    m.def(
        "pca2",
        [](const std::vector<std::vector<double>>& rows) {
            const auto r = pg::pca2(rows);
            return py::make_tuple(r.points, r.explained_variance);
        },
        py::arg("rows"), "Project rows onto their top two principal axes: (points, explained_variance).");
    m.def(
        "train",
        [](const std::filesystem::path& data, const std::filesystem::path& out, const std::string& kind, std::size_t k,
           std::uint64_t seed, double train_fraction) {
            pg::ClassifierParams params;
            params.k = k;
            py::gil_scoped_release release;
            const auto r = pg::train_pipeline(data, {train_fraction, seed}, {}, {}, pg::parse_classifier_kind(kind),
                                              params, out);
            py::gil_scoped_acquire acquire;
            return metrics_dict(r.metrics);
        },
        py::arg("data"), py::arg("out"), py::arg("kind") = "knn", py::arg("k") = 3, py::arg("seed") = 42,
        py::arg("train_fraction") = 0.8, "Train on a labeled NDJSON file, write the model, return held-out metrics.");
    m.def(
        "evaluate",
        [](const std::filesystem::path& data, std::uint64_t seed, double train_fraction) {
            const auto rows = pg::evaluate_pipeline(data, {train_fraction, seed}, {}, {}, {});
            py::list out;
            for (const auto& r : rows) out.append(metrics_dict(r));
            return out;
        },
        py::arg("data"), py::arg("seed") = 42, py::arg("train_fraction") = 0.8);

    py::class_<Model>(m, "Model")
        .def(py::init<const std::filesystem::path&>(), py::arg("path"))
        .def_property_readonly("kind", &Model::kind)
        .def_property_readonly("fingerprint", &Model::fingerprint)
        .def_property_readonly("_metadata_json", &Model::metadata)
        .def("predict", &Model::predict, py::arg("texts"),
             "Label each text; texts that clean to nothing give None.")
        .def("_analyze_json", &Model::analyze, py::arg("request_json"));
}
