// pgrade: train, evaluate and serve the policy grading pipeline.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "policygrade/config.hpp"
#include "policygrade/dataset.hpp"
#include "policygrade/dimred.hpp"
#include "policygrade/error.hpp"
#include "policygrade/http_client.hpp"
#include "policygrade/pipeline.hpp"
#include "policygrade/service.hpp"

namespace {

struct CommonOptions {
    std::string config_path;

    pg::AppConfig load() const {
        pg::AppConfig cfg = config_path.empty() ? pg::AppConfig{} : pg::load_config(config_path);
        pg::apply_environment(cfg);
        return cfg;
    }
};

void print_metrics_header() {
    std::printf("%-16s %9s %9s %9s %9s %9s\n", "model", "precision", "recall", "f1", "accuracy", "auc");
}

void print_metrics(const pg::MetricsRow& r) {
    std::printf("%-16s %9.4f %9.4f %9.4f %9.4f %9.4f\n", r.model_name.c_str(), r.precision, r.recall, r.f1,
                r.accuracy, r.auc);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pg::Error(pg::Errc::io_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Paragraph file for `grade --in`: one JSON value per line, either a string
// or an object carrying "text" or "quoteText".
std::vector<std::string> read_paragraph_file(const std::string& path) {
    std::vector<std::string> out;
    std::istringstream lines(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        const std::string where = path + ":" + std::to_string(line_no);
        if (j.is_string()) {
            out.push_back(j.get<std::string>());
        } else if (j.is_object() && j.contains("text") && j["text"].is_string()) {
            out.push_back(j["text"].get<std::string>());
        } else if (j.is_object() && j.contains("quoteText") && j["quoteText"].is_string()) {
            out.push_back(j["quoteText"].get<std::string>());
        } else {
            throw pg::Error(pg::Errc::parse_error, where + ": expected a string or an object with \"text\"", line_no);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Policy grading pipeline: clean, summarize, embed, classify and grade policy text"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(pg::kVersion));

    CommonOptions common;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON config file")->check(CLI::ExistingFile);
    };

    // train
    std::string data_path, out_path, kind_name = "knn";
    pg::SplitSpec split;
    pg::ClassifierParams params;
    auto* train = app.add_subcommand("train", "Fit a classifier on a labeled NDJSON dataset and write a model");
    train->add_option("--data", data_path, "Labeled NDJSON dataset")->required()->check(CLI::ExistingFile);
    train->add_option("--out", out_path, "Model artifact to write")->required();
    train->add_option("--kind", kind_name, "knn | gaussian_nb | decision_tree")
        ->check(CLI::IsMember({"knn", "gaussian_nb", "decision_tree"}));
    train->add_option("--k", params.k, "Neighbours for knn");
    train->add_option("--max-depth", params.max_depth, "Depth limit for decision_tree");
    train->add_option("--seed", split.seed, "Split seed");
    train->add_option("--train-fraction", split.train_fraction, "Fraction of points used for training");
    add_config(train);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Compare every registered classifier on one split");
    evaluate->add_option("--data", data_path, "Labeled NDJSON dataset")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--k", params.k, "Neighbours for knn");
    evaluate->add_option("--max-depth", params.max_depth, "Depth limit for decision_tree");
    evaluate->add_option("--seed", split.seed, "Split seed");
    evaluate->add_option("--train-fraction", split.train_fraction, "Fraction of points used for training");
    add_config(evaluate);

    // grade
    std::string model_path, in_path, url;
    auto* grade = app.add_subcommand("grade", "Grade one site's policy text and print the report as JSON");
    grade->add_option("--model", model_path, "Model artifact (defaults to PG_MODEL_PATH)");
    auto* grade_in = grade->add_option("--in", in_path, "File with one paragraph per line (JSON string or {\"text\"})")
                         ->check(CLI::ExistingFile);
    auto* grade_url = grade->add_option("--url", url, "Policy page to fetch; its <p> elements are analyzed");
    grade_in->excludes(grade_url);
    add_config(grade);

    // serve
    int port = -1;
    std::string host;
    auto* serve = app.add_subcommand("serve", "Run the HTTP analysis service");
    serve->add_option("--port", port, "Listen port (defaults to PG_PORT or 8080)");
    serve->add_option("--host", host, "Listen address");
    serve->add_option("--model", model_path, "Model artifact (defaults to PG_MODEL_PATH)");
    add_config(serve);

    // plot
    std::string test_path, method = "pca";
    pg::TsneParams tsne;
    auto* plot = app.add_subcommand("plot", "Project embeddings of a labeled set to 2-D and write x,y,label CSV");
    plot->add_option("--model", model_path, "Model artifact whose embedding space is used")->required();
    plot->add_option("--test", test_path, "Labeled NDJSON dataset to project")->required()->check(CLI::ExistingFile);
    plot->add_option("--method", method, "pca | tsne")->check(CLI::IsMember({"pca", "tsne"}));
    plot->add_option("--out", out_path, "CSV to write")->required();
    plot->add_option("--perplexity", tsne.perplexity, "t-SNE perplexity");
    plot->add_option("--seed", tsne.seed, "t-SNE seed");
    plot->add_option("--iterations", tsne.iterations, "t-SNE iterations");
    add_config(plot);

    // dataset
    auto* dataset = app.add_subcommand("dataset", "Dataset utilities");
    dataset->require_subcommand(1);
    std::size_t bin_width = 10;
    auto* stats = dataset->add_subcommand("stats", "Word-count histogram of quote texts as CSV bin_start,count");
    stats->add_option("--in", in_path, "Labeled NDJSON dataset")->required()->check(CLI::ExistingFile);
    stats->add_option("--bin-width", bin_width, "Histogram bin width in words")->check(CLI::PositiveNumber);
    auto* fetch = dataset->add_subcommand("fetch", "Download labeled points and store them as NDJSON");
    fetch->add_option("--url", url, "Endpoint returning point/quoteDoc/quoteText records")->required();
    fetch->add_option("--out", out_path, "NDJSON file to write")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            const auto cfg = common.load();
            const auto embedder = cfg.embedder.value_or(pg::EmbedderConfig{});
            const auto result = pg::train_pipeline(data_path, split, cfg.summarizer, embedder,
                                                   pg::parse_classifier_kind(kind_name), params, out_path);
            const auto& meta = result.artifact.metadata["split"];
            std::printf("split: %zu train / %zu test (seed %llu)\n", meta["train_size"].get<std::size_t>(),
                        meta["test_size"].get<std::size_t>(),
                        static_cast<unsigned long long>(split.seed));
            print_metrics_header();
            print_metrics(result.metrics);
            std::printf("wrote %s\n", out_path.c_str());
        } else if (evaluate->parsed()) {
            const auto cfg = common.load();
            const auto rows = pg::evaluate_pipeline(data_path, split, cfg.summarizer,
                                                    cfg.embedder.value_or(pg::EmbedderConfig{}), params);
            print_metrics_header();
            for (const auto& r : rows) print_metrics(r);
        } else if (grade->parsed()) {
            auto cfg = common.load();
            if (!model_path.empty()) cfg.model_path = model_path;
            if (cfg.model_path.empty()) throw pg::Error(pg::Errc::model_missing, "no model: pass --model or set PG_MODEL_PATH");
            if (in_path.empty() && url.empty()) throw pg::Error(pg::Errc::invalid_argument, "pass --in or --url");
            const auto model = pg::read_artifact(cfg.model_path);
            pg::AnalyzeRequest req;
            pg::DocumentInput doc;
            if (!in_path.empty()) {
                doc.source = in_path;
                doc.paragraphs = read_paragraph_file(in_path);
            } else {
                req.url = url;
                doc.source = url;
                doc.paragraphs = pg::scrape_paragraphs(pg::http::get(url, std::chrono::milliseconds(30000)));
            }
            req.documents.push_back(std::move(doc));
            std::cout << pg::to_json(pg::analyze(req, model, cfg)).dump(2) << '\n';
        } else if (serve->parsed()) {
            auto cfg = common.load();
            if (!model_path.empty()) cfg.model_path = model_path;
            if (port >= 0) cfg.port = port;
            if (!host.empty()) cfg.host = host;
            std::shared_ptr<const pg::ModelArtifact> model;
            if (!cfg.model_path.empty())
                model = std::make_shared<const pg::ModelArtifact>(pg::read_artifact(cfg.model_path));
            else
                std::fprintf(stderr, "warning: no model configured; /v1/analyze will answer 503\n");
            auto service = std::make_shared<const pg::Service>(model, cfg);
            pg::HttpServer server(service);
            if (!server.bind(cfg.host, cfg.port)) {
                std::fprintf(stderr, "error: cannot bind %s:%d\n", cfg.host.c_str(), cfg.port);
                return 1;
            }
            std::fprintf(stderr, "listening on http://%s:%d (model: %s)\n", cfg.host.c_str(), cfg.port,
                         model ? model->embedder_fingerprint.c_str() : "none");
            return server.listen_after_bind() ? 0 : 1;
        } else if (plot->parsed()) {
            const auto cfg = common.load();
            const auto model = pg::read_artifact(model_path);
            const auto ds = pg::load_dataset(test_path);
            const auto prepared = pg::prepare_examples(ds, cfg.summarizer, model.embedder);
            std::vector<std::vector<double>> rows;
            for (const auto& e : prepared.examples) rows.push_back(e.features);
            std::vector<std::array<double, 2>> xy;
            if (method == "pca") {
                xy = pg::pca2(rows).points;
            } else {
                xy = pg::tsne2(rows, tsne);
            }
            std::vector<pg::Point2D> points;
            for (std::size_t i = 0; i < xy.size(); ++i)
                points.push_back({xy[i][0], xy[i][1], prepared.examples[i].label});
            pg::export_scatter(points, out_path);
            std::printf("wrote %zu points to %s\n", points.size(), out_path.c_str());
        } else if (stats->parsed()) {
            const auto ds = pg::load_dataset(in_path);
            std::printf("bin_start,count\n");
            for (const auto& b : pg::word_histogram(ds, bin_width)) std::printf("%zu,%zu\n", b.bin_start, b.count);
        } else if (fetch->parsed()) {
            const std::string body = pg::http::get(url, std::chrono::milliseconds(60000));
            std::size_t skipped = 0;
            const auto ds = pg::dataset_from_download(body, url, &skipped);
            if (ds.points.empty()) throw pg::Error(pg::Errc::parse_error, "no usable records at " + url);
            pg::write_dataset(ds, out_path);
            std::printf("wrote %zu points to %s (%zu records skipped)\n", ds.points.size(), out_path.c_str(), skipped);
        }
    } catch (const pg::Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", pg::to_string(e.code()), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
