#include "policygrade/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

#include "policygrade/error.hpp"
#include "policygrade/pipeline.hpp"

namespace pg {

namespace {

nlohmann::json scores_to_json(const ScoreMap& s) {
    nlohmann::json j = nlohmann::json::object();
    for (Label l : kAllLabels) j[std::string(to_string(l))] = s[index_of(l)];
    return j;
}

nlohmann::json error_body(Errc code, std::string_view message) {
    return {{"error", to_string(code)}, {"message", message}};
}

HttpReply error_reply(const Error& e) {
    return {http_status_for(e.code()), error_body(e.code(), e.what()).dump()};
}

bool is_tag_boundary(char c) {
    return c == '>' || c == '/' || std::isspace(static_cast<unsigned char>(c));
}

// Next "<p" opening tag at or after `from`, case-insensitively.
std::size_t find_p_open(std::string_view html, std::size_t from) {
    for (std::size_t i = from; i + 2 < html.size(); ++i) {
        if (html[i] == '<' && (html[i + 1] == 'p' || html[i + 1] == 'P') && is_tag_boundary(html[i + 2]))
            return i;
    }
    return std::string_view::npos;
}

std::size_t find_p_close(std::string_view html, std::size_t from) {
    for (std::size_t i = from; i + 3 < html.size(); ++i) {
        if (html[i] == '<' && html[i + 1] == '/' && (html[i + 2] == 'p' || html[i + 2] == 'P') &&
            is_tag_boundary(html[i + 3]))
            return i;
    }
    return std::string_view::npos;
}

}  // namespace

int http_status_for(Errc code) noexcept {
    switch (code) {
        case Errc::parse_error:
        case Errc::invalid_argument:
        case Errc::empty_text:
            return 400;
        case Errc::payload_too_large: return 413;
        case Errc::no_analyzable_text: return 422;
        case Errc::model_missing:
        case Errc::backend_unavailable:
        case Errc::fingerprint_mismatch:
        case Errc::dimension_mismatch:
            return 503;
        case Errc::io_error: return 500;
    }
    return 500;
}

AnalyzeRequest parse_analyze_request(const nlohmann::json& j, const ServiceLimits& limits) {
    auto bad = [](const std::string& what) { return Error(Errc::parse_error, "malformed request: " + what); };
    if (!j.is_object()) throw bad("body must be a JSON object");

    AnalyzeRequest req;
    if (auto it = j.find("url"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw bad("\"url\" must be a string");
        req.url = it->get<std::string>();
    }
    const auto docs = j.find("documents");
    if (docs == j.end() || !docs->is_array()) throw bad("\"documents\" must be an array");

    std::size_t total = 0;
    for (std::size_t d = 0; d < docs->size(); ++d) {
        const auto& doc = (*docs)[d];
        const std::string where = "documents[" + std::to_string(d) + "]";
        if (!doc.is_object()) throw bad(where + " must be an object");
        DocumentInput in;
        if (auto it = doc.find("source"); it != doc.end() && !it->is_null()) {
            if (!it->is_string()) throw bad(where + ".source must be a string");
            in.source = it->get<std::string>();
        }
        if (auto it = doc.find("kind"); it != doc.end() && !it->is_null()) {
            if (!it->is_string()) throw bad(where + ".kind must be a string");
            try {
                in.kind = parse_document_kind(it->get<std::string>());
            } catch (const Error& e) {
                throw bad(where + ".kind: " + e.what());
            }
        }
        const auto paras = doc.find("paragraphs");
        if (paras == doc.end() || !paras->is_array()) throw bad(where + ".paragraphs must be an array");
        total += paras->size();
        if (total > limits.max_paragraphs)
            throw Error(Errc::payload_too_large,
                        "request exceeds " + std::to_string(limits.max_paragraphs) + " paragraphs");
        for (const auto& p : *paras) {
            if (!p.is_string()) throw bad(where + ".paragraphs must contain strings");
            in.paragraphs.push_back(p.get<std::string>());
        }
        req.documents.push_back(std::move(in));
    }
    if (total == 0) throw Error(Errc::no_analyzable_text, "no analyzable text: request has no paragraphs");
    return req;
}

nlohmann::json to_json(const AnalyzeRequest& req) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : req.documents)
        docs.push_back({{"source", d.source}, {"kind", to_string(d.kind)}, {"paragraphs", d.paragraphs}});
    return {{"url", req.url}, {"documents", docs}};
}

nlohmann::json to_json(const SiteReport& r) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : r.items)
        items.push_back({{"document_index", it.document_index},
                         {"paragraph_index", it.paragraph_index},
                         {"summary", it.summary},
                         {"label", to_string(it.label)},
                         {"scores", scores_to_json(it.scores)}});
    return {{"counts",
             {{"good", r.counts.good}, {"neutral", r.counts.neutral}, {"bad", r.counts.bad},
              {"blocker", r.counts.blocker}}},
            {"score", r.score},
            {"grade", to_string(r.grade)},
            {"degraded", r.degraded},
            {"items", items}};
}

SiteReport site_report_from_json(const nlohmann::json& j) {
    try {
        SiteReport r;
        const auto& c = j.at("counts");
        r.counts = {c.at("good").get<std::int64_t>(), c.at("neutral").get<std::int64_t>(),
                    c.at("bad").get<std::int64_t>(), c.at("blocker").get<std::int64_t>()};
        r.score = j.at("score").get<std::int64_t>();
        r.grade = parse_grade(j.at("grade").get<std::string>());
        r.degraded = j.at("degraded").get<bool>();
        for (const auto& it : j.at("items")) {
            ReportItem item;
            item.document_index = it.at("document_index").get<std::size_t>();
            item.paragraph_index = it.at("paragraph_index").get<std::size_t>();
            item.summary = it.at("summary").get<std::string>();
            item.label = parse_label(it.at("label").get<std::string>());
            for (Label l : kAllLabels) item.scores[index_of(l)] = it.at("scores").at(std::string(to_string(l))).get<double>();
            r.items.push_back(std::move(item));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("malformed site report: ") + e.what());
    }
}

SiteReport analyze(const AnalyzeRequest& req, const ModelArtifact& model, const AppConfig& cfg) {
    if (!model.model) throw Error(Errc::model_missing, "no model loaded");
    EmbedderConfig embedder = model.embedder;
    if (cfg.embedder) {
        if (cfg.embedder->fingerprint() != model.embedder_fingerprint)
            throw Error(Errc::fingerprint_mismatch, "configured embedder \"" + cfg.embedder->fingerprint() +
                                                        "\" differs from the model's \"" +
                                                        model.embedder_fingerprint + "\"");
        embedder.external_timeout = cfg.embedder->external_timeout;
    }

    std::vector<std::string> texts;
    std::vector<std::pair<std::size_t, std::size_t>> origin;
    for (std::size_t d = 0; d < req.documents.size(); ++d)
        for (std::size_t p = 0; p < req.documents[d].paragraphs.size(); ++p) {
            texts.push_back(req.documents[d].paragraphs[p]);
            origin.emplace_back(d, p);
        }

    const EmbeddedTexts embedded = embed_texts(texts, cfg.summarizer, embedder);
    if (embedded.vectors.empty()) throw Error(Errc::no_analyzable_text, "no analyzable text after cleaning");

    SiteReport report;
    report.degraded = embedded.degraded;
    report.items.reserve(embedded.vectors.size());
    for (std::size_t i = 0; i < embedded.vectors.size(); ++i) {
        const Prediction pred = model.model->predict(embedded.vectors[i].values);
        const auto [d, p] = origin[embedded.source_index[i]];
        report.items.push_back({d, p, embedded.summaries[i].text, pred.label, pred.scores});
        report.counts.add(pred.label);
    }
    report.score = site_score(report.counts, cfg.weights);
    report.grade = letter_grade(report.score, report.counts.total(), cfg.thresholds);
    return report;
}

nlohmann::json healthcheck(const ModelArtifact* model, const AppConfig& cfg) {
    nlohmann::json j;
    j["status"] = model && model->model ? "ok" : "degraded-no-model";
    j["model_fingerprint"] = model ? nlohmann::json(model->embedder_fingerprint) : nlohmann::json(nullptr);
    std::string embedder = "none";
    if (model) embedder = to_string(model->embedder.backend);
    else if (cfg.embedder) embedder = to_string(cfg.embedder->backend);
    j["backends"] = {{"summarizer", to_string(cfg.summarizer.backend)}, {"embedder", embedder}};
    j["version"] = kVersion;
    return j;
}

std::vector<std::string> scrape_paragraphs(std::string_view html) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = find_p_open(html, pos)) != std::string_view::npos) {
        const auto gt = html.find('>', pos);
        if (gt == std::string_view::npos) break;
        const std::size_t start = gt + 1;
        const std::size_t close = find_p_close(html, start);
        const std::size_t next_open = find_p_open(html, start);
        const std::size_t end = std::min({close, next_open, html.size()});
        out.emplace_back(html.substr(start, end - start));
        pos = end;
    }
    return out;
}

// ---------------------------------------------------------------------------

Service::Service(std::shared_ptr<const ModelArtifact> model, AppConfig cfg, ServiceLimits limits)
    : model_(std::move(model)), cfg_(std::move(cfg)), limits_(limits) {
    cfg_.validate();
    if (model_ && cfg_.embedder && cfg_.embedder->fingerprint() != model_->embedder_fingerprint)
        throw Error(Errc::fingerprint_mismatch, "configured embedder \"" + cfg_.embedder->fingerprint() +
                                                    "\" differs from the model's \"" +
                                                    model_->embedder_fingerprint + "\"");
}

HttpReply Service::analyze(std::string_view body) const {
    try {
        if (body.size() > limits_.max_body_bytes)
            throw Error(Errc::payload_too_large, "request body exceeds " + std::to_string(limits_.max_body_bytes) + " bytes");
        const auto j = nlohmann::json::parse(body, nullptr, false);
        if (j.is_discarded()) throw Error(Errc::parse_error, "malformed request: body is not valid JSON");
        const AnalyzeRequest req = parse_analyze_request(j, limits_);
        if (!model_) throw Error(Errc::model_missing, "no model loaded");
        return {200, to_json(pg::analyze(req, *model_, cfg_)).dump()};
    } catch (const Error& e) {
        return error_reply(e);
    } catch (const std::exception& e) {
        return {500, error_body(Errc::io_error, e.what()).dump()};
    }
}

HttpReply Service::health() const {
    return {200, healthcheck(model_.get(), cfg_).dump()};
}

bool Service::origin_allowed(std::string_view origin) const {
    return std::any_of(cfg_.cors_allowed_origins.begin(), cfg_.cors_allowed_origins.end(),
                       [&](const std::string& pattern) {
                           if (!pattern.empty() && pattern.back() == '*')
                               return origin.substr(0, pattern.size() - 1) ==
                                      std::string_view(pattern).substr(0, pattern.size() - 1);
                           return origin == pattern;
                       });
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
    std::shared_ptr<const Service> service;
    httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const Service> service) : impl_(std::make_unique<Impl>()) {
    impl_->service = std::move(service);
    auto& srv = impl_->server;
    const Service* svc = impl_->service.get();
    srv.set_payload_max_length(svc->limits().max_body_bytes);

    srv.set_post_routing_handler([svc](const httplib::Request& req, httplib::Response& res) {
        const auto origin = req.get_header_value("Origin");
        if (!origin.empty() && svc->origin_allowed(origin)) {
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Vary", "Origin");
        }
    });
    srv.Options(R"(/v1/.*)", [svc](const httplib::Request& req, httplib::Response& res) {
        const auto origin = req.get_header_value("Origin");
        if (origin.empty() || !svc->origin_allowed(origin)) {
            res.status = 403;
            return;
        }
        res.status = 204;
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.set_header("Access-Control-Max-Age", "600");
    });
    srv.Post("/v1/analyze", [svc](const httplib::Request& req, httplib::Response& res) {
        const HttpReply reply = svc->analyze(req.body);
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    });
    srv.Get("/v1/health", [svc](const httplib::Request&, httplib::Response& res) {
        const HttpReply reply = svc->health();
        res.status = reply.status;
        res.set_content(reply.body, "application/json");
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }
bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}
bool HttpServer::is_running() const { return impl_->server.is_running(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace pg
