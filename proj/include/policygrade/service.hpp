#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "policygrade/config.hpp"
#include "policygrade/error.hpp"
#include "policygrade/labels.hpp"
#include "policygrade/model_io.hpp"
#include "policygrade/score_grade.hpp"
#include "policygrade/textprep.hpp"

namespace pg {

inline constexpr std::string_view kVersion = "0.1.0";

struct DocumentInput {
    std::string source;
    DocumentKind kind = DocumentKind::unknown;
    std::vector<std::string> paragraphs;
};

/// Body of POST /v1/analyze.
struct AnalyzeRequest {
    std::string url;
    std::vector<DocumentInput> documents;
};

struct ReportItem {
    std::size_t document_index = 0;
    std::size_t paragraph_index = 0;  // position in the request's paragraph list
    std::string summary;
    Label label = Label::neutral;
    ScoreMap scores{};
};

/// Response of POST /v1/analyze.
struct SiteReport {
    CountSummary counts;
    std::int64_t score = 0;
    Grade grade = Grade::C;
    bool degraded = false;
    std::vector<ReportItem> items;
};

struct ServiceLimits {
    std::size_t max_body_bytes = 5 * 1024 * 1024;
    std::size_t max_paragraphs = 2000;
};

/// Throws Error(parse_error) for structurally invalid requests and
/// Error(payload_too_large) past the paragraph cap.
AnalyzeRequest parse_analyze_request(const nlohmann::json& j, const ServiceLimits& limits = {});
nlohmann::json to_json(const AnalyzeRequest& req);

nlohmann::json to_json(const SiteReport& report);
SiteReport site_report_from_json(const nlohmann::json& j);

/// clean -> budget -> summarize -> embed -> predict for every paragraph, then
/// tally, score and grade. Paragraphs that clean to nothing are skipped.
/// Throws Error(no_analyzable_text) when nothing is left.
SiteReport analyze(const AnalyzeRequest& req, const ModelArtifact& model, const AppConfig& cfg);

/// {status, model_fingerprint, backends: {summarizer, embedder}, version}.
/// Never contacts external backends.
nlohmann::json healthcheck(const ModelArtifact* model, const AppConfig& cfg);

/// Text of every <p> element in document order (inner markup kept).
std::vector<std::string> scrape_paragraphs(std::string_view html);

/// Maps an error code to the HTTP status the service answers with.
int http_status_for(Errc code) noexcept;

struct HttpReply {
    int status = 200;
    std::string body;  // JSON
};

/// Transport-independent request handling. The model and configuration are
/// immutable, so one instance serves any number of concurrent requests.
class Service {
public:
    Service(std::shared_ptr<const ModelArtifact> model, AppConfig cfg, ServiceLimits limits = {});

    HttpReply analyze(std::string_view body) const;
    HttpReply health() const;

    bool origin_allowed(std::string_view origin) const;
    const ServiceLimits& limits() const noexcept { return limits_; }

private:
    std::shared_ptr<const ModelArtifact> model_;
    AppConfig cfg_;
    ServiceLimits limits_;
};

/// HTTP front end: POST /v1/analyze, GET /v1/health, CORS preflight.
class HttpServer {
public:
    explicit HttpServer(std::shared_ptr<const Service> service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to an ephemeral port and returns it (or -1).
    int bind_to_any_port(const std::string& host);
    bool bind(const std::string& host, int port);
    /// Blocks serving requests until stop() is called.
    bool listen_after_bind();
    void stop();
    bool is_running() const;
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pg
