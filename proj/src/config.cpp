#include "policygrade/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "policygrade/error.hpp"

namespace pg {

namespace {

long long parse_int(std::string_view s, std::string_view what) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(Errc::invalid_argument, std::string(what) + " is not an integer: " + std::string(s));
    return v;
}

const char* env(const char* name) {
    const char* v = std::getenv(name);
    return (v && *v) ? v : nullptr;
}

}  // namespace

void AppConfig::validate() const {
    summarizer.validate();
    if (embedder) embedder->validate();
    thresholds.validate();
    if (port < 0 || port > 65535) throw Error(Errc::invalid_argument, "port out of range");
}

AppConfig config_from_json(const nlohmann::json& j) {
    AppConfig cfg;
    try {
        if (!j.is_object()) throw Error(Errc::parse_error, "config must be a JSON object");
        cfg.model_path = j.value("model_path", cfg.model_path);
        cfg.host = j.value("host", cfg.host);
        cfg.port = j.value("port", cfg.port);

        if (auto it = j.find("summarizer"); it != j.end()) {
            const auto& s = *it;
            cfg.summarizer.external_endpoint = s.value("endpoint", std::string{});
            cfg.summarizer.backend = s.contains("backend")
                                         ? parse_summarizer_backend(s["backend"].get<std::string>())
                                         : (cfg.summarizer.external_endpoint.empty()
                                                ? SummarizerBackend::builtin_extractive
                                                : SummarizerBackend::external);
            cfg.summarizer.external_timeout = std::chrono::milliseconds(s.value("timeout_ms", 10000));
        }
        if (auto it = j.find("embedder"); it != j.end()) {
            const auto& e = *it;
            EmbedderConfig ec;
            ec.external_endpoint = e.value("endpoint", std::string{});
            ec.backend = e.contains("backend") ? parse_embedder_backend(e["backend"].get<std::string>())
                                               : (ec.external_endpoint.empty() ? EmbedderBackend::builtin_hashed
                                                                               : EmbedderBackend::external);
            ec.dimension = e.value("dimension", ec.dimension);
            if (e.contains("ngram_orders")) ec.ngram_orders = e["ngram_orders"].get<std::set<unsigned>>();
            ec.hash_seed = e.value("hash_seed", ec.hash_seed);
            ec.external_timeout = std::chrono::milliseconds(e.value("timeout_ms", 10000));
            cfg.embedder = ec;
        }
        if (j.contains("grading") && j["grading"].contains("thresholds")) {
            const auto& t = j["grading"]["thresholds"];
            cfg.thresholds.a = t.value("A", cfg.thresholds.a);
            cfg.thresholds.b = t.value("B", cfg.thresholds.b);
            cfg.thresholds.c = t.value("C", cfg.thresholds.c);
            cfg.thresholds.d = t.value("D", cfg.thresholds.d);
        }
        if (j.contains("scoring") && j["scoring"].contains("weights")) {
            const auto& w = j["scoring"]["weights"];
            cfg.weights.good = w.value("good", cfg.weights.good);
            cfg.weights.neutral = w.value("neutral", cfg.weights.neutral);
            cfg.weights.bad = w.value("bad", cfg.weights.bad);
            cfg.weights.blocker = w.value("blocker", cfg.weights.blocker);
        }
        if (j.contains("cors") && j["cors"].contains("allowed_origins"))
            cfg.cors_allowed_origins = j["cors"]["allowed_origins"].get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("invalid config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open config " + path.string());
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::parse_error, path.string() + ": config is not valid JSON");
    return config_from_json(j);
}

void apply_environment(AppConfig& cfg) {
    if (const char* v = env("PG_MODEL_PATH")) cfg.model_path = v;
    if (const char* v = env("PG_PORT")) cfg.port = static_cast<int>(parse_int(v, "PG_PORT"));
    if (const char* v = env("PG_SUMMARIZER_ENDPOINT")) {
        cfg.summarizer.backend = SummarizerBackend::external;
        cfg.summarizer.external_endpoint = v;
    }
    if (const char* v = env("PG_SUMMARIZER_TIMEOUT_MS"))
        cfg.summarizer.external_timeout = std::chrono::milliseconds(parse_int(v, "PG_SUMMARIZER_TIMEOUT_MS"));
    if (const char* v = env("PG_EMBEDDER_ENDPOINT")) {
        EmbedderConfig ec = cfg.embedder.value_or(EmbedderConfig{});
        ec.backend = EmbedderBackend::external;
        ec.external_endpoint = v;
        cfg.embedder = ec;
    }
    cfg.validate();
}

}  // namespace pg
