#include "policygrade/http_client.hpp"

#include <httplib.h>

#include "policygrade/error.hpp"

namespace pg::http {

namespace {

httplib::Client make_client(const Url& url, std::chrono::milliseconds timeout) {
    httplib::Client client(url.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    client.set_follow_location(true);
    return client;
}

[[noreturn]] void fail(std::string_view url, const std::string& what) {
    throw Error(Errc::backend_unavailable, std::string(url) + ": " + what);
}

void check(std::string_view url, const httplib::Result& res) {
    if (!res) fail(url, "request failed (" + httplib::to_string(res.error()) + ")");
    if (res->status < 200 || res->status >= 300)
        fail(url, "HTTP status " + std::to_string(res->status));
}

}  // namespace

Url parse_url(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos || scheme_end == 0)
        throw Error(Errc::invalid_argument, "URL must include a scheme: " + std::string(url));
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string_view::npos) return {std::string(url), "/"};
    if (path_start == scheme_end + 3)
        throw Error(Errc::invalid_argument, "URL has no host: " + std::string(url));
    return {std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
}

nlohmann::json post_json(std::string_view url, const nlohmann::json& body,
                         std::chrono::milliseconds timeout) {
    const Url parsed = parse_url(url);
    auto client = make_client(parsed, timeout);
    auto res = client.Post(parsed.target, body.dump(), "application/json");
    check(url, res);
    auto parsed_body = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed_body.is_discarded()) fail(url, "response is not valid JSON");
    return parsed_body;
}

std::string get(std::string_view url, std::chrono::milliseconds timeout) {
    const Url parsed = parse_url(url);
    auto client = make_client(parsed, timeout);
    auto res = client.Get(parsed.target);
    check(url, res);
    return res->body;
}

}  // namespace pg::http
