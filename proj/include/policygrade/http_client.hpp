#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include <json.hpp>

namespace pg::http {

/// Splits "http://host:port/path?q" into the scheme-host-port part accepted by
/// httplib::Client and the request target.
struct Url {
    std::string origin;  // e.g. "http://127.0.0.1:8080"
    std::string target;  // e.g. "/v1/summarize", never empty
};

Url parse_url(std::string_view url);

/// POSTs `body` as JSON and parses the JSON response. Throws
/// pg::Error(backend_unavailable) on transport failure, timeout, non-2xx
/// status or an unparseable body.
nlohmann::json post_json(std::string_view url, const nlohmann::json& body,
                         std::chrono::milliseconds timeout);

/// GET returning the raw body; same error contract as post_json.
std::string get(std::string_view url, std::chrono::milliseconds timeout);

}  // namespace pg::http
