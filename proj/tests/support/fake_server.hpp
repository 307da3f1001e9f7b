#pragma once

#include <httplib.h>

#include <string>
#include <thread>

namespace pg::testing {

// httplib server on an ephemeral loopback port, torn down on destruction.
class FakeServer {
public:
    httplib::Server server;

    void start() {
        port_ = server.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~FakeServer() {
        server.stop();
        if (thread_.joinable()) thread_.join();
    }
    int port() const { return port_; }
    std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

private:
    int port_ = -1;
    std::thread thread_;
};

}  // namespace pg::testing
