#include <doctest.h>

#include <json.hpp>
#include <random>

#include "policygrade/embed.hpp"
#include "policygrade/error.hpp"
#include "support/fake_server.hpp"

using namespace pg;

namespace {

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s;
}

std::size_t nonzero(const EmbeddingVector& v) {
    std::size_t n = 0;
    for (double x : v.values) n += x != 0.0;
    return n;
}

}  // namespace

TEST_CASE("builtin embedding shape and norm") {
    const EmbedderConfig cfg;
    for (const char* t : {"a", "data", "we may share your data with partners", "x y z x y z x y z"}) {
        const auto v = embed(t, cfg);
        CHECK(v.dimension() == 768);
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    std::string long_text;
    for (int i = 0; i < 5000; ++i) long_text += "tok" + std::to_string(i % 97) + " ";
    CHECK(embed(long_text, cfg).dimension() == 768);
}

TEST_CASE("builtin embedding is deterministic") {
    const EmbedderConfig cfg;
    CHECK(embed("data", cfg) == embed("data", cfg));
    EmbedderConfig other = cfg;
    other.hash_seed = 7;
    CHECK_FALSE(embed("data privacy", cfg) == embed("data privacy", other));
}

TEST_CASE("two tokens give at most three buckets") {
    const auto v = embed("a b", EmbedderConfig{});
    CHECK(nonzero(v) <= 3);
    CHECK(nonzero(v) >= 1);
    CHECK(v.norm() == doctest::Approx(1.0));
}

TEST_CASE("texts with no shared n-grams are orthogonal") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> len(1, 6), letter(0, 12);
    EmbedderConfig cfg;
    cfg.dimension = 1 << 20;
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        std::string a, b;
        for (int i = 0, n = len(rng); i < n; ++i) a += std::string(1 + letter(rng) % 3, static_cast<char>('a' + letter(rng))) + " ";
        for (int i = 0, n = len(rng); i < n; ++i) b += std::string(1 + letter(rng) % 3, static_cast<char>('n' + letter(rng))) + " ";
        // Re-roll the seed in the unlikely event of a bucket collision.
        double ip = 1.0;
        for (cfg.hash_seed = 0; cfg.hash_seed < 5 && ip != 0.0; ++cfg.hash_seed) ip = dot(embed(a, cfg), embed(b, cfg));
        CHECK(ip == 0.0);
        ++checked;
    }
    CHECK(checked == 300);
}

TEST_CASE("embedding errors") {
    const EmbedderConfig cfg;
    CHECK_THROWS_AS(embed("", cfg), Error);
    try {
        embed(" \t\n", cfg);
        FAIL("expected EmptyText");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_text);
    }
    const std::vector<std::string> batch{"x", "", "z"};
    try {
        embed_batch(batch, cfg);
        FAIL("expected EmptyText");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_text);
        CHECK(e.index() == 1u);
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
}

TEST_CASE("embed_batch is elementwise") {
    const EmbedderConfig cfg;
    CHECK(embed_batch({}, cfg).empty());
    const std::vector<std::string> texts{"x", "y"};
    const auto out = embed_batch(texts, cfg);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == embed("x", cfg));
    CHECK(out[1] == embed("y", cfg));
}

TEST_CASE("fingerprint identifies the embedding space") {
    EmbedderConfig cfg;
    CHECK(cfg.fingerprint() == "builtin_hashed:dim=768:orders=1,2:seed=0");
    cfg.ngram_orders = {1};
    CHECK(cfg.fingerprint() != EmbedderConfig{}.fingerprint());
    EmbedderConfig bad;
    bad.dimension = 0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("external embedder") {
    testing::FakeServer fake;
    fake.server.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
        const auto j = nlohmann::json::parse(req.body);
        nlohmann::json vectors = nlohmann::json::array();
        for (const auto& t : j["texts"]) {
            const double len = static_cast<double>(t.get<std::string>().size());
            vectors.push_back({len, 1.0, 0.0, 2.0});
        }
        res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
    });
    fake.server.Post("/short", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"vectors": [[1.0, 2.0]]})", "application/json");
    });
    fake.start();

    EmbedderConfig cfg;
    cfg.backend = EmbedderBackend::external;
    cfg.dimension = 4;
    cfg.external_endpoint = fake.url("/embed");
    cfg.external_timeout = std::chrono::milliseconds(5000);
    const std::vector<std::string> texts{"abc", "de"};
    const auto out = embed_batch(texts, cfg);
    REQUIRE(out.size() == 2);
    CHECK(out[0].dimension() == 4);
    CHECK(out[0].norm() == doctest::Approx(1.0));
    CHECK(out[0].values[0] > out[1].values[0]);

    cfg.external_endpoint = fake.url("/short");
    try {
        embed("abc", cfg);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::dimension_mismatch);
    }

    cfg.external_endpoint = "http://127.0.0.1:1/embed";
    cfg.external_timeout = std::chrono::milliseconds(500);
    try {
        embed("abc", cfg);
        FAIL("expected BackendUnavailable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::backend_unavailable);
    }
}
