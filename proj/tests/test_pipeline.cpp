#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "policygrade/error.hpp"
#include "policygrade/pipeline.hpp"

using namespace pg;

namespace {

const std::filesystem::path kCorpus = std::filesystem::path(PG_DATA_DIR) / "mini_corpus.ndjson";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("train twice gives identical artifacts") {
    const auto dir = std::filesystem::temp_directory_path() / "pg_pipeline_test";
    std::filesystem::create_directories(dir);
    const auto a = train_pipeline(kCorpus, {}, {}, {}, ClassifierKind::knn, {}, dir / "a.pgm");
    const auto b = train_pipeline(kCorpus, {}, {}, {}, ClassifierKind::knn, {}, dir / "b.pgm");
    CHECK(slurp(dir / "a.pgm") == slurp(dir / "b.pgm"));
    CHECK(a.metrics == b.metrics);
    CHECK(a.metrics.accuracy >= 0.5);
    const auto& split = a.artifact.metadata["split"];
    CHECK(split["train_size"] == 32);
    CHECK(split["test_size"] == 8);
    CHECK(split["seed"] == 42);
    CHECK(a.artifact.metadata["dataset"] == "mini_corpus.ndjson");
    std::filesystem::remove_all(dir);
}

TEST_CASE("evaluate every classifier") {
    const auto rows = evaluate_pipeline(kCorpus, {}, {}, {}, {});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].model_name == "knn");
    for (const auto& r : rows) CHECK(std::abs(r.recall - r.accuracy) <= 1e-12);
}

TEST_CASE("naive bayes needs every class in the training split") {
    const auto path = std::filesystem::temp_directory_path() / "pg_no_blocker.ndjson";
    {
        std::ofstream out(path);
        for (int i = 0; i < 12; ++i)
            out << R"({"point":")" << (i % 3 == 0 ? "good" : i % 3 == 1 ? "neutral" : "bad")
                << R"(","quoteDoc":"d","quoteText":"text number )" << i << "\"}\n";
    }
    try {
        train_pipeline(path, {}, {}, {}, ClassifierKind::gaussian_nb, {}, path.string() + ".pgm");
        FAIL("expected missing class");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("blocker") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("embed_texts drops texts that clean to nothing") {
    const std::vector<std::string> raw{"<p>We sell data.</p>", "<br/>", "&nbsp;", "Delete anytime."};
    const auto out = embed_texts(raw, {}, {});
    CHECK(out.source_index == std::vector<std::size_t>{0, 3});
    CHECK(out.vectors.size() == 2);
    CHECK(out.summaries[0].text == "we sell data.");
    CHECK_FALSE(out.degraded);
}
