#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "policygrade/dimred.hpp"
#include "policygrade/error.hpp"
#include "support/oracles.hpp"

using namespace pg;

namespace {

std::vector<std::vector<double>> random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::normal_distribution<double> g;
    std::vector<std::vector<double>> x(n, std::vector<double>(d));
    for (auto& r : x)
        for (auto& v : r) v = g(rng);
    return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TEST_CASE("pca on the diagonal") {
    std::vector<std::vector<double>> x{{0, 0, 0, 0}, {1, 1, 0, 0}, {2, 2, 0, 0}};
    const auto r = pca2(x);
    CHECK(r.components[0][0] == doctest::Approx(std::sqrt(0.5)));
    CHECK(r.components[0][1] == doctest::Approx(std::sqrt(0.5)));
    CHECK(r.explained_variance[0] == doctest::Approx(2.0));
    CHECK(r.explained_variance[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.points[1][0] - r.points[0][0] == doctest::Approx(r.points[2][0] - r.points[1][0]));
    CHECK(r.points[1][0] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("pca on rank-one data") {
    std::vector<std::vector<double>> x;
    for (int i = 0; i < 12; ++i) x.push_back({1.0 * i, -2.0 * i, 0.5 * i, 3.0});
    const auto r = pca2(x);
    CHECK(std::abs(r.explained_variance[1]) <= 1e-9);
    for (const auto& p : r.points) CHECK(std::abs(p[1]) <= 1e-6);
    CHECK(dot(r.components[0], r.components[1]) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("pca edge cases") {
    CHECK_THROWS_AS(pca2(std::vector<std::vector<double>>{{1, 2}, {3, 4}}), Error);
    std::vector<std::vector<double>> same(5, std::vector<double>{1, 2, 3});
    const auto r = pca2(same);
    CHECK(r.explained_variance[0] == 0.0);
    CHECK(r.explained_variance[1] == 0.0);
    for (const auto& p : r.points) {
        CHECK(p[0] == 0.0);
        CHECK(p[1] == 0.0);
    }
    std::vector<std::vector<double>> ragged{{1, 2}, {3}, {4, 5}};
    CHECK_THROWS_AS(pca2(ragged), Error);
}

TEST_CASE("pca matches the Jacobi oracle") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::size_t> nd(3, 50), dd(2, 32);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = nd(rng), d = dd(rng);
        CAPTURE(n);
        CAPTURE(d);
        const auto x = random_matrix(rng, n, d);
        const auto got = pca2(x);
        const auto want = oracle::naive_pca2(x);
        for (int c = 0; c < 2; ++c) {
            CHECK(got.explained_variance[c] == doctest::Approx(want.variance[c]).epsilon(1e-6));
            CHECK(std::abs(dot(got.components[c], got.components[c]) - 1.0) <= 1e-9);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got.points[i][c] - want.points[i][c]) <= 1e-6);
        }
        CHECK(std::abs(dot(got.components[0], got.components[1])) <= 1e-9);
        // Sample variance along each axis equals its eigenvalue.
        for (int c = 0; c < 2; ++c) {
            double ss = 0;
            for (const auto& p : got.points) ss += p[c] * p[c];
            CHECK(ss / static_cast<double>(n - 1) == doctest::Approx(got.explained_variance[c]).epsilon(1e-6));
        }
    }
}

TEST_CASE("tsne separates far blobs and is deterministic") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g(0.0, 0.1);
    std::vector<std::vector<double>> x;
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 10; ++i) {
            std::vector<double> r(8);
            for (auto& v : r) v = g(rng) + (b ? 20.0 : 0.0);
            x.push_back(r);
        }
    TsneParams params;
    params.iterations = 500;
    const auto y = tsne2(x, params);
    REQUIRE(y.size() == 20);
    auto dist = [&](std::size_t i, std::size_t j) { return std::hypot(y[i][0] - y[j][0], y[i][1] - y[j][1]); };
    double intra = 0, inter = 1e300;
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = i + 1; j < 20; ++j) {
            if ((i < 10) == (j < 10)) intra = std::max(intra, dist(i, j));
            else inter = std::min(inter, dist(i, j));
        }
    CHECK(inter > intra);
    const auto again = tsne2(x, params);
    CHECK(again == y);
}

TEST_CASE("tsne preconditions") {
    std::vector<std::vector<double>> five(5, std::vector<double>{1, 2});
    CHECK_THROWS_AS(tsne2(five), Error);
    std::vector<std::vector<double>> twelve(12, std::vector<double>{1, 2});
    TsneParams p;
    p.perplexity = 0.5;
    CHECK_THROWS_AS(tsne2(twelve, p), Error);
}

TEST_CASE("scatter export") {
    const auto path = std::filesystem::temp_directory_path() / "pg_scatter_test.csv";
    const std::vector<Point2D> pts{{0.123456789012, -4.5, Label::good}, {1e-5, 2.0, Label::blocker}};
    export_scatter(pts, path);
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "x,y,label");
    CHECK(lines[2].substr(lines[2].rfind(',') + 1) == "blocker");
    const double x = std::stod(lines[1].substr(0, lines[1].find(',')));
    CHECK(std::abs(x - 0.123456789012) <= 1e-8);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(export_scatter(pts, "/nonexistent/dir/out.csv"), Error);
}
