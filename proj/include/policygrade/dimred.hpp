#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "policygrade/labels.hpp"

namespace pg {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
    Label label = Label::neutral;
};

struct PcaResult {
    std::vector<std::array<double, 2>> points;
    std::array<double, 2> explained_variance{};  // top-2 eigenvalues of the sample covariance
    std::array<std::vector<double>, 2> components;  // orthonormal loadings
};

/// Projects mean-centred rows onto the top two principal axes. Each axis is
/// oriented so that its largest-magnitude loading is positive. Needs at least
/// three rows of equal dimension.
PcaResult pca2(std::span<const std::vector<double>> rows);

struct TsneParams {
    double perplexity = 30.0;  // clamped to (n - 1) / 3
    std::uint64_t seed = 0;
    std::size_t iterations = 1000;
    double learning_rate = 0.0;  // <= 0: max(n / early_exaggeration / 4, 50)
    double early_exaggeration = 12.0;
    std::size_t exaggeration_iterations = 250;
};

/// Exact t-SNE to two dimensions. Deterministic for a given seed. Needs at
/// least ten rows.
std::vector<std::array<double, 2>> tsne2(std::span<const std::vector<double>> rows,
                                         const TsneParams& params = {});

/// Writes "x,y,label" CSV with 9 significant digits.
void export_scatter(std::span<const Point2D> points, const std::filesystem::path& out);

}  // namespace pg
