#include "policygrade/dimred.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "policygrade/error.hpp"

namespace pg {

namespace {

Eigen::MatrixXd to_matrix(std::span<const std::vector<double>> rows) {
    const std::size_t dim = rows.front().size();
    if (dim == 0) throw Error(Errc::invalid_argument, "rows have dimension 0");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim)
            throw Error(Errc::dimension_mismatch, "row " + std::to_string(i) + " has dimension " +
                                                      std::to_string(rows[i].size()) + ", expected " +
                                                      std::to_string(dim), i);
        for (std::size_t d = 0; d < dim; ++d) {
            if (!std::isfinite(rows[i][d])) throw Error(Errc::invalid_argument, "non-finite input", i);
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = rows[i][d];
        }
    }
    return m;
}

// Largest-magnitude loading made positive; first index wins magnitude ties.
void fix_sign(Eigen::VectorXd& v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(best))) best = i;
    if (v(best) < 0) v = -v;
}

// Unit vector orthogonal to every column in `basis`, taken from the standard basis.
Eigen::VectorXd complete_basis(const std::vector<Eigen::VectorXd>& basis, Eigen::Index dim) {
    for (Eigen::Index j = 0; j < dim; ++j) {
        Eigen::VectorXd w = Eigen::VectorXd::Unit(dim, j);
        for (const auto& b : basis) w -= b.dot(w) * b;
        if (w.norm() > 0.5) return w.normalized();
    }
    throw Error(Errc::invalid_argument, "cannot complete an orthonormal basis");
}

}  // namespace

PcaResult pca2(std::span<const std::vector<double>> rows) {
    if (rows.size() < 3) throw Error(Errc::invalid_argument, "PCA needs at least 3 points");
    const Eigen::MatrixXd x = to_matrix(rows);
    const Eigen::Index n = x.rows();
    const Eigen::Index dim = x.cols();
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    const double denom = static_cast<double>(n - 1);

    std::array<double, 2> lambda{};
    std::vector<Eigen::VectorXd> axes;
    if (dim <= n) {
        const Eigen::MatrixXd cov = centered.transpose() * centered / denom;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        if (es.info() != Eigen::Success) throw Error(Errc::invalid_argument, "eigendecomposition failed");
        for (int c = 0; c < 2 && c < dim; ++c) {
            lambda[static_cast<std::size_t>(c)] = std::max(0.0, es.eigenvalues()(dim - 1 - c));
            axes.push_back(es.eigenvectors().col(dim - 1 - c));
        }
    } else {
        // Fewer points than dimensions: decompose the n x n Gram matrix instead.
        const Eigen::MatrixXd gram = centered * centered.transpose() / denom;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        if (es.info() != Eigen::Success) throw Error(Errc::invalid_argument, "eigendecomposition failed");
        const double scale = std::max(es.eigenvalues()(n - 1), 0.0);
        for (int c = 0; c < 2; ++c) {
            const double l = std::max(0.0, es.eigenvalues()(n - 1 - c));
            lambda[static_cast<std::size_t>(c)] = l;
            if (l <= 1e-12 * std::max(scale, 1e-300)) break;
            Eigen::VectorXd v = centered.transpose() * es.eigenvectors().col(n - 1 - c);
            for (const auto& b : axes) v -= b.dot(v) * b;
            axes.push_back(v.normalized());
        }
    }
    while (axes.size() < 2) axes.push_back(complete_basis(axes, dim));

    PcaResult out;
    out.explained_variance = lambda;
    for (std::size_t c = 0; c < 2; ++c) {
        fix_sign(axes[c]);
        out.components[c].assign(axes[c].data(), axes[c].data() + dim);
    }
    const Eigen::VectorXd p0 = centered * axes[0];
    const Eigen::VectorXd p1 = centered * axes[1];
    out.points.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out.points[static_cast<std::size_t>(i)] = {p0(i), p1(i)};
    return out;
}

namespace {

double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Box-Muller; spelled out so results do not depend on the standard library.
double standard_normal(std::mt19937_64& gen) {
    double u1 = unit_uniform(gen);
    while (u1 <= 0.0) u1 = unit_uniform(gen);
    const double u2 = unit_uniform(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Row-conditional affinities with per-point bandwidth matched to the
// target perplexity by bisection on the precision beta.
std::vector<double> conditional_affinities(const std::vector<double>& d2, std::size_t n, double perplexity) {
    std::vector<double> p(n * n, 0.0);
    const double target = std::log(perplexity);
    for (std::size_t i = 0; i < n; ++i) {
        double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
        const double* row = &d2[i * n];
        double* out = &p[i * n];
        for (int iter = 0; iter < 200; ++iter) {
            double min_d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) min_d = std::min(min_d, row[j]);
            double sum = 0.0, weighted = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                // Shifting by the nearest distance keeps exp() away from underflow.
                out[j] = std::exp(-beta * (row[j] - min_d));
                sum += out[j];
                weighted += (row[j] - min_d) * out[j];
            }
            const double entropy = std::log(sum) + beta * weighted / sum;
            for (std::size_t j = 0; j < n; ++j) out[j] /= sum;
            const double diff = entropy - target;
            if (std::abs(diff) < 1e-5) break;
            if (diff > 0) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
            } else {
                hi = beta;
                beta = (beta + lo) / 2.0;
            }
        }
        out[i] = 0.0;
    }
    return p;
}

}  // namespace

std::vector<std::array<double, 2>> tsne2(std::span<const std::vector<double>> rows, const TsneParams& params) {
    const std::size_t n = rows.size();
    if (n < 10) throw Error(Errc::invalid_argument, "t-SNE needs at least 10 points");
    if (!(params.perplexity >= 1.0))
        throw Error(Errc::invalid_argument, "perplexity is infeasible; it must be at least 1");
    const double perplexity = std::min(params.perplexity, static_cast<double>(n - 1) / 3.0);
    const Eigen::MatrixXd x = to_matrix(rows);

    std::vector<double> d2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = (x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).squaredNorm();
            d2[i * n + j] = d2[j * n + i] = v;
        }

    const auto cond = conditional_affinities(d2, n, perplexity);
    std::vector<double> p(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            p[i * n + j] = std::max((cond[i * n + j] + cond[j * n + i]) / (2.0 * static_cast<double>(n)), 1e-12);

    const double learning_rate =
        params.learning_rate > 0.0
            ? params.learning_rate
            : std::max(static_cast<double>(n) / std::max(params.early_exaggeration, 1.0) / 4.0, 50.0);

    std::mt19937_64 gen(params.seed);
    std::vector<std::array<double, 2>> y(n);
    for (auto& pt : y) pt = {1e-2 * standard_normal(gen), 1e-2 * standard_normal(gen)};

    std::vector<std::array<double, 2>> update(n, {0.0, 0.0}), gains(n, {1.0, 1.0}), grad(n);
    std::vector<double> num(n * n);
    for (std::size_t it = 0; it < params.iterations; ++it) {
        const bool early = it < params.exaggeration_iterations;
        const double exaggeration = early ? params.early_exaggeration : 1.0;
        const double momentum = early ? 0.5 : 0.8;

        double sum_q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num[i * n + i] = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
                const double q = 1.0 / (1.0 + dx * dx + dy * dy);
                num[i * n + j] = num[j * n + i] = q;
                sum_q += 2.0 * q;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double gx = 0.0, gy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double q = num[i * n + j];
                const double mult = (exaggeration * p[i * n + j] - q / sum_q) * q;
                gx += mult * (y[i][0] - y[j][0]);
                gy += mult * (y[i][1] - y[j][1]);
            }
            grad[i] = {4.0 * gx, 4.0 * gy};
        }
        std::array<double, 2> mean{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            for (int c = 0; c < 2; ++c) {
                double& g = gains[i][static_cast<std::size_t>(c)];
                const double gr = grad[i][static_cast<std::size_t>(c)];
                double& up = update[i][static_cast<std::size_t>(c)];
                g = ((gr > 0) != (up > 0)) ? g + 0.2 : g * 0.8;
                g = std::max(g, 0.01);
                up = momentum * up - learning_rate * g * gr;
                y[i][static_cast<std::size_t>(c)] += up;
                mean[static_cast<std::size_t>(c)] += y[i][static_cast<std::size_t>(c)];
            }
        }
        for (auto& pt : y) {
            pt[0] -= mean[0] / static_cast<double>(n);
            pt[1] -= mean[1] / static_cast<double>(n);
        }
    }
    return y;
}

void export_scatter(std::span<const Point2D> points, const std::filesystem::path& out_path) {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + out_path.string() + " for writing");
    out << "x,y,label\n";
    char buf[96];
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw Error(Errc::invalid_argument, "scatter point has non-finite coordinates");
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,", p.x, p.y);
        out << buf << to_string(p.label) << '\n';
    }
    if (!out) throw Error(Errc::io_error, "failed writing " + out_path.string());
}

}  // namespace pg
