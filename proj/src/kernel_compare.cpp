#include "heatgraph/kernel_compare.hpp"

#include <algorithm>
#include <cmath>

namespace heatgraph {

double RadialKernel::max_spread() const {
    double result = 0;
    for (const auto& row : spread) {
        for (double s : row) result = std::max(result, s);
    }
    return result;
}

RadialKernel radial_kernel(const Ball& model_ball, const std::vector<double>& t_grid) {
    if (!model_ball.is_model_tree_ball()) {
        throw std::invalid_argument("radial kernel requires a model-tree ball");
    }
    const HeatKernelBall kernel(std::make_shared<Ball>(model_ball));
    const Ball& ball = kernel.ball();

    RadialKernel radial;
    radial.radius = ball.radius();
    radial.t_grid = t_grid;
    for (double t : t_grid) {
        std::vector<double> values(ball.radius() + 1, 0.0);
        std::vector<double> spread(ball.radius() + 1, 0.0);
        for (int r = 0; r <= ball.radius(); ++r) {
            const auto& sphere = ball.spheres()[r];
            double lo = 0, hi = 0, sum = 0;
            bool first = true;
            for (int x : sphere) {
                const double p = kernel.value(ball.root_index(), x, t);
                sum += p;
                if (first || p < lo) lo = p;
                if (first || p > hi) hi = p;
                first = false;
            }
            values[r] = sum / static_cast<double>(sphere.size());
            spread[r] = hi - lo;
        }
        radial.values.push_back(std::move(values));
        radial.spread.push_back(std::move(spread));
    }
    return radial;
}

namespace {

/// Symmetrized radial reduced Laplacian over spheres 0..radius-1 with the
/// spheres as an orthonormal basis: diag m(j), off-diagonal -sqrt(n(j)).
Eigen::MatrixXd radial_operator(const BranchingLaw& law, int radius) {
    const int n = radius;  // interior spheres 0..radius-1
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        S(j, j) = static_cast<double>(j == 0 ? law.root_valence() : law.value_at(j) + 1);
        if (j + 1 < n) {
            const double coupling = std::sqrt(static_cast<double>(law.value_at(j)));
            S(j, j + 1) = -coupling;
            S(j + 1, j) = -coupling;
        }
    }
    return S;
}

}  // namespace

std::vector<double> model_radial_kernel(const BranchingLaw& law, int radius, double t) {
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    if (t < 0) throw std::invalid_argument("time must be >= 0");

    const Eigen::MatrixXd S = radial_operator(law, radius);
    const Eigen::VectorXd column = matrix_exponential(-t * S).col(0);

    std::vector<double> rho(static_cast<std::size_t>(radius) + 1, 0.0);
    double sqrt_volume = 1.0;  // sqrt Vol(S_0)
    for (int j = 0; j < radius; ++j) {
        rho[j] = column[j] / sqrt_volume;
        sqrt_volume *= std::sqrt(static_cast<double>(law.value_at(j)));
    }
    return rho;  // rho[radius] = 0 on the Dirichlet boundary sphere
}

double model_radial_mass(const BranchingLaw& law, int radius, double t) {
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    if (t < 0) throw std::invalid_argument("time must be >= 0");

    const Eigen::MatrixXd S = radial_operator(law, radius);
    const Eigen::VectorXd column = matrix_exponential(-t * S).col(0);

    double mass = 0;
    double sqrt_volume = 1.0;
    for (int j = 0; j < radius; ++j) {
        mass += column[j] * sqrt_volume;  // rho_t(j) * Vol(S_j)
        sqrt_volume *= std::sqrt(static_cast<double>(law.value_at(j)));
    }
    return mass;
}

namespace {

CompareReport compare_against_model(const Ball& ball, const BranchingLaw& law,
                                    const std::vector<double>& t_grid, CompareMode mode) {
    const int radius = ball.radius();
    if (radius < 1) throw std::invalid_argument("comparison radius must be >= 1");

    const HeatKernelBall kernel(std::make_shared<Ball>(ball));
    CompareReport report;
    bool first = true;
    for (double t : t_grid) {
        const std::vector<double> rho = model_radial_kernel(law, radius, t);
        for (int r = 0; r <= radius; ++r) {
            CompareReport::Row row;
            row.r = r;
            row.t = t;
            row.rho = rho[r];
            bool sphere_first = true;
            double margin_min = 0;
            for (int x : kernel.ball().spheres()[r]) {
                const double p = kernel.value(kernel.ball().root_index(), x, t);
                if (sphere_first || p < row.p_min) row.p_min = p;
                if (sphere_first || p > row.p_max) row.p_max = p;
                const double margin = mode == CompareMode::ModelBelow ? p - rho[r] : rho[r] - p;
                if (sphere_first || margin < margin_min) margin_min = margin;
                report.max_abs_margin = std::max(report.max_abs_margin, std::abs(margin));
                sphere_first = false;
            }
            row.margin = margin_min;
            report.rows.push_back(row);
            if (first || margin_min < report.min_margin) report.min_margin = margin_min;
            first = false;
        }
    }
    return report;
}

}  // namespace

CompareReport compare_embedded(const Ball& t_ball, const BranchingLaw& law,
                               const std::vector<double>& t_grid, CompareMode mode) {
    const ValenceProfile profile = valence_profile(t_ball);
    const long long root_valence = t_ball.valence(t_ball.root_index());
    if (mode == CompareMode::ModelBelow) {
        if (root_valence > law.root_valence()) {
            throw std::invalid_argument("hypothesis m(root) <= n(0) violated");
        }
        for (int r = 1; r < t_ball.radius(); ++r) {
            if (profile.per_sphere[r].max_valence > law.value_at(r) + 1) {
                throw std::invalid_argument("hypothesis M(r) <= n(r)+1 violated at r = " +
                                            std::to_string(r));
            }
        }
    } else {
        if (law.root_valence() > root_valence) {
            throw std::invalid_argument("hypothesis n(0) <= m(root) violated");
        }
        for (int r = 1; r < t_ball.radius(); ++r) {
            if (law.value_at(r) > profile.per_sphere[r].min_valence - 1) {
                throw std::invalid_argument(
                    "hypothesis n(r) <= underline_m(r)-1 violated at r = " + std::to_string(r));
            }
        }
    }
    return compare_against_model(t_ball, law, t_grid, mode);
}

CompareReport compare_generalized_graph(const Ball& g_ball, const BranchingLaw& law,
                                        const std::vector<double>& t_grid) {
    const ValenceProfile profile = valence_profile(g_ball);
    if (law.root_valence() > profile.per_vertex[g_ball.root_index()].outward) {
        throw std::invalid_argument("hypothesis n(0) <= m_{+1}(root) violated");
    }
    for (int v = 0; v < g_ball.size(); ++v) {
        const int r = g_ball.distance(v);
        if (r == 0 || r >= g_ball.radius()) continue;
        if (profile.per_vertex[v].inward != 1) {
            throw std::invalid_argument("hypothesis m_{-1}(x) = 1 violated at vertex " +
                                        g_ball.id(v));
        }
        if (law.value_at(r) > profile.per_vertex[v].outward) {
            throw std::invalid_argument("hypothesis n(r) <= m_{+1}(x) violated at vertex " +
                                        g_ball.id(v));
        }
    }
    return compare_against_model(g_ball, law, t_grid, CompareMode::ModelAbove);
}

}  // namespace heatgraph
