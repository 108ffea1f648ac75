#include "heatgraph/operators.hpp"

#include <algorithm>

namespace heatgraph {

double EdgeFunction::at(const Ball& ball, int x, int y) const {
    const auto& edges = ball.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].first == x && edges[e].second == y) return values[static_cast<int>(e)];
        if (edges[e].first == y && edges[e].second == x) return -values[static_cast<int>(e)];
    }
    throw std::invalid_argument("vertices are not adjacent in the ball");
}

double apply_laplacian(const Ball& ball, const VertexFunction& f, int x) {
    if (f.size() != ball.size()) throw std::invalid_argument("function size does not match ball");
    if (ball.valence(x) != ball.in_ball_degree(x)) {
        throw std::domain_error("vertex " + ball.id(x) + " has unmaterialized neighbors");
    }
    double sum = 0;
    for (int y : ball.neighbors_in_ball(x)) sum += f[y];
    return static_cast<double>(ball.valence(x)) * f[x] - sum;
}

double apply_laplacian(const Ball& ball, const VertexFunction& f, const VertexId& x) {
    return apply_laplacian(ball, f, ball.index_of(x));
}

double apply_bounded_laplacian(const Ball& ball, const VertexFunction& f, int x) {
    return apply_laplacian(ball, f, x) / static_cast<double>(ball.valence(x));
}

ReducedLaplacian assemble_reduced(const Ball& ball) {
    if (ball.interior().empty()) {
        throw std::invalid_argument("ball has an empty interior");
    }
    ReducedLaplacian L;
    L.interior = ball.interior();
    L.interior_index.assign(ball.size(), -1);
    const int n = L.dimension();
    for (int i = 0; i < n; ++i) L.interior_index[L.interior[i]] = i;

    L.matrix = Eigen::MatrixXd::Zero(n, n);
    L.valences.resize(n);
    for (int i = 0; i < n; ++i) {
        const int v = L.interior[i];
        L.valences[i] = static_cast<double>(ball.valence(v));
        L.matrix(i, i) = L.valences[i];
        for (int w : ball.neighbors_in_ball(v)) {
            const int j = L.interior_index[w];
            if (j >= 0) L.matrix(i, j) = -1.0;
        }
    }
    return L;
}

EdgeFunction coboundary(const Ball& ball, const VertexFunction& f) {
    if (f.size() != ball.size()) throw std::invalid_argument("function size does not match ball");
    EdgeFunction df;
    df.values.resize(static_cast<Eigen::Index>(ball.edges().size()));
    Eigen::Index e = 0;
    for (const auto& [a, b] : ball.edges()) df.values[e++] = f[b] - f[a];
    return df;
}

GreenReport green_identity(const Ball& ball, const VertexFunction& f, const VertexFunction& g) {
    if (f.size() != ball.size() || g.size() != ball.size()) {
        throw std::invalid_argument("function size does not match ball");
    }
    GreenReport report;
    for (int x = 0; x < ball.size(); ++x) {
        double nbr_sum = 0;
        for (int y : ball.neighbors_in_ball(x)) nbr_sum += f[y];
        // Outside neighbors carry f = 0.
        report.laplacian_sum += (static_cast<double>(ball.valence(x)) * f[x] - nbr_sum) * g[x];
        const double leaving = static_cast<double>(ball.valence(x) - ball.in_ball_degree(x));
        report.boundary_term += leaving * f[x] * g[x];
    }
    for (const auto& [a, b] : ball.edges()) {
        report.edge_sum += (f[b] - f[a]) * (g[b] - g[a]);
    }
    return report;
}

double green_residual(const Ball& ball, const VertexFunction& f, const VertexFunction& g) {
    return green_identity(ball, f, g).residual();
}

double bounded_laplacian_norm_check(const Ball& ball) {
    const ReducedLaplacian L = assemble_reduced(ball);
    const Eigen::VectorXd scale = L.valences.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd normalized = scale.asDiagonal() * L.matrix * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return solver.eigenvalues().maxCoeff();
}

}  // namespace heatgraph
