#pragma once

#include <Eigen/Dense>

#include "heatgraph/graph.hpp"

namespace heatgraph {

/// Real-valued function on the vertices of a Ball, indexed like the ball.
using VertexFunction = Eigen::VectorXd;

/// Antisymmetric function on oriented edges, stored on the ball's edge
/// list with the orientation [a,b], a < b; the reverse orientation is the
/// negative by construction.
struct EdgeFunction {
    Eigen::VectorXd values;  // aligned with Ball::edges()

    /// Value on the oriented edge [x,y]; throws when x,y are not adjacent
    /// in the ball.
    double at(const Ball& ball, int x, int y) const;
};

/// Combinatorial Laplacian restricted to interior rows/columns: full-graph
/// valence m(x) on the diagonal, -1 between adjacent interior vertices.
/// Exactly symmetric by construction.
struct ReducedLaplacian {
    std::vector<int> interior;        // ball indices, BFS order
    std::vector<int> interior_index;  // ball index -> row, or -1
    Eigen::MatrixXd matrix;
    Eigen::VectorXd valences;         // diagonal, m(x) per interior vertex

    int dimension() const { return static_cast<int>(interior.size()); }
};

/// Delta f(x) = m(x) f(x) - sum_{y ~ x} f(y).  Requires every full-graph
/// neighbor of x to lie inside the ball; otherwise the sum is not
/// computable and an out-of-domain error is thrown.
double apply_laplacian(const Ball& ball, const VertexFunction& f, int x);
double apply_laplacian(const Ball& ball, const VertexFunction& f, const VertexId& x);

/// Delta_bd f(x) = Delta f(x) / m(x).
double apply_bounded_laplacian(const Ball& ball, const VertexFunction& f, int x);

ReducedLaplacian assemble_reduced(const Ball& ball);

/// df([x,y]) = f(y) - f(x).
EdgeFunction coboundary(const Ball& ball, const VertexFunction& f);

/// Both sides of the discrete Green identity over the ball, with functions
/// extended by 0 outside.  The boundary correction collects the terms
/// (f(x) - f(z)) g(x) over edges leaving the ball, with f(z) taken as 0;
/// it is reported separately.
struct GreenReport {
    double laplacian_sum = 0;   // sum over D of Delta f * g
    double edge_sum = 0;        // sum over oriented edges of df * dg
    double boundary_term = 0;
    double residual() const { return std::abs(laplacian_sum - edge_sum - boundary_term); }
};

GreenReport green_identity(const Ball& ball, const VertexFunction& f, const VertexFunction& g);
double green_residual(const Ball& ball, const VertexFunction& f, const VertexFunction& g);

/// Largest eigenvalue of the reduced bounded Laplacian, symmetrized as
/// D^{-1/2} L D^{-1/2} in the m-weighted inner product.  Bounded by 2 for
/// every graph.
double bounded_laplacian_norm_check(const Ball& ball);

}  // namespace heatgraph
