#pragma once

#include "heatgraph/heat.hpp"

namespace heatgraph {

/// Radial heat kernel rho_t(r) on a model-tree ball, together with the
/// per-sphere spread (max - min) of the full kernel, which vanishes up to
/// solver tolerance by radial constancy.
struct RadialKernel {
    int radius = 0;
    std::vector<double> t_grid;
    std::vector<std::vector<double>> values;  // values[ti][r], r = 0..radius
    std::vector<std::vector<double>> spread;  // spread[ti][r]

    double max_spread() const;
};

/// Full-kernel route: evaluates p_t(root, .) on the ball and groups values
/// by sphere.  Requires a model-tree ball.
RadialKernel radial_kernel(const Ball& model_ball, const std::vector<double>& t_grid);

/// Tridiagonal route: the Dirichlet kernel column at the root computed in
/// the radial subspace (spheres as orthonormal basis vectors), of size
/// `radius`.  Exact on model trees and needs no ball materialization.
/// Returns rho_t(r) for r = 0..radius (0 at the boundary sphere).
std::vector<double> model_radial_kernel(const BranchingLaw& law, int radius, double t);

/// Heat mass sum_y p_t(root,y) on a model-tree ball via the same radial
/// subspace: sum over spheres of rho_t(r) * Vol(S_r).
double model_radial_mass(const BranchingLaw& law, int radius, double t);

/// Side of the kernel comparison to assert.
enum class CompareMode {
    ModelBelow,  // rho_t(r) <= p_t(root,x), requires M(r) <= n(r)+1
    ModelAbove,  // p_t(root,x) <= rho_t(r), requires n(r) <= underline_m(r)-1
};

struct CompareReport {
    struct Row {
        int r = 0;
        double t = 0;
        double rho = 0;
        double p_min = 0;
        double p_max = 0;
        double margin = 0;  // min signed margin of the asserted inequality
    };

    std::vector<Row> rows;  // per (t, sphere)
    double min_margin = 0;
    double max_abs_margin = 0;
};

/// Compares the Dirichlet kernel of a tree ball against the radial kernel
/// of a model law at the same truncation radius.  The valence hypothesis
/// of the chosen mode is checked on all tested spheres, including the
/// root, and violations are precondition errors.
CompareReport compare_embedded(const Ball& t_ball, const BranchingLaw& law,
                               const std::vector<double>& t_grid, CompareMode mode);

/// Generalized one-sided comparison for graphs: requires m_{-1}(x) = 1 for
/// every non-root vertex and n(r) <= m_{+1}(x) pointwise; asserts
/// p_t(root,x) <= rho_t(r).
CompareReport compare_generalized_graph(const Ball& g_ball, const BranchingLaw& law,
                                        const std::vector<double>& t_grid);

}  // namespace heatgraph
