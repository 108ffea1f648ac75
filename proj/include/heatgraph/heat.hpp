#pragma once

#include <memory>

#include "heatgraph/operators.hpp"

namespace heatgraph {

/// Eigenpairs of a reduced Laplacian: eigenvalues ascending, eigenvectors
/// orthonormal columns over the interior index order, signs fixed so the
/// first nonzero component of each eigenvector is positive.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    int dimension() const { return static_cast<int>(eigenvalues.size()); }
};

SpectralDecomposition spectral_decompose(const ReducedLaplacian& L);

/// Dirichlet heat kernel on a ball,
///   p_t(x,y) = sum_i exp(-lambda_i t) phi_i(x) phi_i(y),
/// zero whenever x or y is a boundary vertex.
class HeatKernelBall {
public:
    explicit HeatKernelBall(std::shared_ptr<const Ball> ball);

    /// p_t(x,y) for ball vertex indices; exact 0 on the boundary.
    double value(int x, int y, double t) const;
    double value(const VertexId& x, const VertexId& y, double t) const;

    /// Heat mass sum_y p_t(x,y) for interior x: 1 at t = 0, strictly less
    /// than 1 for t > 0 on balls with boundary, non-increasing in t.
    double mass(int x, double t) const;
    double mass(const VertexId& x, double t) const;

    /// Full kernel over interior rows/columns (interior index order).
    Eigen::MatrixXd interior_matrix(double t) const;

    const Ball& ball() const { return *ball_; }
    const std::shared_ptr<const Ball>& ball_ptr() const { return ball_; }
    const ReducedLaplacian& reduced() const { return reduced_; }
    const SpectralDecomposition& decomposition() const { return decomposition_; }

private:
    void require_time(double t) const;

    std::shared_ptr<const Ball> ball_;
    ReducedLaplacian reduced_;
    SpectralDecomposition decomposition_;
    Eigen::VectorXd eigvec_sums_;  // Phi^T 1, for heat mass
};

/// exp(A) for symmetric A by scaled Taylor summation with a rigorous
/// remainder bound, then repeated squaring.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A);

/// exp(-tL) over the interior indices.  Agrees with the eigendecomposition
/// kernel entrywise; the two construction routes are independent.
Eigen::MatrixXd semigroup_series(const ReducedLaplacian& L, double t);

/// Per-radius values of a quantity computed over a growing exhaustion.
/// Kernel values increase with the radius, so the final value is a lower
/// bound for the infinite-graph limit; no extrapolation is performed.
struct ConvergenceTrace {
    std::vector<int> radii;
    std::vector<double> values;
    std::vector<double> deltas;  // values[i] - values[i-1], deltas[0] = 0
    bool converged = false;
    bool capacity_hit = false;

    double final_value() const { return values.empty() ? 0.0 : values.back(); }
    bool inconclusive() const { return !converged; }
};

struct ExhaustionOptions {
    double tol = 1e-8;
    std::size_t capacity = kDefaultBallCapacity;
};

/// Dirichlet kernel values p_t^r(x,y) over a strictly increasing radius
/// schedule.  Stops early once the delta falls under tol; a capacity hit
/// yields an inconclusive trace rather than a truncated ball.
ConvergenceTrace exhaustion_kernel(const LazyGraph& g, const VertexId& x, const VertexId& y,
                                   double t, const std::vector<int>& radii,
                                   const ExhaustionOptions& options = {});

/// Maximum violation per heat-kernel property over a time grid:
/// symmetry, boundary vanishing, delta initial condition, the semigroup
/// identity, interior positivity and the heat-equation residual (with the
/// time derivative taken analytically from the eigendecomposition).
struct KernelPropertyReport {
    double symmetry = 0;
    double boundary = 0;
    double initial = 0;
    double semigroup = 0;
    double positivity = 0;
    double heat_equation = 0;

    double max_violation() const;
};

KernelPropertyReport verify_kernel_properties(const HeatKernelBall& kernel,
                                              const std::vector<double>& t_grid);

std::vector<int> parse_radius_schedule(const std::string& spec);

}  // namespace heatgraph
