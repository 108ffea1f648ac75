#include "heatgraph/heat.hpp"

#include <algorithm>
#include <cmath>

#include "heatgraph/kernel_compare.hpp"

namespace heatgraph {

SpectralDecomposition spectral_decompose(const ReducedLaplacian& L) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L.matrix);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigensolver failed on a " + std::to_string(L.dimension()) +
                                 "-dimensional reduced Laplacian");
    }
    SpectralDecomposition decomposition;
    decomposition.eigenvalues = solver.eigenvalues();
    decomposition.eigenvectors = solver.eigenvectors();

    // Deterministic sign convention: first nonzero component positive.
    const int n = decomposition.dimension();
    for (int j = 0; j < n; ++j) {
        auto column = decomposition.eigenvectors.col(j);
        const double threshold = 1e-12 * column.cwiseAbs().maxCoeff();
        for (int i = 0; i < n; ++i) {
            if (std::abs(column[i]) > threshold) {
                if (column[i] < 0) column = -column;
                break;
            }
        }
    }
    return decomposition;
}

HeatKernelBall::HeatKernelBall(std::shared_ptr<const Ball> ball)
    : ball_(std::move(ball)),
      reduced_(assemble_reduced(*ball_)),
      decomposition_(spectral_decompose(reduced_)) {
    eigvec_sums_ = decomposition_.eigenvectors.colwise().sum();
}

void HeatKernelBall::require_time(double t) const {
    if (t < 0) throw std::invalid_argument("heat kernel time must be >= 0");
}

double HeatKernelBall::value(int x, int y, double t) const {
    require_time(t);
    const int i = reduced_.interior_index[x];
    const int j = reduced_.interior_index[y];
    if (i < 0 || j < 0) return 0.0;
    const auto& lambda = decomposition_.eigenvalues;
    const auto& phi = decomposition_.eigenvectors;
    double sum = 0;
    for (int k = 0; k < decomposition_.dimension(); ++k) {
        // The eigenvector product is grouped first so the value is
        // bitwise symmetric in (x, y).
        sum += std::exp(-lambda[k] * t) * (phi(i, k) * phi(j, k));
    }
    return sum;
}

double HeatKernelBall::value(const VertexId& x, const VertexId& y, double t) const {
    return value(ball_->index_of(x), ball_->index_of(y), t);
}

double HeatKernelBall::mass(int x, double t) const {
    require_time(t);
    const int i = reduced_.interior_index[x];
    if (i < 0) throw std::invalid_argument("heat mass requires an interior vertex");
    const auto& lambda = decomposition_.eigenvalues;
    const auto& phi = decomposition_.eigenvectors;
    double sum = 0;
    for (int k = 0; k < decomposition_.dimension(); ++k) {
        sum += std::exp(-lambda[k] * t) * phi(i, k) * eigvec_sums_[k];
    }
    return sum;
}

double HeatKernelBall::mass(const VertexId& x, double t) const {
    return mass(ball_->index_of(x), t);
}

Eigen::MatrixXd HeatKernelBall::interior_matrix(double t) const {
    require_time(t);
    const Eigen::VectorXd weights = (-t * decomposition_.eigenvalues.array()).exp();
    return decomposition_.eigenvectors * weights.asDiagonal() *
           decomposition_.eigenvectors.transpose();
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm > 1.0) {
        norm /= 2;
        ++squarings;
    }
    const Eigen::MatrixXd B = A / std::ldexp(1.0, squarings);

    // Taylor sum of exp(B) with ||B|| <= 1.  After adding B^k/k! the tail
    // is bounded by ||term_k|| * sum_{j>=1} (k+1)^{-j} <= ||term_k|| / k.
    // Squaring at most doubles the error per step (||exp(-tL)|| <= 1), so
    // target the Taylor error at 1e-13 / 2^squarings.
    const double target = 1e-13 / std::ldexp(1.0, squarings);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 64; ++k) {
        term = (term * B) / static_cast<double>(k);
        sum += term;
        const double term_norm = term.cwiseAbs().rowwise().sum().maxCoeff();
        if (term_norm / k < target) break;
    }
    for (int i = 0; i < squarings; ++i) sum = (sum * sum).eval();
    return sum;
}

Eigen::MatrixXd semigroup_series(const ReducedLaplacian& L, double t) {
    if (t < 0) throw std::invalid_argument("heat semigroup time must be >= 0");
    return matrix_exponential(-t * L.matrix);
}

ConvergenceTrace exhaustion_kernel(const LazyGraph& g, const VertexId& x, const VertexId& y,
                                   double t, const std::vector<int>& radii,
                                   const ExhaustionOptions& options) {
    if (radii.empty()) throw std::invalid_argument("radius schedule is empty");
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (radii[i] <= radii[i - 1]) {
            throw std::invalid_argument("radius schedule must be strictly increasing");
        }
    }

    // On a model tree the kernel column at the root is radial, so probes
    // involving the root reduce to the radius-sized tridiagonal kernel and
    // need no ball materialization at all.
    int radial_probe_depth = -1;
    if (g.family().is_model_tree() && (x == g.root() || y == g.root())) {
        const VertexId& other = x == g.root() ? y : x;
        g.neighbors(other);  // validates the vertex id
        radial_probe_depth =
            static_cast<int>(std::count(other.begin(), other.end(), '.'));
        if (radial_probe_depth >= radii.front()) {
            throw std::invalid_argument(
                "probe vertices must be interior to the smallest scheduled ball");
        }
    }

    ConvergenceTrace trace;
    for (int radius : radii) {
        double value = 0;
        if (radial_probe_depth >= 0) {
            try {
                value = model_radial_kernel(*g.family().law, radius, t)[radial_probe_depth];
            } catch (const std::out_of_range&) {
                trace.capacity_hit = true;  // branching law undefined past its prefix
                break;
            }
        } else {
            std::shared_ptr<const Ball> ball;
            try {
                ball = std::make_shared<Ball>(materialize_ball(g, radius, options.capacity));
            } catch (const CapacityError&) {
                trace.capacity_hit = true;
                break;
            }
            if (trace.radii.empty()) {
                const int xi = ball->index_of(x);
                const int yi = ball->index_of(y);
                if (!ball->is_interior(xi) || !ball->is_interior(yi)) {
                    throw std::invalid_argument(
                        "probe vertices must be interior to the smallest scheduled ball");
                }
            }
            const HeatKernelBall kernel(ball);
            value = kernel.value(x, y, t);
        }
        trace.deltas.push_back(trace.values.empty() ? 0.0 : value - trace.values.back());
        trace.values.push_back(value);
        trace.radii.push_back(radius);
        if (t == 0.0) {
            // p_0 = delta independently of the radius.
            trace.converged = true;
            break;
        }
        if (trace.values.size() > 1 && std::abs(trace.deltas.back()) < options.tol) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

double KernelPropertyReport::max_violation() const {
    return std::max({symmetry, boundary, initial, semigroup, positivity, heat_equation});
}

KernelPropertyReport verify_kernel_properties(const HeatKernelBall& kernel,
                                              const std::vector<double>& t_grid) {
    KernelPropertyReport report;
    const Ball& ball = kernel.ball();
    const auto& decomposition = kernel.decomposition();
    const auto& L = kernel.reduced();
    const int n = decomposition.dimension();

    // p_0 = delta on the interior.
    report.initial =
        (kernel.interior_matrix(0.0) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

    // Boundary rows vanish identically; spot-check through the public
    // evaluation.
    for (int v = 0; v < ball.size() && report.boundary == 0; ++v) {
        if (ball.is_boundary(v)) {
            report.boundary = std::abs(kernel.value(v, ball.root_index(), 1.0));
            break;
        }
    }

    double middle_t = 0;
    for (double t : t_grid) {
        if (t > 0 && (middle_t == 0 || std::abs(t - 1.0) < std::abs(middle_t - 1.0))) {
            middle_t = t;
        }
    }
    for (double t : t_grid) {
        if (t <= 0) continue;
        const Eigen::MatrixXd p_half = kernel.interior_matrix(t / 2);
        const Eigen::MatrixXd p = kernel.interior_matrix(t);

        report.symmetry = std::max(report.symmetry, (p - p.transpose()).cwiseAbs().maxCoeff());
        report.semigroup =
            std::max(report.semigroup, (p_half * p_half - p).cwiseAbs().maxCoeff());
        if (t == middle_t) {
            // One unequal split: the semigroup identity with s != t.
            const Eigen::MatrixXd unequal =
                kernel.interior_matrix(t / 3) * kernel.interior_matrix(2 * t / 3);
            report.semigroup = std::max(report.semigroup, (unequal - p).cwiseAbs().maxCoeff());
        }
        report.positivity = std::max(report.positivity, std::max(0.0, -p.minCoeff()));

        // Analytic time derivative: d/dt p_t = -Phi Lambda e^{-Lambda t} Phi^T.
        const Eigen::VectorXd weights =
            decomposition.eigenvalues.array() * (-t * decomposition.eigenvalues.array()).exp();
        const Eigen::MatrixXd dp = -(decomposition.eigenvectors * weights.asDiagonal() *
                                     decomposition.eigenvectors.transpose());
        report.heat_equation =
            std::max(report.heat_equation, (L.matrix * p + dp).cwiseAbs().maxCoeff());
    }
    return report;
}

std::vector<int> parse_radius_schedule(const std::string& spec) {
    // "a:b[:step]" or a comma list.
    std::vector<int> radii;
    if (spec.find(':') != std::string::npos) {
        int a = 0, b = 0, step = 1;
        const std::size_t c1 = spec.find(':');
        const std::size_t c2 = spec.find(':', c1 + 1);
        try {
            a = std::stoi(spec.substr(0, c1));
            b = std::stoi(spec.substr(c1 + 1, c2 == std::string::npos ? std::string::npos
                                                                      : c2 - c1 - 1));
            if (c2 != std::string::npos) step = std::stoi(spec.substr(c2 + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad radius schedule '" + spec + "' (expected a:b[:step])");
        }
        if (step < 1 || b < a) {
            throw std::invalid_argument("bad radius schedule '" + spec + "' (expected a:b[:step])");
        }
        for (int r = a; r <= b; r += step) radii.push_back(r);
    } else {
        std::size_t pos = 0;
        while (pos < spec.size()) {
            std::size_t comma = spec.find(',', pos);
            if (comma == std::string::npos) comma = spec.size();
            try {
                radii.push_back(std::stoi(spec.substr(pos, comma - pos)));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad radius schedule '" + spec + "'");
            }
            pos = comma + 1;
        }
    }
    if (radii.empty()) throw std::invalid_argument("radius schedule '" + spec + "' is empty");
    return radii;
}

}  // namespace heatgraph
