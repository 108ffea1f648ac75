#include "heatgraph/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace heatgraph {

namespace {

double smallest_eigenvalue(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return solver.eigenvalues().minCoeff();
}

}  // namespace

Lambda0Pair lambda0_ball(const ReducedLaplacian& L) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L.matrix);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    Lambda0Pair pair;
    pair.value = solver.eigenvalues()[0];
    pair.eigenfunction = solver.eigenvectors().col(0);
    // The ground state of a connected interior has one sign; normalize it
    // to be positive.
    double dominant = 0;
    for (int i = 0; i < pair.eigenfunction.size(); ++i) {
        if (std::abs(pair.eigenfunction[i]) > std::abs(dominant)) dominant = pair.eigenfunction[i];
    }
    if (dominant < 0) pair.eigenfunction = -pair.eigenfunction;
    return pair;
}

double lambda0_value(const ReducedLaplacian& L) { return smallest_eigenvalue(L.matrix); }

Lambda0Trace lambda0_exhaustion(const LazyGraph& g, const std::vector<int>& radii,
                                std::size_t capacity) {
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (radii[i] <= radii[i - 1]) {
            throw std::invalid_argument("radius schedule must be strictly increasing");
        }
    }
    Lambda0Trace trace;
    for (int radius : radii) {
        Ball ball;
        try {
            ball = materialize_ball(g, radius, capacity);
        } catch (const CapacityError&) {
            trace.capacity_hit = true;
            break;
        }
        const ReducedLaplacian L = assemble_reduced(ball);
        trace.values.push_back(smallest_eigenvalue(L.matrix));
        trace.radii.push_back(radius);
    }
    return trace;
}

double rayleigh_quotient(const Ball& ball, const VertexFunction& f) {
    if (f.size() != ball.size()) throw std::invalid_argument("function size does not match ball");
    for (int v = 0; v < ball.size(); ++v) {
        if (ball.is_boundary(v) && f[v] != 0.0) {
            throw std::invalid_argument("function must vanish on the boundary");
        }
    }
    const double denominator = f.squaredNorm();
    if (denominator == 0) throw std::invalid_argument("the zero function has no Rayleigh quotient");

    double numerator = 0;
    for (const auto& [a, b] : ball.edges()) {
        const double d = f[b] - f[a];
        numerator += d * d;
    }
    // Edges leaving the ball see f = 0 outside; they contribute f(x)^2
    // each, which vanishes here since f is 0 on the boundary.
    return numerator / denominator;
}

CheegerRatios cheeger_ratios(const Ball& ball, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("subset is empty");
    std::vector<char> in_subset(ball.size(), 0);
    for (int v : subset) in_subset.at(static_cast<std::size_t>(v)) = 1;

    // Connectivity within the subset.
    std::deque<int> queue{subset.front()};
    std::vector<char> seen(ball.size(), 0);
    seen[subset.front()] = 1;
    std::size_t reached = 0;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        ++reached;
        for (int w : ball.neighbors_in_ball(v)) {
            if (in_subset[w] && !seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    if (reached != subset.size()) throw std::invalid_argument("subset is not connected");

    CheegerRatios ratios;
    ratios.volume = static_cast<long long>(subset.size());
    for (int v : subset) {
        ratios.area += ball.valence(v);
        long long inside = 0;
        for (int w : ball.neighbors_in_ball(v)) inside += in_subset[w];
        ratios.edge_boundary += ball.valence(v) - inside;
    }
    return ratios;
}

CheegerRatios oracle_cheeger_ratios(const LazyGraph& g, const std::vector<VertexId>& subset) {
    if (subset.empty()) throw std::invalid_argument("subset is empty");
    std::unordered_map<VertexId, int> index;
    for (std::size_t i = 0; i < subset.size(); ++i) index.emplace(subset[i], static_cast<int>(i));

    std::vector<NeighborInfo> info;
    info.reserve(subset.size());
    for (const VertexId& v : subset) info.push_back(g.neighbors(v));

    std::deque<int> queue{0};
    std::vector<char> seen(subset.size(), 0);
    seen[0] = 1;
    std::size_t reached = 0;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        ++reached;
        for (const VertexId& w : info[v].neighbors) {
            auto it = index.find(w);
            if (it != index.end() && !seen[it->second]) {
                seen[it->second] = 1;
                queue.push_back(it->second);
            }
        }
    }
    if (reached != subset.size()) throw std::invalid_argument("subset is not connected");

    CheegerRatios ratios;
    ratios.volume = static_cast<long long>(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) {
        ratios.area += info[i].valence();
        long long inside = 0;
        for (const VertexId& w : info[i].neighbors) inside += index.count(w);
        ratios.edge_boundary += info[i].valence() - inside;
    }
    return ratios;
}

std::vector<double> ray_piece_quotients(const LazyGraph& g, int max_len) {
    const GraphFamily* family = &g.family();
    if (family->type != GraphFamily::Type::GraftRay) {
        throw std::invalid_argument("ray pieces require a grafted graph");
    }
    std::vector<double> quotients;
    std::vector<VertexId> piece;
    for (int k = 1; k <= max_len; ++k) {
        piece.push_back(family->ray_prefix + "." + std::to_string(k));
        quotients.push_back(oracle_cheeger_ratios(g, piece).volume_ratio());
    }
    return quotients;
}

GeometricBounds geometric_bounds(const ValenceProfile& profile, const Ball& ball) {
    GeometricBounds bounds;
    bool first = true;
    for (int v = 0; v < ball.size(); ++v) {
        const auto& d = profile.per_vertex[v];
        const double ratio =
            static_cast<double>(d.outward - d.inward) / static_cast<double>(ball.valence(v));
        if (first || ratio < bounds.c) bounds.c = ratio;
        if (first || ball.valence(v) < bounds.min_valence) bounds.min_valence = ball.valence(v);
        first = false;
    }
    bounds.applicable = bounds.c > 0;
    if (bounds.applicable) {
        bounds.bound_bd = bounds.c * bounds.c / 2.0;
        bounds.bound_full = bounds.bound_bd * static_cast<double>(bounds.min_valence);
    }
    return bounds;
}

HarmonicWitnessTrace positive_harmonic_witness(const LazyGraph& g, double lambda,
                                               const std::vector<int>& radii,
                                               std::size_t capacity) {
    HarmonicWitnessTrace trace;
    bool first = true;
    for (int radius : radii) {
        auto ball = std::make_shared<Ball>(materialize_ball(g, radius, capacity));
        const ReducedLaplacian L = assemble_reduced(*ball);
        const double lambda0 = smallest_eigenvalue(L.matrix);
        if (!(lambda < lambda0)) {
            throw std::invalid_argument("lambda >= lambda_0^r at radius " + std::to_string(radius));
        }

        // v = (Delta_r - lambda I)^{-1}(lambda 1_int) + 1, normalized at the root.
        Eigen::MatrixXd A = L.matrix;
        A.diagonal().array() -= lambda;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success) throw std::runtime_error("witness system not SPD");
        const Eigen::VectorXd w =
            llt.solve(Eigen::VectorXd::Constant(L.dimension(), lambda));
        VertexFunction v = VertexFunction::Ones(ball->size());
        for (int i = 0; i < L.dimension(); ++i) v[L.interior[i]] += w[i];
        if (!(v[ball->root_index()] > 0)) throw std::runtime_error("witness vanished at the root");
        v /= v[ball->root_index()];

        // Product upper bound along BFS parents: u(x) <= prod_{j<d(x)} (M(j)-lambda).
        const ValenceProfile profile = valence_profile(*ball);
        std::vector<double> bound(static_cast<std::size_t>(ball->radius()) + 1, 1.0);
        for (int r = 1; r <= ball->radius(); ++r) {
            bound[r] = bound[r - 1] *
                       (static_cast<double>(profile.per_sphere[r - 1].max_valence) - lambda);
        }
        for (int x = 0; x < ball->size(); ++x) {
            trace.max_bound_violation =
                std::max(trace.max_bound_violation, v[x] - bound[ball->distance(x)]);
            if (ball->is_interior(x)) {
                if (first || v[x] < trace.min_interior_value) trace.min_interior_value = v[x];
                first = false;
            }
        }

        if (!trace.witnesses.empty()) {
            const VertexFunction& prev = trace.witnesses.back();
            double change = 0;
            for (int x = 0; x < static_cast<int>(prev.size()); ++x) {
                change = std::max(change, std::abs(v[x] - prev[x]));
            }
            trace.stabilization.push_back(change);
        }
        trace.radii.push_back(radius);
        trace.balls.push_back(ball);
        trace.witnesses.push_back(std::move(v));
    }
    return trace;
}

namespace {

/// lambda_0 over the annulus of a model tree via the radial subspace:
/// tridiagonal over spheres inner+1..outer-1 with Dirichlet ends.
double model_annulus_lambda0(const BranchingLaw& law, int inner, int outer) {
    const int n = outer - 1 - inner;
    if (n < 1) throw std::invalid_argument("empty annulus");
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int j = inner + 1 + i;
        S(i, i) = static_cast<double>(law.value_at(j) + 1);
        if (i + 1 < n) {
            const double coupling = std::sqrt(static_cast<double>(law.value_at(j)));
            S(i, i + 1) = -coupling;
            S(i + 1, i) = -coupling;
        }
    }
    return smallest_eigenvalue(S);
}

double model_annulus_bound(const BranchingLaw& law, int inner, int outer) {
    double c = 1;
    long long min_valence = 0;
    for (int j = inner + 1; j <= outer - 1; ++j) {
        const long long n = law.value_at(j);
        c = std::min(c, static_cast<double>(n - 1) / static_cast<double>(n + 1));
        min_valence = min_valence == 0 ? n + 1 : std::min(min_valence, n + 1);
    }
    return c > 0 ? c * c * static_cast<double>(min_valence) / 2.0 : 0.0;
}

}  // namespace

ExteriorTrace exterior_lambda0_trace(const LazyGraph& g, const std::vector<int>& inner_radii,
                                     int outer_radius, std::size_t capacity) {
    ExteriorTrace trace;
    trace.outer_radius = outer_radius;
    for (int inner : inner_radii) {
        if (inner < 0 || inner >= outer_radius - 1) {
            throw std::invalid_argument("empty annulus: inner radius " + std::to_string(inner) +
                                        " against outer radius " + std::to_string(outer_radius));
        }
    }

    if (g.family().is_model_tree()) {
        const BranchingLaw& law = *g.family().law;
        for (int inner : inner_radii) {
            trace.inner_radii.push_back(inner);
            trace.lambda0.push_back(model_annulus_lambda0(law, inner, outer_radius));
            trace.bound.push_back(model_annulus_bound(law, inner, outer_radius));
        }
        return trace;
    }

    const Ball ball = materialize_ball(g, outer_radius, capacity);
    const ValenceProfile profile = valence_profile(ball);
    for (int inner : inner_radii) {
        std::vector<int> region;
        std::vector<int> row(ball.size(), -1);
        for (int v : ball.interior()) {
            if (ball.distance(v) > inner) {
                row[v] = static_cast<int>(region.size());
                region.push_back(v);
            }
        }
        if (region.empty()) throw std::invalid_argument("empty annulus interior");

        // Connected components of the annulus; lambda_0 is the minimum over
        // the diagonal blocks.
        std::vector<int> component(region.size(), -1);
        int component_count = 0;
        for (std::size_t seed = 0; seed < region.size(); ++seed) {
            if (component[seed] >= 0) continue;
            std::deque<int> queue{static_cast<int>(seed)};
            component[seed] = component_count;
            while (!queue.empty()) {
                const int i = queue.front();
                queue.pop_front();
                for (int w : ball.neighbors_in_ball(region[i])) {
                    const int j = row[w];
                    if (j >= 0 && component[j] < 0) {
                        component[j] = component_count;
                        queue.push_back(j);
                    }
                }
            }
            ++component_count;
        }

        double lambda0 = 0;
        bool first = true;
        for (int c = 0; c < component_count; ++c) {
            std::vector<int> members;
            std::vector<int> local(ball.size(), -1);
            for (std::size_t i = 0; i < region.size(); ++i) {
                if (component[i] == c) {
                    local[region[i]] = static_cast<int>(members.size());
                    members.push_back(region[i]);
                }
            }
            const int n = static_cast<int>(members.size());
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                A(i, i) = static_cast<double>(ball.valence(members[i]));
                for (int w : ball.neighbors_in_ball(members[i])) {
                    if (local[w] >= 0) A(i, local[w]) = -1.0;
                }
            }
            const double value = smallest_eigenvalue(A);
            if (first || value < lambda0) lambda0 = value;
            first = false;
        }

        double c_min = 1;
        long long min_valence = 0;
        for (int v : region) {
            const auto& d = profile.per_vertex[v];
            c_min = std::min(c_min, static_cast<double>(d.outward - d.inward) /
                                        static_cast<double>(ball.valence(v)));
            min_valence =
                min_valence == 0 ? ball.valence(v) : std::min(min_valence, ball.valence(v));
        }

        trace.inner_radii.push_back(inner);
        trace.lambda0.push_back(lambda0);
        trace.bound.push_back(c_min > 0 ? c_min * c_min * static_cast<double>(min_valence) / 2.0
                                        : 0.0);
    }
    return trace;
}

}  // namespace heatgraph
