#include "heatgraph/completeness.hpp"

#include <algorithm>
#include <cmath>

namespace heatgraph {

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Complete: return "Complete";
        case Verdict::Incomplete: return "Incomplete";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

void require_negative_lambda(double lambda) {
    if (!(lambda < 0)) throw std::invalid_argument("lambda must be < 0");
}

/// Solves A x = b for symmetric positive definite A and verifies the
/// residual; the systems here are (L - lambda I)-type matrices which are
/// positive definite for lambda < 0.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("linear system is not positive definite");
    }
    const Eigen::VectorXd x = llt.solve(b);
    const double residual = (A * x - b).cwiseAbs().maxCoeff();
    const double scale = 1.0 + A.cwiseAbs().rowwise().sum().maxCoeff() * x.cwiseAbs().maxCoeff();
    if (residual > 1e-10 * scale) {
        throw std::runtime_error("linear solver residual " + std::to_string(residual) +
                                 " exceeds tolerance");
    }
    return x;
}

}  // namespace

RadialFunction radial_harmonic(const BranchingLaw& law, double lambda, double v0, int R) {
    require_negative_lambda(lambda);
    if (!(v0 > 0)) throw std::invalid_argument("v0 must be > 0");
    if (R < 0) throw std::invalid_argument("R must be >= 0");

    RadialFunction v;
    v.lambda = lambda;
    v.law = law;
    v.values.resize(static_cast<std::size_t>(R) + 1);
    v.values[0] = v0;
    if (R >= 1) {
        v.values[1] = (1.0 - lambda / static_cast<double>(law.root_valence())) * v0;
    }
    for (int r = 1; r < R; ++r) {
        const double n = static_cast<double>(law.value_at(r));
        v.values[r + 1] = ((n + 1.0 - lambda) * v.values[r] - v.values[r - 1]) / n;
    }
    return v;
}

ProductBounds product_bounds(const BranchingLaw& law, double lambda, int R) {
    require_negative_lambda(lambda);
    ProductBounds bounds;
    double lower = 1.0;
    double upper = 1.0;
    for (int i = 0; i <= R; ++i) {
        const double n = static_cast<double>(law.value_at(i));
        lower *= 1.0 - lambda / n;
        upper *= 1.0 + (1.0 - lambda) / n;
        bounds.lower.push_back(lower);
        bounds.upper.push_back(upper);
    }
    return bounds;
}

RadialFunction sphere_average(const Ball& ball, const VertexFunction& u) {
    if (!ball.is_model_tree_ball()) {
        throw std::invalid_argument("sphere averaging requires a model-tree ball");
    }
    if (u.size() != ball.size()) throw std::invalid_argument("function size does not match ball");

    RadialFunction v;
    v.law = ball.model_law();
    v.values.resize(static_cast<std::size_t>(ball.radius()) + 1);
    for (int r = 0; r <= ball.radius(); ++r) {
        const auto& sphere = ball.spheres()[r];
        double sum = 0;
        for (int x : sphere) sum += u[x];
        v.values[r] = sum / static_cast<double>(sphere.size());
    }
    return v;
}

VertexFunction dirichlet_lambda_boundary_one(const Ball& ball, double lambda) {
    require_negative_lambda(lambda);
    if (static_cast<int>(ball.interior().size()) == ball.size()) {
        throw std::invalid_argument("ball has no boundary");
    }
    const ReducedLaplacian L = assemble_reduced(ball);
    const int n = L.dimension();

    // v = w + 1 with w vanishing on the boundary: (L - lambda I) w = lambda 1.
    Eigen::MatrixXd A = L.matrix;
    A.diagonal().array() -= lambda;
    const Eigen::VectorXd w = solve_spd(A, Eigen::VectorXd::Constant(n, lambda));

    VertexFunction v = VertexFunction::Ones(ball.size());
    for (int i = 0; i < n; ++i) v[L.interior[i]] += w[i];
    return v;
}

VertexFunction rooted_lambda_solution(const Ball& ball, double lambda) {
    require_negative_lambda(lambda);
    if (!ball.is_interior(ball.root_index())) {
        throw std::invalid_argument("the root must be an interior vertex");
    }

    std::vector<int> unknowns;
    std::vector<int> row(ball.size(), -1);
    for (int v : ball.interior()) {
        if (v != ball.root_index()) {
            row[v] = static_cast<int>(unknowns.size());
            unknowns.push_back(v);
        }
    }

    VertexFunction v = VertexFunction::Zero(ball.size());
    v[ball.root_index()] = 1.0;
    if (unknowns.empty()) return v;

    const int n = static_cast<int>(unknowns.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const int x = unknowns[i];
        A(i, i) = static_cast<double>(ball.valence(x)) - lambda;
        for (int y : ball.neighbors_in_ball(x)) {
            if (y == ball.root_index()) {
                b[i] += 1.0;  // v(root) = 1 moved to the right-hand side
            } else if (row[y] >= 0) {
                A(i, row[y]) = -1.0;
            }
        }
    }
    const Eigen::VectorXd solution = solve_spd(A, b);
    for (int i = 0; i < n; ++i) v[unknowns[i]] = solution[i];
    return v;
}

Verdict model_tree_verdict(const BranchingLaw& law) {
    switch (law.reciprocal_sum_class()) {
        case SeriesClass::Divergent: return Verdict::Complete;
        case SeriesClass::Convergent: return Verdict::Incomplete;
        case SeriesClass::Unknown: return Verdict::Inconclusive;
    }
    return Verdict::Inconclusive;
}

namespace {

/// Walks a graft chain down to its base; returns the model law when the
/// base is a model tree.
const BranchingLaw* base_model_law(const GraphFamily& family) {
    const GraphFamily* f = &family;
    while (f->type == GraphFamily::Type::GraftRay) f = f->base.get();
    return f->type == GraphFamily::Type::ModelTree && f->law ? &*f->law : nullptr;
}

bool in_branch(const VertexId& vertex, const VertexId& branch_root) {
    return vertex == branch_root ||
           (vertex.size() > branch_root.size() &&
            vertex.compare(0, branch_root.size(), branch_root) == 0 &&
            vertex[branch_root.size()] == '.');
}

std::string series_evidence(const BranchingLaw& law, SeriesClass cls) {
    const char* name = cls == SeriesClass::Divergent   ? "diverges"
                       : cls == SeriesClass::Convergent ? "converges"
                                                        : "is undecided (no declared tail)";
    return "series sum 1/" + law.describe() + " " + name;
}

}  // namespace

CriterionResult max_valence_criterion(const LazyGraph& g) {
    CriterionResult result;
    result.name = "max-valence";
    const BranchingLaw* law = base_model_law(g.family());
    if (law == nullptr) {
        result.evidence = "no symbolic valence law for this graph family";
        return result;
    }
    // M(r) = n(r) + 1 on the model part; grafted rays only add valence-2
    // vertices and one extra edge at the attach vertex, which cannot
    // change the series class.
    const SeriesClass cls = law->reciprocal_sum_class();
    result.evidence = series_evidence(*law, cls);
    if (cls == SeriesClass::Divergent) {
        result.applicable = true;
        result.conclusive = true;
        result.verdict = Verdict::Complete;
    } else if (cls == SeriesClass::Convergent) {
        result.evidence += "; the criterion is one-directional, no verdict";
    }
    return result;
}

CriterionResult min_valence_direction_criterion(const LazyGraph& g, const VertexId& direction) {
    if (!g.family().known_tree) {
        throw std::invalid_argument("the directional valence criterion requires a tree");
    }
    CriterionResult result;
    result.name = "min-direction";

    const NeighborInfo root_info = g.neighbors(g.root());
    if (std::find(root_info.neighbors.begin(), root_info.neighbors.end(), direction) ==
        root_info.neighbors.end()) {
        throw std::invalid_argument("direction " + direction + " is not a neighbor of the root");
    }

    const BranchingLaw* law = base_model_law(g.family());
    if (law == nullptr) {
        result.evidence = "no symbolic valence law for this graph family";
        return result;
    }

    // The branch through a model-tree child has valence n(r)+1 on sphere r,
    // unless a grafted ray lies inside it, which caps the minimum at 2 and
    // makes the directional series diverge.
    bool ray_direction = false;
    const GraphFamily* f = &g.family();
    while (f->type == GraphFamily::Type::GraftRay) {
        if (direction.compare(0, f->ray_prefix.size() + 1, f->ray_prefix + ".") == 0 ||
            in_branch(f->attach_at, direction)) {
            ray_direction = true;
            break;
        }
        f = f->base.get();
    }

    if (ray_direction) {
        result.evidence = "direction " + direction +
                          ": the branch contains an infinite ray, so sum 1/underline_m(r) "
                          "diverges; the criterion is one-directional, no verdict";
        return result;
    }

    const SeriesClass cls = law->reciprocal_sum_class();
    result.evidence = "direction " + direction + ": " + series_evidence(*law, cls);
    if (cls == SeriesClass::Convergent) {
        result.applicable = true;
        result.conclusive = true;
        result.verdict = Verdict::Incomplete;
    } else if (cls == SeriesClass::Divergent) {
        result.evidence += "; the criterion is one-directional, no verdict";
    }
    return result;
}

namespace {

/// Solves a small dense linear system with a residual check; used for the
/// sphere-symmetric reductions whose matrices are tridiagonal-like and
/// strictly diagonally dominant for lambda < 0.
Eigen::VectorXd solve_dense(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const Eigen::VectorXd x = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(b);
    const double residual = (A * x - b).cwiseAbs().maxCoeff();
    const double scale = 1.0 + A.cwiseAbs().rowwise().sum().maxCoeff() * x.cwiseAbs().maxCoeff();
    if (residual > 1e-10 * scale) throw std::runtime_error("radial solver residual too large");
    return x;
}

/// Root value of the Dirichlet lambda-solution with boundary value 1 on a
/// model-tree ball, computed in radial coordinates.  The boundary data and
/// the operator are sphere-symmetric, so this agrees exactly with the
/// full-ball solve while only needing a radius-sized system.
double model_dirichlet_root_value(const BranchingLaw& law, double lambda, int radius) {
    const int n = radius;  // unknowns v(0..radius-1)
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    A(0, 0) = static_cast<double>(law.root_valence()) - lambda;
    if (n > 1) A(0, 1) = -static_cast<double>(law.root_valence());
    for (int j = 1; j < n; ++j) {
        const double nj = static_cast<double>(law.value_at(j));
        A(j, j - 1) = -1.0;
        A(j, j) = nj + 1.0 - lambda;
        if (j + 1 < n) A(j, j + 1) = -nj;
    }
    const double last = static_cast<double>(n == 1 ? law.root_valence() : law.value_at(n - 1));
    b[n - 1] = last;  // v(radius) = 1 moved to the right-hand side
    return solve_dense(A, b)[0];
}

/// Same reduction for a model tree with a ray grafted at the root: the
/// unknowns are the root value, the tree sphere values and the ray values.
double grafted_dirichlet_root_value(const BranchingLaw& law, double lambda, int radius) {
    const int r = radius;
    const int n = 2 * r - 1;  // v0, tree(1..r-1), ray(1..r-1)
    auto tree = [r](int j) { return j; };          // j = 1..r-1
    auto ray = [r](int k) { return r - 1 + k; };   // k = 1..r-1
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

    const double n0 = static_cast<double>(law.root_valence());
    A(0, 0) = n0 + 1.0 - lambda;
    if (r > 1) {
        A(0, tree(1)) = -n0;
        A(0, ray(1)) = -1.0;
    } else {
        b[0] = n0 + 1.0;  // both boundary neighbors carry the value 1
    }
    for (int j = 1; j <= r - 1; ++j) {
        const double nj = static_cast<double>(law.value_at(j));
        A(tree(j), j == 1 ? 0 : tree(j - 1)) = -1.0;
        A(tree(j), tree(j)) = nj + 1.0 - lambda;
        if (j + 1 <= r - 1) {
            A(tree(j), tree(j + 1)) = -nj;
        } else {
            b[tree(j)] += nj;
        }
        A(ray(j), j == 1 ? 0 : ray(j - 1)) = -1.0;
        A(ray(j), ray(j)) = 2.0 - lambda;
        if (j + 1 <= r - 1) {
            A(ray(j), ray(j + 1)) = -1.0;
        } else {
            b[ray(j)] += 1.0;
        }
    }
    return solve_dense(A, b)[0];
}

/// The sphere-symmetric reduction applies to pure model trees and to a
/// model tree with a single ray grafted at its root.
enum class RadialRoute { None, ModelTree, GraftedAtRoot };

RadialRoute radial_route(const GraphFamily& family) {
    if (family.is_model_tree()) return RadialRoute::ModelTree;
    if (family.type == GraphFamily::Type::GraftRay && family.base &&
        family.base->is_model_tree() && family.attach_at == "x0") {
        return RadialRoute::GraftedAtRoot;
    }
    return RadialRoute::None;
}

}  // namespace

DiagnosticTrace incompleteness_diagnostic(const LazyGraph& g, double lambda,
                                          const std::vector<int>& radii,
                                          const DiagnosticOptions& options) {
    require_negative_lambda(lambda);
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (radii[i] <= radii[i - 1]) {
            throw std::invalid_argument("radius schedule must be strictly increasing");
        }
    }
    const RadialRoute route = radial_route(g.family());
    const BranchingLaw* law = nullptr;
    if (route == RadialRoute::ModelTree) {
        law = &*g.family().law;
    } else if (route == RadialRoute::GraftedAtRoot) {
        law = &*g.family().base->law;
    }

    DiagnosticTrace trace;
    int stable = 0;
    for (int radius : radii) {
        double value = 0;
        try {
            if (route == RadialRoute::ModelTree) {
                value = model_dirichlet_root_value(*law, lambda, radius);
            } else if (route == RadialRoute::GraftedAtRoot) {
                value = grafted_dirichlet_root_value(*law, lambda, radius);
            } else {
                const Ball ball = materialize_ball(g, radius, options.capacity);
                if (static_cast<int>(ball.interior().size()) == ball.size()) break;
                value = dirichlet_lambda_boundary_one(ball, lambda)[ball.root_index()];
            }
        } catch (const CapacityError&) {
            trace.capacity_hit = true;
            break;
        } catch (const std::out_of_range&) {
            trace.capacity_hit = true;  // branching law undefined past its prefix
            break;
        }
        trace.deltas.push_back(trace.values.empty() ? 0.0 : value - trace.values.back());
        trace.values.push_back(value);
        trace.radii.push_back(radius);
        if (trace.values.size() > 1 && std::abs(trace.deltas.back()) < options.tol) {
            if (++stable >= options.stable_steps) {
                trace.stabilized = true;
                break;
            }
        } else {
            stable = 0;
        }
    }
    return trace;
}

SubharmonicReport subharmonic_pushforward_check(const Ball& t_ball, const RadialFunction& v) {
    if (!v.law) throw std::invalid_argument("radial function carries no branching law");
    require_negative_lambda(v.lambda);
    if (v.max_radius() < t_ball.radius()) {
        throw std::invalid_argument("radial function is shorter than the ball radius");
    }

    const BranchingLaw& law = *v.law;
    const ValenceProfile profile = valence_profile(t_ball);
    if (law.root_valence() > t_ball.valence(t_ball.root_index())) {
        throw std::invalid_argument("model law violates n(0) <= m(root)");
    }
    for (int r = 1; r < t_ball.radius(); ++r) {
        if (law.value_at(r) > profile.per_sphere[r].min_valence - 1) {
            throw std::invalid_argument("model law violates n(r) <= underline_m(r) - 1 at r = " +
                                        std::to_string(r));
        }
    }

    SubharmonicReport report;
    report.excess.assign(t_ball.size(), 0.0);
    VertexFunction u(t_ball.size());
    for (int x = 0; x < t_ball.size(); ++x) u[x] = v.at(t_ball.distance(x));
    bool first = true;
    for (int x : t_ball.interior()) {
        const double excess = apply_laplacian(t_ball, u, x) - v.lambda * u[x];
        report.excess[x] = excess;
        if (first || excess > report.max_excess) report.max_excess = excess;
        first = false;
    }
    return report;
}

GrowthChainReport bounded_laplacian_growth_check(const Ball& ball, double lambda) {
    require_negative_lambda(lambda);
    if (static_cast<int>(ball.interior().size()) == ball.size()) {
        throw std::invalid_argument("ball has no boundary");
    }
    if (!ball.is_interior(ball.root_index())) {
        throw std::invalid_argument("the root must be an interior vertex");
    }

    // Delta_bd v = lambda v on the interior, v = 1 on the boundary; with
    // v = w + 1 this is ((1-lambda) D - A) w = lambda m over the interior.
    const ReducedLaplacian L = assemble_reduced(ball);
    const int n = L.dimension();
    Eigen::MatrixXd A = L.matrix;
    A.diagonal() += (-lambda) * L.valences;
    const Eigen::VectorXd w = solve_spd(A, lambda * L.valences);
    VertexFunction v = VertexFunction::Ones(ball.size());
    for (int i = 0; i < n; ++i) v[L.interior[i]] += w[i];

    GrowthChainReport report;
    int x = ball.root_index();
    report.path.push_back(x);
    report.values.push_back(v[x]);
    while (ball.is_interior(x) && report.path.size() <= static_cast<std::size_t>(ball.size())) {
        int best = -1;
        for (int y : ball.neighbors_in_ball(x)) {
            if (best < 0 || v[y] > v[best]) best = y;
        }
        if (best < 0) break;
        x = best;
        report.path.push_back(x);
        report.values.push_back(v[x]);
    }

    const double v0 = report.values.front();
    double factor = 1.0;
    report.min_margin = 0.0;
    for (std::size_t i = 0; i < report.values.size(); ++i) {
        const double margin = report.values[i] - factor * v0;
        if (i == 0 || margin < report.min_margin) report.min_margin = margin;
        factor *= 1.0 - lambda;
    }
    return report;
}

DiagnosisReport diagnose(const LazyGraph& g, double lambda, const std::vector<int>& radii,
                         const DiagnosticOptions& options) {
    require_negative_lambda(lambda);
    DiagnosisReport report;
    report.lambda = lambda;
    report.radii = radii;

    // Symbolic criteria.
    CriterionResult models;
    models.name = "models";
    if (g.family().is_model_tree()) {
        const Verdict verdict = model_tree_verdict(*g.family().law);
        models.evidence = series_evidence(*g.family().law, g.family().law->reciprocal_sum_class());
        if (verdict != Verdict::Inconclusive) {
            models.applicable = true;
            models.conclusive = true;
            models.verdict = verdict;
        }
    } else {
        models.evidence = "not a model tree";
    }
    report.criteria.push_back(models);
    report.criteria.push_back(max_valence_criterion(g));

    if (g.family().known_tree) {
        CriterionResult direction_result;
        direction_result.name = "min-direction";
        bool fired = false;
        for (const VertexId& direction : g.neighbors(g.root()).neighbors) {
            CriterionResult candidate = min_valence_direction_criterion(g, direction);
            if (candidate.applicable) {
                direction_result = candidate;
                fired = true;
                break;
            }
            if (direction_result.evidence.empty()) direction_result = candidate;
        }
        (void)fired;
        report.criteria.push_back(direction_result);
    } else {
        CriterionResult skipped;
        skipped.name = "min-direction";
        skipped.evidence = "requires a tree";
        report.criteria.push_back(skipped);
    }

    // Fuse the symbolic verdicts; a conflict would falsify the
    // implementation, so it is a hard error rather than a report state.
    bool any_complete = false;
    bool any_incomplete = false;
    for (const CriterionResult& criterion : report.criteria) {
        if (!criterion.applicable || !criterion.conclusive) continue;
        any_complete |= criterion.verdict == Verdict::Complete;
        any_incomplete |= criterion.verdict == Verdict::Incomplete;
    }
    if (any_complete && any_incomplete) {
        throw std::logic_error("conflicting symbolic completeness criteria");
    }

    // Numeric evidence: the Dirichlet lambda-limit at the root.
    DiagnosticTrace trace = incompleteness_diagnostic(g, lambda, radii, options);
    CriterionResult numeric;
    numeric.name = "dirichlet-limit";
    numeric.applicable = !trace.values.empty();
    if (trace.stabilized && trace.limit_estimate() >= options.positive_threshold) {
        numeric.verdict = Verdict::Incomplete;
        numeric.evidence = "v_r(root) stabilized at " + std::to_string(trace.limit_estimate()) +
                           " > 0 (supports incompleteness; not conclusive alone)";
    } else if (!trace.values.empty() && trace.limit_estimate() < options.positive_threshold) {
        numeric.evidence = "v_r(root) decayed to " + std::to_string(trace.limit_estimate()) +
                           " (supports completeness; never conclusive alone)";
    } else if (trace.capacity_hit) {
        numeric.evidence = "capacity exceeded before stabilization";
    } else {
        numeric.evidence = "no stabilization within the radius schedule";
    }
    report.criteria.push_back(numeric);
    report.trace = std::move(trace);

    if (any_complete) {
        report.verdict = Verdict::Complete;
    } else if (any_incomplete) {
        report.verdict = Verdict::Incomplete;
    } else if (numeric.verdict == Verdict::Incomplete) {
        // Symbolic criteria always override the numeric one; it only fills
        // an otherwise inconclusive fusion.
        report.verdict = Verdict::Incomplete;
    }
    return report;
}

}  // namespace heatgraph
