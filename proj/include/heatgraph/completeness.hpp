#pragma once

#include "heatgraph/heat.hpp"

namespace heatgraph {

enum class Verdict { Complete, Incomplete, Inconclusive };

std::string to_string(Verdict verdict);

/// A function depending only on the distance to the root, with values
/// v(0), ..., v(R).  When generated by the radial harmonic recurrence with
/// lambda < 0 and v(0) > 0 the values are positive and strictly
/// increasing.
struct RadialFunction {
    std::vector<double> values;
    double lambda = 0;
    std::optional<BranchingLaw> law;

    int max_radius() const { return static_cast<int>(values.size()) - 1; }
    double at(int r) const { return values.at(static_cast<std::size_t>(r)); }
};

/// Radial solution of Delta v = lambda v on a model tree:
///   v(1)   = (1 - lambda/n(0)) v(0),
///   v(r+1) = ((n(r) + 1 - lambda) v(r) - v(r-1)) / n(r).
RadialFunction radial_harmonic(const BranchingLaw& law, double lambda, double v0, int R);

/// Partial products bounding the radial harmonic solution per unit v(0):
///   lower[r] = prod_{i<=r} (1 - lambda/n(i))  <  v(r+1)/v(0)
///   upper[r] = prod_{i<=r} (1 + (1-lambda)/n(i)) > v(r+1)/v(0),
/// with equality on the lower side at r = 0 (the recurrence starts there).
struct ProductBounds {
    std::vector<double> lower;
    std::vector<double> upper;
};

ProductBounds product_bounds(const BranchingLaw& law, double lambda, int R);

/// Averages u over the spheres of a model-tree ball.  If u is
/// lambda-harmonic on the interior, the average satisfies the radial
/// lambda-harmonic relation.
RadialFunction sphere_average(const Ball& ball, const VertexFunction& u);

/// Unique solution of Delta v = lambda v on the interior with v = 1 on
/// the boundary, lambda < 0.  Satisfies 0 < v <= 1 and decreases
/// pointwise as the ball grows.
VertexFunction dirichlet_lambda_boundary_one(const Ball& ball, double lambda);

/// Unique solution of Delta v = lambda v on interior \ {root} with
/// v(root) = 1 and v = 0 on the boundary, lambda < 0.  Satisfies
/// 0 < v <= 1 on the interior and increases pointwise as the ball grows.
VertexFunction rooted_lambda_solution(const Ball& ball, double lambda);

/// A model tree is stochastically complete exactly when sum 1/n(r)
/// diverges; the class is decided symbolically from the law.
Verdict model_tree_verdict(const BranchingLaw& law);

struct CriterionResult {
    std::string name;
    bool applicable = false;
    Verdict verdict = Verdict::Inconclusive;
    bool conclusive = false;  // symbolic criteria are conclusive, the numeric one is not
    std::string evidence;
};

/// Divergent sum 1/M(r) implies completeness (one-directional); the max
/// valence law is derived symbolically from the graph family.
CriterionResult max_valence_criterion(const LazyGraph& g);

/// Convergent sum 1/underline_m(r) along one direction from the root
/// implies incompleteness for trees (one-directional).
CriterionResult min_valence_direction_criterion(const LazyGraph& g, const VertexId& direction);

/// Root values of the Dirichlet lambda-solutions with boundary value 1
/// over growing radii; the sequence is non-increasing and its limit is
/// positive exactly on stochastically incomplete graphs.
struct DiagnosticTrace {
    std::vector<int> radii;
    std::vector<double> values;
    std::vector<double> deltas;  // values[i] - values[i-1], deltas[0] = 0
    bool stabilized = false;
    bool capacity_hit = false;

    double limit_estimate() const { return values.empty() ? 0.0 : values.back(); }
};

struct DiagnosticOptions {
    double tol = 1e-8;
    std::size_t capacity = kDefaultBallCapacity;
    // Evidence heuristic: the limit supports incompleteness when it stays
    // above this threshold after `stable_steps` consecutive deltas < tol.
    double positive_threshold = 1e-4;
    int stable_steps = 3;
};

DiagnosticTrace incompleteness_diagnostic(const LazyGraph& g, double lambda,
                                          const std::vector<int>& radii,
                                          const DiagnosticOptions& options = {});

/// Checks that u(x) = v(r(x)) is lambda-subharmonic on the interior of a
/// tree ball whose branching dominates the model law: requires
/// n(r) <= underline_m(r) - 1 on the tested spheres and n(0) <= m(root).
struct SubharmonicReport {
    double max_excess = 0;             // max over interior of Delta u - lambda u
    std::vector<double> excess;        // per ball vertex; 0 for boundary vertices
};

SubharmonicReport subharmonic_pushforward_check(const Ball& t_ball, const RadialFunction& v);

/// Solves Delta_bd v = lambda v on the interior with v = 1 on the
/// boundary and follows the greedy neighbor chain from the root, along
/// which v(x_i) >= (1-lambda)^i v(x_0).
struct GrowthChainReport {
    std::vector<int> path;       // ball indices, starting at the root
    std::vector<double> values;  // v along the path
    double min_margin = 0;       // min_i v(x_i) - (1-lambda)^i v(x_0)
};

GrowthChainReport bounded_laplacian_growth_check(const Ball& ball, double lambda);

/// Fused completeness diagnosis: symbolic criteria first, the numeric
/// Dirichlet-limit trace as supporting evidence.  Conflicting symbolic
/// verdicts are an internal error (they would falsify the implementation).
struct DiagnosisReport {
    Verdict verdict = Verdict::Inconclusive;
    double lambda = -1;
    std::vector<int> radii;
    std::vector<CriterionResult> criteria;
    std::optional<DiagnosticTrace> trace;
};

DiagnosisReport diagnose(const LazyGraph& g, double lambda, const std::vector<int>& radii,
                         const DiagnosticOptions& options = {});

}  // namespace heatgraph
