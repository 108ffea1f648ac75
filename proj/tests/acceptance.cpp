// Acceptance suite: runs the twelve exit criteria end to end and prints
// one pass/fail line each.  Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "heatgraph/graph_io.hpp"
#include "heatgraph/kernel_compare.hpp"
#include "heatgraph/spectrum.hpp"
#include "test_graphs.hpp"

using namespace heatgraph;
using namespace heatgraph::testing;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& label, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.3g", v);
    return buffer;
}

std::vector<int> range(int lo, int hi) {
    std::vector<int> radii;
    for (int r = lo; r <= hi; ++r) radii.push_back(r);
    return radii;
}

struct NamedBall {
    std::string name;
    std::shared_ptr<const Ball> ball;
};

std::vector<NamedBall> kernel_test_balls() {
    return {
        {"ray r10", std::make_shared<Ball>(materialize_ball(ray(), 10))},
        {"P5 (line r2)", std::make_shared<Ball>(materialize_ball(line(), 2))},
        {"binary r6", std::make_shared<Ball>(materialize_ball(binary_tree(), 6))},
        {"ternary r5", std::make_shared<Ball>(materialize_ball(ternary_tree(), 5))},
        {"grafted r5", std::make_shared<Ball>(materialize_ball(grafted_graph(), 5))},
    };
}

// --- 1: heat-kernel property suite -----------------------------------------

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0;
    std::vector<NamedBall> balls = kernel_test_balls();
    balls[4] = {"grafted r6", std::make_shared<Ball>(materialize_ball(grafted_graph(), 6))};
    for (const auto& [name, ball] : balls) {
        const HeatKernelBall kernel(ball);
        const KernelPropertyReport r = verify_kernel_properties(kernel, {0.1, 1.0, 10.0});
        worst = std::max({worst, r.symmetry, r.boundary, r.semigroup, r.positivity,
                          r.heat_equation, r.initial});
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(1, worst <= 1e-9 && seconds < 30.0, "heat-kernel property suite on 5 balls",
           "max residual " + fmt(worst) + ", " + fmt(seconds) + " s");
}

// --- 2: exhaustion monotonicity ---------------------------------------------

void criterion_2() {
    double violation = 0;
    for (const auto& [g, radius] :
         {std::pair{ray(), 6}, {line(), 5}, {binary_tree(), 4}, {ternary_tree(), 4},
          {grafted_graph(), 4}}) {
        const auto small = std::make_shared<Ball>(materialize_ball(g, radius));
        const auto big = std::make_shared<Ball>(materialize_ball(g, radius + 1));
        const HeatKernelBall ks(small);
        const HeatKernelBall kb(big);
        for (double t : {0.1, 1.0, 5.0}) {
            for (int x = 0; x < small->size(); ++x) {
                for (int y = x; y < small->size(); ++y) {
                    violation = std::max(violation, ks.value(x, y, t) - kb.value(x, y, t));
                }
            }
        }
    }
    report(2, violation <= 1e-12, "exhaustion monotonicity p_t^r <= p_t^{r+1}",
           "max violation " + fmt(violation));
}

// --- 3: eigendecomposition kernel vs power series ---------------------------

void criterion_3() {
    double gap = 0;
    for (const auto& [name, ball] : kernel_test_balls()) {
        const HeatKernelBall kernel(ball);
        for (double t : {0.1, 1.0, 5.0}) {
            gap = std::max(gap, (kernel.interior_matrix(t) - semigroup_series(kernel.reduced(), t))
                                    .cwiseAbs()
                                    .maxCoeff());
        }
    }
    report(3, gap <= 1e-9, "eigendecomposition kernel vs power-series semigroup",
           "max entrywise gap " + fmt(gap));
}

// --- 4: model-tree criterion ------------------------------------------------

void criterion_4() {
    bool pass = true;
    std::string detail;

    pass &= model_tree_verdict(BranchingLaw::constant(1, 1)) == Verdict::Complete;
    pass &= model_tree_verdict(BranchingLaw::constant(2, 3)) == Verdict::Complete;
    pass &= model_tree_verdict(BranchingLaw::affine(1, 1, 2)) == Verdict::Complete;
    pass &= model_tree_verdict(BranchingLaw::exponential(2, 2)) == Verdict::Incomplete;
    pass &= model_tree_verdict(BranchingLaw::polynomial({4, 4, 1}, 4)) == Verdict::Incomplete;
    if (!pass) detail = "verdict table broken; ";

    // Doubling law: the radial harmonic function stays inside the product
    // sandwich and below the convergent upper partial products up to R = 40.
    const BranchingLaw doubling = BranchingLaw::exponential(2, 2);
    const RadialFunction v = radial_harmonic(doubling, -1.0, 1.0, 41);
    const ProductBounds bounds = product_bounds(doubling, -1.0, 40);
    bool sandwich = bounds.upper[40] < 1e3;  // the upper products stay bounded
    for (int r = 1; r <= 40; ++r) {
        sandwich &= bounds.lower[r] < v.at(r + 1) && v.at(r + 1) < bounds.upper[r];
    }
    pass &= sandwich;
    if (!sandwich) detail += "doubling sandwich broken; ";

    // Constant 2: the lower product (3/2)^R certifies unboundedness by R=60.
    const ProductBounds constant2 = product_bounds(BranchingLaw::constant(2, 2), -1.0, 59);
    const RadialFunction w = radial_harmonic(BranchingLaw::constant(2, 2), -1.0, 1.0, 60);
    const bool unbounded = std::abs(constant2.lower[59] - std::pow(1.5, 60)) <
                               1e-12 * std::pow(1.5, 60) &&
                           constant2.lower[59] > 1e9 && w.at(60) > constant2.lower[58];
    pass &= unbounded;
    if (!unbounded) detail += "lower-product certificate broken; ";

    report(4, pass, "model-tree completeness criterion",
           detail.empty() ? "verdicts and product certificates check out" : detail);
}

// --- 5: constructive incompleteness diagnostic -------------------------------

void criterion_5() {
    // Monotone non-increasing everywhere.
    double monotonicity = 0;
    for (const auto& g : {ray(), line(), binary_tree(), ternary_tree(), doubling_tree(),
                          grafted_graph()}) {
        const DiagnosticTrace trace = incompleteness_diagnostic(g, -1.0, range(2, 12), {1e-30});
        for (std::size_t i = 1; i < trace.values.size(); ++i) {
            monotonicity = std::max(monotonicity, trace.deltas[i]);
        }
    }

    const DiagnosticTrace on_ray = incompleteness_diagnostic(ray(), -1.0, range(2, 40));
    const bool ray_decays = on_ray.values.back() < 1e-3;

    const DiagnosticTrace on_tree = incompleteness_diagnostic(doubling_tree(), -1.0, range(2, 40));
    const double baseline = 0.22409220656305781;  // frozen regression value
    const bool tree_stabilizes = on_tree.stabilized && on_tree.limit_estimate() > 0 &&
                                 std::abs(on_tree.limit_estimate() - baseline) <= 1e-10;

    report(5, monotonicity <= 1e-12 && ray_decays && tree_stabilizes,
           "Dirichlet lambda-limit diagnostic",
           "max delta " + fmt(monotonicity) + ", ray limit " + fmt(on_ray.values.back()) +
               ", doubling limit " + fmt(on_tree.limit_estimate()));
}

// --- 6: comparison theorems ---------------------------------------------------

void criterion_6() {
    const std::vector<double> t_grid{0.1, 0.5, 1.0, 2.0, 5.0};
    double min_margin = 0;
    bool pass = true;

    const Ball binary6 = materialize_ball(binary_tree(), 6);
    const CompareReport comp1 =
        compare_embedded(binary6, BranchingLaw::constant(3, 3), t_grid, CompareMode::ModelBelow);
    min_margin = std::min(min_margin, comp1.min_margin);

    const Ball fat = materialize_ball(explicit_binary_sample(5, true, false), 5);
    const CompareReport comp2 =
        compare_embedded(fat, BranchingLaw::constant(2, 3), t_grid, CompareMode::ModelAbove);
    min_margin = std::min(min_margin, comp2.min_margin);

    const Ball edged = materialize_ball(explicit_binary_sample(5, false, true), 5);
    const CompareReport generalized =
        compare_generalized_graph(edged, BranchingLaw::constant(2, 3), t_grid);
    min_margin = std::min(min_margin, generalized.min_margin);
    pass &= min_margin >= -1e-9;

    double identity_margin = 0;
    for (CompareMode mode : {CompareMode::ModelBelow, CompareMode::ModelAbove}) {
        identity_margin = std::max(
            identity_margin,
            compare_embedded(binary6, BranchingLaw::constant(2, 3), t_grid, mode).max_abs_margin);
    }
    pass &= identity_margin <= 1e-10;

    report(6, pass, "heat-kernel comparison theorems",
           "min margin " + fmt(min_margin) + ", identity margin " + fmt(identity_margin));
}

// --- 7: radial structure -------------------------------------------------------

void criterion_7() {
    double spread = 0;
    double monotonicity = 0;
    for (const auto& [g, radius] : {std::pair{binary_tree(), 6}, {ternary_tree(), 5}}) {
        const RadialKernel kernel =
            radial_kernel(materialize_ball(g, radius), {0.1, 0.5, 1.0, 2.0, 5.0});
        spread = std::max(spread, kernel.max_spread());
        for (const auto& values : kernel.values) {
            for (std::size_t r = 0; r + 1 < values.size(); ++r) {
                monotonicity = std::max(monotonicity, values[r + 1] - values[r]);
            }
        }
    }
    report(7, spread <= 1e-10 && monotonicity <= 1e-10, "radial kernel structure",
           "sphere spread " + fmt(spread) + ", r-monotonicity violation " + fmt(monotonicity));
}

// --- 8: spectral bounds ---------------------------------------------------------

void criterion_8() {
    const Lambda0Trace trace = lambda0_exhaustion(binary_tree(), range(2, 10));
    bool pass = trace.values.size() == 9;
    double worst_bound = 1;
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        worst_bound = std::min(worst_bound, trace.values[i] - (1.0 / 6.0 - 1e-9));
        if (i) pass &= trace.values[i] <= trace.values[i - 1] + 1e-12;
    }
    pass &= worst_bound >= 0;
    const double star_gap = std::abs(trace.values[0] - (3.0 - std::sqrt(3.0)));
    pass &= star_gap <= 1e-10;
    report(8, pass, "lambda0 exhaustion against the geometric bound 1/6",
           "min slack " + fmt(worst_bound) + ", |lambda0^2 - (3-sqrt3)| = " + fmt(star_gap));
}

// --- 9: incomplete graph with lambda0 = 0 ---------------------------------------

void criterion_9() {
    const LazyGraph g = grafted_graph();
    const std::vector<double> quotients = ray_piece_quotients(g, 50);
    bool pass = quotients.size() == 50;
    for (int k = 1; k <= 50 && pass; ++k) {
        pass &= std::abs(quotients[k - 1] - 2.0 / k) <= 1e-12;
    }
    pass &= quotients.back() <= 0.04 + 1e-12;

    const DiagnosisReport diagnosis = diagnose(g, -1.0, range(2, 30));
    pass &= diagnosis.verdict == Verdict::Incomplete;

    report(9, pass, "incompleteness with vanishing lambda0 on the grafted graph",
           "Rayleigh upper bounds down to " + fmt(quotients.back()) + ", verdict " +
               to_string(diagnosis.verdict));
}

// --- 10: bounded Laplacian -------------------------------------------------------

void criterion_10() {
    double norm_excess = 0;
    for (const auto& [name, ball] : kernel_test_balls()) {
        norm_excess = std::max(norm_excess, bounded_laplacian_norm_check(*ball) - 2.0);
    }
    const LazyGraph closed_p3 = build_explicit_graph({{"0", "1"}, {"1", "2"}}, "1");
    norm_excess =
        std::max(norm_excess, bounded_laplacian_norm_check(materialize_ball(closed_p3, 2)) - 2.0);

    double chain_margin = 0;
    for (const auto& [g, radius] :
         {std::pair{line(), 2}, {binary_tree(), 4}, {grafted_graph(), 4}}) {
        const GrowthChainReport chain =
            bounded_laplacian_growth_check(materialize_ball(g, radius), -1.0);
        chain_margin = std::min(chain_margin, chain.min_margin);
    }

    report(10, norm_excess <= 1e-10 && chain_margin >= -1e-10,
           "bounded Laplacian norm and growth chains",
           "norm excess " + fmt(norm_excess) + ", chain margin " + fmt(chain_margin));
}

// --- 11: exterior lambda0 trace ---------------------------------------------------

void criterion_11() {
    // m(x) = r + 3 on sphere r: annulus lambda0 grows strictly.
    const LazyGraph increasing = build_model_tree(BranchingLaw::affine(1, 2, 3));
    const ExteriorTrace growing = exterior_lambda0_trace(increasing, range(1, 5), 8);
    bool strictly_increasing = true;
    double bound_slack = 1e9;
    for (std::size_t i = 0; i < growing.lambda0.size(); ++i) {
        if (i) strictly_increasing &= growing.lambda0[i] > growing.lambda0[i - 1];
        bound_slack = std::min(bound_slack, growing.lambda0[i] - (growing.bound[i] - 1e-9));
    }

    // The 3-regular tree in a wide annulus: essentially flat.
    const ExteriorTrace flat = exterior_lambda0_trace(binary_tree(), range(1, 5), 30);
    double max_drift = 0;
    for (double value : flat.lambda0) {
        max_drift = std::max(max_drift, std::abs(value / flat.lambda0.front() - 1.0));
        bound_slack = std::min(bound_slack, value - (1.0 / 6.0 - 1e-9));
    }

    report(11, strictly_increasing && max_drift < 0.10 && bound_slack >= 0,
           "exterior-domain lambda0: growth vs stagnation",
           std::string(strictly_increasing ? "strictly increasing" : "NOT increasing") +
               ", 3-regular drift " + fmt(max_drift));
}

// --- 12: Green identity -------------------------------------------------------------

void criterion_12() {
    std::mt19937_64 rng(883);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    double excess = 0;
    for (const auto& [name, ball] : kernel_test_balls()) {
        long long max_valence = 1;
        for (int v = 0; v < ball->size(); ++v) {
            max_valence = std::max(max_valence, ball->valence(v));
        }
        for (int trial = 0; trial < 1000; ++trial) {
            VertexFunction f = VertexFunction::Zero(ball->size());
            VertexFunction h = VertexFunction::Zero(ball->size());
            for (int v : ball->interior()) {
                f[v] = uniform(rng);
                h[v] = uniform(rng);
            }
            const double bound = 1e-12 * f.norm() * h.norm() * static_cast<double>(max_valence);
            excess = std::max(excess, green_residual(*ball, f, h) - bound);
        }
    }
    report(12, excess <= 0, "Green identity on 1000 random interior pairs per ball",
           "max residual excess over bound " + fmt(excess));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    std::printf("%s: %d of 12 criteria failed\n", failures == 0 ? "OK" : "FAILED", failures);
    return failures;
}
