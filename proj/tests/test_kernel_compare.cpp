#include <doctest.h>

#include <cmath>

#include "heatgraph/kernel_compare.hpp"
#include "test_graphs.hpp"

using namespace heatgraph;
using namespace heatgraph::testing;

TEST_CASE("the radial kernel starts as a delta and is constant on spheres") {
    const Ball ball = materialize_ball(binary_tree(), 4);
    const RadialKernel kernel = radial_kernel(ball, {0.0, 1.0});
    CHECK(kernel.values[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int r = 1; r <= 4; ++r) CHECK(std::abs(kernel.values[0][r]) <= 1e-12);
    CHECK(kernel.max_spread() <= 1e-10);

    CHECK_THROWS_AS(radial_kernel(materialize_ball(grafted_graph(), 3), {1.0}),
                    std::invalid_argument);
}

TEST_CASE("radial kernels have vanishing sphere spread at radius 6") {
    const Ball ball = materialize_ball(binary_tree(), 6);
    const RadialKernel kernel = radial_kernel(ball, {0.1, 0.5, 1.0, 2.0, 5.0});
    CHECK(kernel.max_spread() <= 1e-10);
}

TEST_CASE("radial kernels decrease in the distance and on the diagonal in time") {
    for (const auto& [g, radius] : {std::pair{binary_tree(), 6}, {ternary_tree(), 5}}) {
        const Ball ball = materialize_ball(g, radius);
        const RadialKernel kernel = radial_kernel(ball, {0.1, 0.5, 1.0, 2.0, 5.0});
        for (std::size_t ti = 0; ti < kernel.t_grid.size(); ++ti) {
            for (int r = 0; r < radius; ++r) {
                CHECK(kernel.values[ti][r] >= kernel.values[ti][r + 1] - 1e-10);
            }
            if (ti > 0) CHECK(kernel.values[ti][0] <= kernel.values[ti - 1][0] + 1e-12);
        }
    }
}

TEST_CASE("the tridiagonal route agrees with the full-ball radial kernel") {
    for (const auto& [g, radius] :
         {std::pair{binary_tree(), 5}, {ternary_tree(), 4}, {doubling_tree(), 4}}) {
        const Ball ball = materialize_ball(g, radius);
        for (double t : {0.2, 1.0, 3.0}) {
            const RadialKernel full = radial_kernel(ball, {t});
            const std::vector<double> fast = model_radial_kernel(*ball.model_law(), radius, t);
            for (int r = 0; r <= radius; ++r) {
                CHECK(std::abs(full.values[0][r] - fast[r]) <= 1e-10);
            }
        }
    }
}

TEST_CASE("the radial mass agrees with the kernel-ball mass at the root") {
    for (const auto& [g, radius] : {std::pair{binary_tree(), 4}, {ternary_tree(), 4}}) {
        const auto ball = std::make_shared<Ball>(materialize_ball(g, radius));
        const HeatKernelBall kernel(ball);
        for (double t : {0.0, 0.5, 2.0}) {
            CHECK(std::abs(kernel.mass(ball->root_index(), t) -
                           model_radial_mass(*ball->model_law(), radius, t)) <= 1e-10);
        }
    }
}

TEST_CASE("the identity embedding compares with margin zero") {
    const Ball ball = materialize_ball(binary_tree(), 6);
    const BranchingLaw law = BranchingLaw::constant(2, 3);
    for (CompareMode mode : {CompareMode::ModelBelow, CompareMode::ModelAbove}) {
        const CompareReport report = compare_embedded(ball, law, {0.1, 0.5, 1.0, 2.0, 5.0}, mode);
        CHECK(report.max_abs_margin <= 1e-10);
    }
}

TEST_CASE("a binary tree dominates the ternary model kernel") {
    // M(r) = 3 <= n(r)+1 = 4: the model kernel on the ternary law runs
    // below the binary-tree kernel.
    const Ball ball = materialize_ball(binary_tree(), 6);
    const CompareReport report = compare_embedded(ball, BranchingLaw::constant(3, 3),
                                                  {0.1, 0.5, 1.0, 2.0, 5.0},
                                                  CompareMode::ModelBelow);
    CHECK(report.min_margin >= -1e-9);
    bool strict = false;
    for (const auto& row : report.rows) {
        if (row.r == 0 && row.margin > 1e-6) strict = true;
    }
    CHECK(strict);
}

TEST_CASE("a fattened tree runs below the binary model kernel") {
    const Ball ball = materialize_ball(explicit_binary_sample(5, true, false), 5);
    const CompareReport report = compare_embedded(ball, BranchingLaw::constant(2, 3),
                                                  {0.1, 0.5, 1.0, 2.0, 5.0},
                                                  CompareMode::ModelAbove);
    CHECK(report.min_margin >= -1e-9);
}

TEST_CASE("comparison hypotheses are checked before computing") {
    const Ball ball = materialize_ball(binary_tree(), 4);
    // comp1 against a thinner model: M(r) = 3 > n(r)+1 = 2.
    CHECK_THROWS_AS(compare_embedded(ball, BranchingLaw::constant(1, 3), {1.0},
                                     CompareMode::ModelBelow),
                    std::invalid_argument);
    // comp2 against a fatter model: n(r) = 3 > underline_m(r)-1 = 2.
    CHECK_THROWS_AS(compare_embedded(ball, BranchingLaw::constant(3, 3), {1.0},
                                     CompareMode::ModelAbove),
                    std::invalid_argument);
    // Root mismatch: n(0) = 4 > m(root) = 3.
    CHECK_THROWS_AS(compare_embedded(ball, BranchingLaw::constant(2, 4), {1.0},
                                     CompareMode::ModelAbove),
                    std::invalid_argument);
}

TEST_CASE("the generalized comparison covers same-sphere edges") {
    // Tree input reduces to the comp2 behaviour.
    const Ball tree_ball = materialize_ball(binary_tree(), 5);
    const CompareReport tree_report =
        compare_generalized_graph(tree_ball, BranchingLaw::constant(2, 3), {0.5, 1.0});
    CHECK(tree_report.min_margin >= -1e-10);

    // One same-sphere edge at depth 2 keeps the inequality.
    const Ball ball = materialize_ball(explicit_binary_sample(5, false, true), 5);
    const CompareReport report = compare_generalized_graph(
        ball, BranchingLaw::constant(2, 3), {0.1, 0.5, 1.0, 2.0, 5.0});
    CHECK(report.min_margin >= -1e-9);
}

TEST_CASE("the generalized comparison rejects vertices with two parents") {
    const LazyGraph diamond = build_explicit_graph(
        {{"0", "1"}, {"0", "2"}, {"1", "3"}, {"2", "3"}, {"3", "4"}}, "0", {{"4", 2}});
    const Ball ball = materialize_ball(diamond, 3);
    CHECK_THROWS_AS(compare_generalized_graph(ball, BranchingLaw::constant(1, 2), {1.0}),
                    std::invalid_argument);
}
