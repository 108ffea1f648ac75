#include <doctest.h>

#include <random>

#include "heatgraph/heat.hpp"
#include "test_graphs.hpp"

using namespace heatgraph;
using namespace heatgraph::testing;

namespace {

LazyGraph closed_p3() { return build_explicit_graph({{"0", "1"}, {"1", "2"}}, "1"); }

VertexFunction random_interior(const Ball& ball, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    VertexFunction f = VertexFunction::Zero(ball.size());
    for (int v : ball.interior()) f[v] = uniform(rng);
    return f;
}

}  // namespace

TEST_CASE("the Laplacian annihilates constants and linear path profiles") {
    const Ball ball = materialize_ball(line(), 2);
    CHECK(apply_laplacian(ball, VertexFunction::Constant(ball.size(), 3.5), 0) == 0.0);

    // Path 0-1-2 with f = (0,1,2) evaluated at the middle vertex.
    const Ball path = materialize_ball(closed_p3(), 2);
    VertexFunction f(path.size());
    f[path.index_of("0")] = 0;
    f[path.index_of("1")] = 1;
    f[path.index_of("2")] = 2;
    CHECK(apply_laplacian(path, f, path.index_of("1")) == 0.0);
}

TEST_CASE("the Laplacian of a delta at a star center equals the valence") {
    const Ball ball = materialize_ball(binary_tree(), 1);
    VertexFunction f = VertexFunction::Zero(ball.size());
    f[ball.root_index()] = 1.0;
    CHECK(apply_laplacian(ball, f, 0) == 3.0);
}

TEST_CASE("the Laplacian refuses vertices with unmaterialized neighbors") {
    const Ball ball = materialize_ball(binary_tree(), 2);
    const VertexFunction f = VertexFunction::Ones(ball.size());
    const int boundary = ball.spheres()[2].front();
    CHECK_THROWS_AS(apply_laplacian(ball, f, boundary), std::domain_error);
}

TEST_CASE("reduced Laplacians of single-interior balls are 1x1") {
    const ReducedLaplacian p3 = assemble_reduced(materialize_ball(line(), 1));
    REQUIRE(p3.dimension() == 1);
    CHECK(p3.matrix(0, 0) == 2.0);

    const ReducedLaplacian star = assemble_reduced(materialize_ball(binary_tree(), 1));
    REQUIRE(star.dimension() == 1);
    CHECK(star.matrix(0, 0) == 3.0);
}

TEST_CASE("the radius-2 ball of the 3-regular tree reduces to the star matrix") {
    const Ball ball = materialize_ball(binary_tree(), 2);
    const ReducedLaplacian L = assemble_reduced(ball);
    REQUIRE(L.dimension() == 4);
    for (int i = 0; i < 4; ++i) CHECK(L.matrix(i, i) == 3.0);
    // The root (row 0) is adjacent to its three children and they are not
    // adjacent to each other.
    for (int i = 1; i < 4; ++i) {
        CHECK(L.matrix(0, i) == -1.0);
        CHECK(L.matrix(i, 0) == -1.0);
        for (int j = 1; j < 4; ++j) {
            if (i != j) CHECK(L.matrix(i, j) == 0.0);
        }
    }
    CHECK(L.matrix == L.matrix.transpose());
}

TEST_CASE("assembling an empty interior is an error") {
    const LazyGraph g = build_explicit_graph({{"0", "1"}}, "0", {{"0", 1}, {"1", 1}});
    CHECK_THROWS_AS(assemble_reduced(materialize_ball(g, 1)), std::invalid_argument);
}

TEST_CASE("the coboundary is antisymmetric and vanishes on constants") {
    const Ball ball = materialize_ball(binary_tree(), 3);
    const EdgeFunction zero = coboundary(ball, VertexFunction::Constant(ball.size(), 2.0));
    CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);

    VertexFunction dist(ball.size());
    for (int v = 0; v < ball.size(); ++v) dist[v] = ball.distance(v);
    const EdgeFunction df = coboundary(ball, dist);
    for (Eigen::Index e = 0; e < df.values.size(); ++e) {
        CHECK(std::abs(df.values[e]) == 1.0);  // BFS layering on a tree
    }

    const Ball path = materialize_ball(closed_p3(), 2);
    VertexFunction f(path.size());
    f[path.index_of("0")] = 0;
    f[path.index_of("1")] = 1;
    f[path.index_of("2")] = 3;
    CHECK(df.at(ball, ball.edges()[0].first, ball.edges()[0].second) ==
          -df.at(ball, ball.edges()[0].second, ball.edges()[0].first));
    const EdgeFunction dpath = coboundary(path, f);
    CHECK(dpath.at(path, path.index_of("0"), path.index_of("1")) == 1.0);
    CHECK(dpath.at(path, path.index_of("1"), path.index_of("2")) == 2.0);
}

TEST_CASE("Green's identity holds for interior-supported functions") {
    std::mt19937_64 rng(417);
    for (const auto& [g, radius] :
         {std::pair{binary_tree(), 4}, {grafted_graph(), 4}, {line(), 6}}) {
        const Ball ball = materialize_ball(g, radius);
        long long max_valence = 1;
        for (int v = 0; v < ball.size(); ++v) max_valence = std::max(max_valence, ball.valence(v));
        for (int trial = 0; trial < 50; ++trial) {
            const VertexFunction f = random_interior(ball, rng);
            const VertexFunction h = random_interior(ball, rng);
            const double bound = 1e-12 * f.norm() * h.norm() * static_cast<double>(max_valence);
            CHECK(green_residual(ball, f, h) <= bound);
        }
    }
}

TEST_CASE("Green's identity holds when only one function is interior") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    const Ball ball = materialize_ball(binary_tree(), 4);
    long long max_valence = 1;
    for (int v = 0; v < ball.size(); ++v) max_valence = std::max(max_valence, ball.valence(v));
    for (int trial = 0; trial < 50; ++trial) {
        const VertexFunction f = random_interior(ball, rng);
        VertexFunction h(ball.size());
        for (int v = 0; v < ball.size(); ++v) h[v] = uniform(rng);  // nonzero on the boundary
        const double bound = 1e-12 * f.norm() * h.norm() * static_cast<double>(max_valence);
        CHECK(green_residual(ball, f, h) <= bound);
    }
}

TEST_CASE("Green's identity on a delta gives the valence on both sides") {
    const Ball ball = materialize_ball(binary_tree(), 3);
    const int x = ball.spheres()[1].front();  // interior vertex of valence 3
    VertexFunction f = VertexFunction::Zero(ball.size());
    f[x] = 1.0;
    const GreenReport report = green_identity(ball, f, f);
    CHECK(report.laplacian_sum == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(report.edge_sum == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(report.boundary_term == 0.0);
}

TEST_CASE("Green's identity on a closed graph has no boundary term") {
    const Ball ball = materialize_ball(closed_p3(), 2);
    VertexFunction g(ball.size());
    g << 0.3, -1.2, 0.7;
    const GreenReport report =
        green_identity(ball, VertexFunction::Constant(ball.size(), 1.0), g);
    CHECK(report.boundary_term == 0.0);
    CHECK(std::abs(report.laplacian_sum) <= 1e-14);
    CHECK(std::abs(report.edge_sum) <= 1e-14);
}

TEST_CASE("the boundary correction is reported separately") {
    const Ball ball = materialize_ball(binary_tree(), 2);
    const VertexFunction ones = VertexFunction::Ones(ball.size());
    const GreenReport report = green_identity(ball, ones, ones);
    // Six boundary vertices with two outside edges each, f = g = 1.
    CHECK(report.boundary_term == 12.0);
    CHECK(report.residual() <= 1e-12);
}

TEST_CASE("the bounded Laplacian is the Laplacian divided by the valence") {
    const Ball ball = materialize_ball(grafted_graph(), 3);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    VertexFunction f(ball.size());
    for (int v = 0; v < ball.size(); ++v) f[v] = uniform(rng);

    CHECK(apply_bounded_laplacian(ball, VertexFunction::Constant(ball.size(), 4.0), 0) == 0.0);
    VertexFunction delta = VertexFunction::Zero(ball.size());
    delta[0] = 1.0;
    CHECK(apply_bounded_laplacian(ball, delta, 0) == 1.0);

    for (int x : ball.interior()) {
        const double full = apply_laplacian(ball, f, x);
        const double bounded = apply_bounded_laplacian(ball, f, x);
        CHECK(bounded * static_cast<double>(ball.valence(x)) ==
              doctest::Approx(full).epsilon(1e-14));
    }
}

TEST_CASE("the normalized reduced Laplacian never exceeds norm 2") {
    // A single interior vertex gives eigenvalue exactly 1.
    CHECK(bounded_laplacian_norm_check(materialize_ball(line(), 1)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // The closed path P3 is bipartite: top of the normalized spectrum is 2.
    CHECK(bounded_laplacian_norm_check(materialize_ball(closed_p3(), 2)) ==
          doctest::Approx(2.0).epsilon(1e-12));

    for (const auto& [g, radius] :
         {std::pair{binary_tree(), 4}, {ternary_tree(), 3}, {grafted_graph(), 4},
          {ray(), 8}, {explicit_binary_sample(3, true, true), 3}}) {
        CHECK(bounded_laplacian_norm_check(materialize_ball(g, radius)) <= 2.0 + 1e-10);
    }
}

TEST_CASE("kernel solutions obey the parabolic maximum principle") {
    // For u(x,t) = p_t(x, y0) the maximum over the cylinder sits on the
    // initial slice (value 1 at y0); for evolved positive data it sits on
    // the initial slice as well since the boundary values are 0.
    const auto ball = std::make_shared<Ball>(materialize_ball(binary_tree(), 3));
    const HeatKernelBall kernel(*&ball);
    const int y0 = ball->root_index();
    double max_value = 0;
    for (double t : {0.0, 0.05, 0.3, 1.0, 4.0}) {
        for (int v = 0; v < ball->size(); ++v) {
            max_value = std::max(max_value, kernel.value(v, y0, t));
        }
    }
    CHECK(max_value <= 1.0 + 1e-10);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uniform(0.1, 2.0);
    Eigen::VectorXd u0(kernel.reduced().dimension());
    for (Eigen::Index i = 0; i < u0.size(); ++i) u0[i] = uniform(rng);
    for (double t : {0.1, 0.5, 2.0}) {
        const Eigen::VectorXd evolved = kernel.interior_matrix(t) * u0;
        CHECK(evolved.maxCoeff() <= u0.maxCoeff() + 1e-10);
    }
}
