#pragma once

#include <string>
#include <vector>

#include "heatgraph/graph.hpp"

namespace heatgraph::testing {

// Shared test-graph matrix: a one-sided ray, the two-sided line, the
// 3-regular ("binary model") tree, the ternary model tree, a model tree
// with branching 2^r and the section-4 grafted graph built over it.

inline LazyGraph ray() { return build_model_tree(BranchingLaw::constant(1, 1)); }

inline LazyGraph line() { return graft_ray(ray()); }

inline LazyGraph binary_tree() { return build_model_tree(BranchingLaw::constant(2, 3)); }

inline LazyGraph ternary_tree() { return build_model_tree(BranchingLaw::constant(3, 3)); }

inline LazyGraph doubling_tree() { return build_model_tree(BranchingLaw::exponential(2, 2)); }

inline LazyGraph grafted_graph() { return graft_ray(doubling_tree()); }

/// The depth-ball of any lazy graph as an explicit graph, with exterior
/// degrees recording the true frontier valences.
inline LazyGraph explicit_clone(const LazyGraph& g, int depth) {
    const Ball ball = materialize_ball(g, depth);
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (const auto& [a, b] : ball.edges()) edges.emplace_back(ball.id(a), ball.id(b));
    std::unordered_map<VertexId, long long> exterior;
    for (int v = 0; v < ball.size(); ++v) {
        const long long outside = ball.valence(v) - ball.in_ball_degree(v);
        if (outside > 0) exterior[ball.id(v)] = outside;
    }
    return build_explicit_graph(edges, g.root(), exterior);
}

/// The binary-tree ball of the given depth as an explicit graph with
/// exterior degrees marking the frontier, optionally fattened by one extra
/// full binary subtree under the first depth-1 vertex ("f", "f.0", ...)
/// and optionally closed by one same-sphere edge between two depth-2
/// vertices.
inline LazyGraph explicit_binary_sample(int depth, bool extra_child, bool sphere_edge) {
    const Ball ball = materialize_ball(build_model_tree(BranchingLaw::constant(2, 3)), depth);
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (const auto& [a, b] : ball.edges()) edges.emplace_back(ball.id(a), ball.id(b));
    std::unordered_map<VertexId, long long> exterior;
    for (int v = 0; v < ball.size(); ++v) {
        if (ball.distance(v) == depth) exterior[ball.id(v)] = 2;
    }
    if (extra_child) {
        std::vector<VertexId> frontier{"f"};
        edges.emplace_back("x0.0", "f");
        for (int level = 2; level < depth; ++level) {
            std::vector<VertexId> next;
            for (const VertexId& v : frontier) {
                for (int c = 0; c < 2; ++c) {
                    next.push_back(v + "." + std::to_string(c));
                    edges.emplace_back(v, next.back());
                }
            }
            frontier = std::move(next);
        }
        for (const VertexId& v : frontier) exterior[v] = 2;
    }
    if (sphere_edge && depth >= 3) edges.emplace_back("x0.0.0", "x0.1.0");
    return build_explicit_graph(edges, "x0", exterior);
}

}  // namespace heatgraph::testing
