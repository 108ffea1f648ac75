#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace heatgraph {

/// Vertices are identified by strings.  Lazily generated trees use
/// path-encoded ids ("x0", "x0.2", "x0.2.0", ...) so that two
/// materializations of the same graph always agree; grafted ray vertices
/// use "ray.1", "ray.2", ...; explicit graphs use the ids given by the
/// caller (decimal strings when loaded from a spec file).
using VertexId = std::string;

/// Symbolic classification of the series sum 1/n(r).
enum class SeriesClass { Divergent, Convergent, Unknown };

/// Branching function n(r) of a model tree: the number of outward edges
/// per vertex on sphere r.  n(0) is the valence of the root and is stored
/// separately from the law for r >= 1.  Whether the series sum 1/n(r)
/// converges is decided symbolically from the kind of the law, never from
/// numeric truncation.
class BranchingLaw {
public:
    enum class Kind { Constant, Affine, Polynomial, Exponential, Explicit };

    static BranchingLaw constant(long long value, long long root_valence);
    /// n(r) = slope*r + intercept.
    static BranchingLaw affine(long long slope, long long intercept, long long root_valence);
    /// n(r) = sum_i coefficients[i] * r^i, all coefficients >= 0.
    static BranchingLaw polynomial(std::vector<long long> coefficients, long long root_valence);
    /// n(r) = scale * base^r, base >= 2.
    static BranchingLaw exponential(long long base, long long root_valence, long long scale = 1);
    /// Explicit values n(1), n(2), ..., n(K); past the prefix the optional
    /// tail law takes over (evaluated at the absolute radius).  Without a
    /// declared tail, n(r) is undefined for r > K and the series class is
    /// Unknown.
    static BranchingLaw explicit_prefix(std::vector<long long> values, long long root_valence,
                                        std::optional<BranchingLaw> tail = std::nullopt);

    Kind kind() const { return kind_; }
    long long root_valence() const { return root_valence_; }

    /// n(r) for r >= 1; n(0) = root_valence() for r == 0.
    long long value_at(int r) const;
    bool defined_at(int r) const;

    SeriesClass reciprocal_sum_class() const;
    std::string describe() const;

    bool operator==(const BranchingLaw& other) const;

private:
    BranchingLaw() = default;

    Kind kind_ = Kind::Constant;
    long long root_valence_ = 1;
    long long a_ = 0;  // constant value / affine slope / exponential base
    long long b_ = 0;  // affine intercept / exponential scale
    std::vector<long long> coeffs_;
    std::vector<long long> prefix_;
    std::shared_ptr<const BranchingLaw> tail_;
};

/// Construction descriptor of a LazyGraph.  Symbolic completeness criteria
/// and the radial fast paths dispatch on this.
struct GraphFamily {
    enum class Type { ModelTree, GraftRay, Explicit };

    Type type = Type::Explicit;
    std::optional<BranchingLaw> law;          // ModelTree
    std::shared_ptr<const GraphFamily> base;  // GraftRay
    VertexId attach_at;                       // GraftRay
    VertexId ray_prefix;                      // GraftRay, e.g. "ray"
    bool known_tree = false;

    bool is_model_tree() const { return type == Type::ModelTree; }
};

/// Full-graph neighborhood of a single vertex as reported by the oracle.
/// `exterior_degree` declares edges beyond the listed neighbors (used by
/// explicit graphs to mark the frontier of a finite sample); the vertex
/// valence in the full graph is neighbors.size() + exterior_degree.
struct NeighborInfo {
    std::vector<VertexId> neighbors;
    long long exterior_degree = 0;

    long long valence() const {
        return static_cast<long long>(neighbors.size()) + exterior_degree;
    }
};

/// A possibly-infinite, locally finite, rooted graph given by a pure
/// neighbor oracle.  Immutable; the oracle must be re-entrant, so graphs
/// are safe to share across threads.
class LazyGraph {
public:
    using NeighborOracle = std::function<NeighborInfo(const VertexId&)>;

    LazyGraph(VertexId root, NeighborOracle oracle, GraphFamily family)
        : root_(std::move(root)), oracle_(std::move(oracle)), family_(std::move(family)) {}

    const VertexId& root() const { return root_; }
    NeighborInfo neighbors(const VertexId& v) const { return oracle_(v); }
    const GraphFamily& family() const { return family_; }

private:
    VertexId root_;
    NeighborOracle oracle_;
    GraphFamily family_;
};

constexpr std::size_t kDefaultBallCapacity = 200000;

/// Thrown when materialization would exceed the configured vertex cap.
/// Balls are never silently truncated.
class CapacityError : public std::runtime_error {
public:
    CapacityError(std::size_t capacity, int radius)
        : std::runtime_error("ball of radius " + std::to_string(radius) +
                             " exceeds the capacity cap of " + std::to_string(capacity) +
                             " vertices"),
          capacity(capacity),
          radius(radius) {}

    std::size_t capacity;
    int radius;
};

/// A materialized ball B_r about the root: BFS-exact distances, sphere
/// layers, full-graph valences, in-ball adjacency and interior/boundary
/// classification.  A vertex is boundary when it has a full-graph neighbor
/// outside the ball, i.e. when its valence exceeds its in-ball degree.
class Ball {
public:
    int radius() const { return radius_; }
    int size() const { return static_cast<int>(ids_.size()); }

    const std::vector<VertexId>& ids() const { return ids_; }
    const VertexId& id(int v) const { return ids_[v]; }
    int index_of(const VertexId& id) const;
    std::optional<int> find(const VertexId& id) const;

    int root_index() const { return 0; }
    int distance(int v) const { return dist_[v]; }
    long long valence(int v) const { return valence_[v]; }
    bool is_boundary(int v) const { return boundary_[v]; }
    bool is_interior(int v) const { return !boundary_[v]; }
    /// BFS parent; -1 for the root.
    int parent(int v) const { return parent_[v]; }

    const std::vector<int>& neighbors_in_ball(int v) const { return adjacency_[v]; }
    long long in_ball_degree(int v) const { return static_cast<long long>(adjacency_[v].size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    /// Sphere layers S_0, ..., S_radius; they partition the vertex set.
    const std::vector<std::vector<int>>& spheres() const { return spheres_; }
    /// Interior vertex indices in BFS order.
    const std::vector<int>& interior() const { return interior_; }

    /// True when the underlying graph is a pure model tree, enabling the
    /// sphere-averaging and radial-kernel operations.
    bool is_model_tree_ball() const { return model_law_.has_value(); }
    const std::optional<BranchingLaw>& model_law() const { return model_law_; }

    /// True when every non-root vertex has exactly one inward and no
    /// same-sphere in-ball neighbor.
    bool is_tree_ball() const;

private:
    friend Ball materialize_ball(const LazyGraph&, int, std::size_t);

    int radius_ = 0;
    std::vector<VertexId> ids_;
    std::unordered_map<VertexId, int> index_;
    std::vector<int> dist_;
    std::vector<long long> valence_;
    std::vector<bool> boundary_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> spheres_;
    std::vector<int> interior_;
    std::optional<BranchingLaw> model_law_;
};

/// Min/max valence per sphere and directional neighbor counts per vertex.
/// For every non-root vertex m(x) = m0(x) + m_out(x) + m_in(x).
struct ValenceProfile {
    struct SphereStats {
        long long min_valence = 0;  // underline m(r)
        long long max_valence = 0;  // M(r)
    };
    struct Directional {
        long long same = 0;     // m0
        long long outward = 0;  // m_{+1}
        long long inward = 0;   // m_{-1}
    };

    std::vector<SphereStats> per_sphere;   // indexed by r = 0..radius
    std::vector<Directional> per_vertex;   // indexed by ball vertex
};

/// Model tree T_n for a branching law: the root has n(0) children and
/// every vertex on sphere r > 0 has one inward and n(r) outward neighbors.
LazyGraph build_model_tree(const BranchingLaw& law);

/// Attach an infinite path to `attach_at` (disjoint union glued at the
/// vertex).  The base must be a tree and the vertex must exist.
LazyGraph graft_ray(const LazyGraph& base, const VertexId& attach_at);
LazyGraph graft_ray(const LazyGraph& base);  // attach at the root

/// Finite graph from an undirected edge list.  `exterior_degree` records
/// full-graph valence beyond the listed edges; vertices carrying it are
/// treated as adjacent to unmaterialized outside vertices.
LazyGraph build_explicit_graph(const std::vector<std::pair<VertexId, VertexId>>& edges,
                               const VertexId& root,
                               const std::unordered_map<VertexId, long long>& exterior_degree = {});

Ball materialize_ball(const LazyGraph& g, int radius,
                      std::size_t capacity = kDefaultBallCapacity);

ValenceProfile valence_profile(const Ball& ball);

/// Minimum valence per sphere restricted to the branch through the root
/// neighbor `direction`: min over {x in S_r : d(x, direction) = r-1}.
/// Requires a tree ball.  Entries for empty branch spheres are absent.
std::vector<std::optional<long long>> directional_min_valence(const Ball& ball,
                                                              const VertexId& direction);

}  // namespace heatgraph
