#include "heatgraph/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace heatgraph {

namespace {

long long checked_pow(long long base, int exp) {
    __int128 acc = 1;
    for (int i = 0; i < exp; ++i) {
        acc *= base;
        if (acc > static_cast<__int128>(INT64_MAX)) {
            throw std::overflow_error("branching value overflows 64-bit range");
        }
    }
    return static_cast<long long>(acc);
}

/// Orders decimal ids numerically and everything else lexicographically.
bool id_less(const VertexId& a, const VertexId& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

// ---------------------------------------------------------------------------
// BranchingLaw

BranchingLaw BranchingLaw::constant(long long value, long long root_valence) {
    if (value < 1) throw std::invalid_argument("branching law requires n(r) >= 1");
    if (root_valence < 1) throw std::invalid_argument("branching law requires n(0) >= 1");
    BranchingLaw law;
    law.kind_ = Kind::Constant;
    law.a_ = value;
    law.root_valence_ = root_valence;
    return law;
}

BranchingLaw BranchingLaw::affine(long long slope, long long intercept, long long root_valence) {
    if (slope < 0 || slope + intercept < 1) {
        throw std::invalid_argument("affine branching law must satisfy n(r) >= 1 for r >= 1");
    }
    if (root_valence < 1) throw std::invalid_argument("branching law requires n(0) >= 1");
    BranchingLaw law;
    law.kind_ = Kind::Affine;
    law.a_ = slope;
    law.b_ = intercept;
    law.root_valence_ = root_valence;
    return law;
}

BranchingLaw BranchingLaw::polynomial(std::vector<long long> coefficients, long long root_valence) {
    while (!coefficients.empty() && coefficients.back() == 0) coefficients.pop_back();
    if (coefficients.empty()) throw std::invalid_argument("polynomial branching law is empty");
    long long at_one = 0;
    for (long long c : coefficients) {
        if (c < 0) throw std::invalid_argument("polynomial branching law requires coefficients >= 0");
        at_one += c;
    }
    if (at_one < 1) throw std::invalid_argument("branching law requires n(r) >= 1");
    if (root_valence < 1) throw std::invalid_argument("branching law requires n(0) >= 1");
    BranchingLaw law;
    law.kind_ = Kind::Polynomial;
    law.coeffs_ = std::move(coefficients);
    law.root_valence_ = root_valence;
    return law;
}

BranchingLaw BranchingLaw::exponential(long long base, long long root_valence, long long scale) {
    if (base < 2) throw std::invalid_argument("exponential branching law requires base >= 2");
    if (scale < 1) throw std::invalid_argument("exponential branching law requires scale >= 1");
    if (root_valence < 1) throw std::invalid_argument("branching law requires n(0) >= 1");
    BranchingLaw law;
    law.kind_ = Kind::Exponential;
    law.a_ = base;
    law.b_ = scale;
    law.root_valence_ = root_valence;
    return law;
}

BranchingLaw BranchingLaw::explicit_prefix(std::vector<long long> values, long long root_valence,
                                           std::optional<BranchingLaw> tail) {
    for (long long v : values) {
        if (v < 1) throw std::invalid_argument("branching law requires n(r) >= 1");
    }
    if (root_valence < 1) throw std::invalid_argument("branching law requires n(0) >= 1");
    BranchingLaw law;
    law.kind_ = Kind::Explicit;
    law.prefix_ = std::move(values);
    law.root_valence_ = root_valence;
    if (tail) law.tail_ = std::make_shared<BranchingLaw>(std::move(*tail));
    return law;
}

bool BranchingLaw::defined_at(int r) const {
    if (r < 0) return false;
    if (r == 0) return true;
    if (kind_ != Kind::Explicit) return true;
    if (r <= static_cast<int>(prefix_.size())) return true;
    return tail_ != nullptr && tail_->defined_at(r);
}

long long BranchingLaw::value_at(int r) const {
    if (r < 0) throw std::out_of_range("branching radius must be >= 0");
    if (r == 0) return root_valence_;
    switch (kind_) {
        case Kind::Constant:
            return a_;
        case Kind::Affine:
            return a_ * r + b_;
        case Kind::Polynomial: {
            __int128 acc = 0;
            __int128 p = 1;
            for (long long c : coeffs_) {
                acc += p * c;
                p *= r;
                if (acc > static_cast<__int128>(INT64_MAX)) {
                    throw std::overflow_error("branching value overflows 64-bit range");
                }
            }
            return static_cast<long long>(acc);
        }
        case Kind::Exponential: {
            __int128 v = static_cast<__int128>(b_) * checked_pow(a_, r);
            if (v > static_cast<__int128>(INT64_MAX)) {
                throw std::overflow_error("branching value overflows 64-bit range");
            }
            return static_cast<long long>(v);
        }
        case Kind::Explicit:
            if (r <= static_cast<int>(prefix_.size())) return prefix_[r - 1];
            if (tail_) return tail_->value_at(r);
            throw std::out_of_range("explicit branching law undefined at radius " +
                                    std::to_string(r) + " (no declared tail)");
    }
    throw std::logic_error("unreachable");
}

SeriesClass BranchingLaw::reciprocal_sum_class() const {
    switch (kind_) {
        case Kind::Constant:
            return SeriesClass::Divergent;
        case Kind::Affine:
            return SeriesClass::Divergent;
        case Kind::Polynomial:
            return coeffs_.size() >= 3 ? SeriesClass::Convergent : SeriesClass::Divergent;
        case Kind::Exponential:
            return SeriesClass::Convergent;
        case Kind::Explicit:
            // A finite prefix never changes convergence; the class is the
            // tail's, and undecidable without one.
            return tail_ ? tail_->reciprocal_sum_class() : SeriesClass::Unknown;
    }
    return SeriesClass::Unknown;
}

std::string BranchingLaw::describe() const {
    switch (kind_) {
        case Kind::Constant:
            return "n(r)=" + std::to_string(a_) + ", n(0)=" + std::to_string(root_valence_);
        case Kind::Affine:
            return "n(r)=" + std::to_string(a_) + "*r+" + std::to_string(b_) +
                   ", n(0)=" + std::to_string(root_valence_);
        case Kind::Polynomial: {
            std::string s = "n(r)=poly(";
            for (std::size_t i = 0; i < coeffs_.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(coeffs_[i]);
            }
            return s + "), n(0)=" + std::to_string(root_valence_);
        }
        case Kind::Exponential:
            return "n(r)=" + (b_ != 1 ? std::to_string(b_) + "*" : std::string()) +
                   std::to_string(a_) + "^r, n(0)=" + std::to_string(root_valence_);
        case Kind::Explicit: {
            std::string s = "n(r)=[";
            for (std::size_t i = 0; i < prefix_.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(prefix_[i]);
            }
            s += "]";
            if (tail_) s += " then " + tail_->describe();
            return s + ", n(0)=" + std::to_string(root_valence_);
        }
    }
    return {};
}

bool BranchingLaw::operator==(const BranchingLaw& other) const {
    if (kind_ != other.kind_ || root_valence_ != other.root_valence_) return false;
    if (a_ != other.a_ || b_ != other.b_ || coeffs_ != other.coeffs_ ||
        prefix_ != other.prefix_) {
        return false;
    }
    if ((tail_ == nullptr) != (other.tail_ == nullptr)) return false;
    return tail_ == nullptr || *tail_ == *other.tail_;
}

// ---------------------------------------------------------------------------
// Model trees

namespace {

constexpr char kModelRoot[] = "x0";

/// Parses a path-encoded id into child indices; throws on malformed input.
std::vector<long long> parse_path(const VertexId& id) {
    if (id.compare(0, 2, kModelRoot) != 0) {
        throw std::invalid_argument("unknown vertex id: " + id);
    }
    std::vector<long long> path;
    std::size_t pos = 2;
    while (pos < id.size()) {
        if (id[pos] != '.' || pos + 1 >= id.size()) {
            throw std::invalid_argument("unknown vertex id: " + id);
        }
        std::size_t next = id.find('.', pos + 1);
        if (next == std::string::npos) next = id.size();
        const std::string seg = id.substr(pos + 1, next - pos - 1);
        if (seg.empty() || seg.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("unknown vertex id: " + id);
        }
        path.push_back(std::stoll(seg));
        pos = next;
    }
    return path;
}

}  // namespace

LazyGraph build_model_tree(const BranchingLaw& law) {
    GraphFamily family;
    family.type = GraphFamily::Type::ModelTree;
    family.law = law;
    family.known_tree = true;

    auto oracle = [law](const VertexId& id) -> NeighborInfo {
        const std::vector<long long> path = parse_path(id);
        const int depth = static_cast<int>(path.size());
        for (int j = 0; j < depth; ++j) {
            if (path[j] < 0 || path[j] >= law.value_at(j)) {
                throw std::invalid_argument("unknown vertex id: " + id);
            }
        }
        NeighborInfo info;
        if (depth > 0) {
            const std::size_t cut = id.find_last_of('.');
            info.neighbors.push_back(id.substr(0, cut));
        }
        const long long children = law.value_at(depth);
        for (long long c = 0; c < children; ++c) {
            info.neighbors.push_back(id + "." + std::to_string(c));
        }
        return info;
    };

    return LazyGraph(kModelRoot, std::move(oracle), std::move(family));
}

// ---------------------------------------------------------------------------
// Grafted rays

namespace {

int graft_depth(const GraphFamily& family) {
    int depth = 0;
    const GraphFamily* f = &family;
    while (f->type == GraphFamily::Type::GraftRay) {
        ++depth;
        f = f->base.get();
    }
    return depth;
}

}  // namespace

LazyGraph graft_ray(const LazyGraph& base, const VertexId& attach_at) {
    if (!base.family().known_tree) {
        throw std::invalid_argument("graft_ray requires a tree base graph");
    }
    base.neighbors(attach_at);  // throws for an unknown vertex id

    const int depth = graft_depth(base.family());
    const std::string prefix = depth == 0 ? "ray" : "ray" + std::to_string(depth + 1);

    GraphFamily family;
    family.type = GraphFamily::Type::GraftRay;
    family.base = std::make_shared<GraphFamily>(base.family());
    family.attach_at = attach_at;
    family.ray_prefix = prefix;
    family.known_tree = true;

    const std::string dot_prefix = prefix + ".";
    auto base_oracle = [base](const VertexId& id) { return base.neighbors(id); };
    auto oracle = [base_oracle, attach_at, prefix, dot_prefix](const VertexId& id) -> NeighborInfo {
        if (id.compare(0, dot_prefix.size(), dot_prefix) == 0) {
            const std::string seg = id.substr(dot_prefix.size());
            if (seg.empty() || seg.find_first_not_of("0123456789") != std::string::npos) {
                throw std::invalid_argument("unknown vertex id: " + id);
            }
            const long long k = std::stoll(seg);
            if (k < 1) throw std::invalid_argument("unknown vertex id: " + id);
            NeighborInfo info;
            info.neighbors.push_back(k == 1 ? attach_at : dot_prefix + std::to_string(k - 1));
            info.neighbors.push_back(dot_prefix + std::to_string(k + 1));
            return info;
        }
        NeighborInfo info = base_oracle(id);
        if (id == attach_at) info.neighbors.push_back(dot_prefix + "1");
        return info;
    };

    return LazyGraph(base.root(), std::move(oracle), std::move(family));
}

LazyGraph graft_ray(const LazyGraph& base) { return graft_ray(base, base.root()); }

// ---------------------------------------------------------------------------
// Explicit graphs

LazyGraph build_explicit_graph(const std::vector<std::pair<VertexId, VertexId>>& edges,
                               const VertexId& root,
                               const std::unordered_map<VertexId, long long>& exterior_degree) {
    auto adjacency = std::make_shared<std::unordered_map<VertexId, std::vector<VertexId>>>();
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const auto& [a, b] : edges) {
        if (a == b) throw std::invalid_argument("explicit graph contains a self-loop at " + a);
        auto key = id_less(a, b) ? std::make_pair(a, b) : std::make_pair(b, a);
        if (!seen.insert(key).second) {
            throw std::invalid_argument("explicit graph lists edge {" + a + "," + b + "} twice");
        }
        (*adjacency)[a].push_back(b);
        (*adjacency)[b].push_back(a);
    }
    if (!adjacency->count(root)) {
        if (!edges.empty()) {
            throw std::invalid_argument("explicit graph root " + root + " is not a listed vertex");
        }
        (*adjacency)[root];  // an isolated root is a valid single-vertex graph
    }
    for (auto& [id, nbrs] : *adjacency) {
        std::sort(nbrs.begin(), nbrs.end(), id_less);
    }
    for (const auto& [id, deg] : exterior_degree) {
        if (!adjacency->count(id)) {
            throw std::invalid_argument("exterior_degree names unknown vertex " + id);
        }
        if (deg < 0) throw std::invalid_argument("exterior_degree must be >= 0");
    }

    // The listed part is a tree when it is connected with |E| = |V| - 1.
    std::size_t reached = 0;
    {
        std::unordered_map<VertexId, bool> visited;
        std::deque<VertexId> queue{root};
        visited[root] = true;
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            ++reached;
            for (const VertexId& w : adjacency->at(v)) {
                if (!visited[w]) {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    const bool tree = reached == adjacency->size() && edges.size() + 1 == adjacency->size();

    GraphFamily family;
    family.type = GraphFamily::Type::Explicit;
    family.known_tree = tree;

    auto exterior = std::make_shared<std::unordered_map<VertexId, long long>>(exterior_degree);
    auto oracle = [adjacency, exterior](const VertexId& id) -> NeighborInfo {
        auto it = adjacency->find(id);
        if (it == adjacency->end()) throw std::invalid_argument("unknown vertex id: " + id);
        NeighborInfo info;
        info.neighbors = it->second;
        auto ext = exterior->find(id);
        if (ext != exterior->end()) info.exterior_degree = ext->second;
        return info;
    };

    return LazyGraph(root, std::move(oracle), std::move(family));
}

// ---------------------------------------------------------------------------
// Ball materialization

int Ball::index_of(const VertexId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("vertex " + id + " is not in the ball");
    return it->second;
}

std::optional<int> Ball::find(const VertexId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool Ball::is_tree_ball() const {
    for (int v = 1; v < size(); ++v) {
        int inward = 0;
        for (int w : adjacency_[v]) {
            if (dist_[w] == dist_[v]) return false;
            if (dist_[w] < dist_[v]) ++inward;
        }
        if (inward != 1) return false;
    }
    return true;
}

Ball materialize_ball(const LazyGraph& g, int radius, std::size_t capacity) {
    if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");

    Ball ball;
    ball.radius_ = radius;
    if (g.family().is_model_tree()) ball.model_law_ = g.family().law;

    auto add_vertex = [&](const VertexId& id, int dist, int parent) {
        if (ball.ids_.size() >= capacity) throw CapacityError(capacity, radius);
        const int idx = static_cast<int>(ball.ids_.size());
        ball.ids_.push_back(id);
        ball.index_.emplace(id, idx);
        ball.dist_.push_back(dist);
        ball.parent_.push_back(parent);
        ball.valence_.push_back(0);
        return idx;
    };

    add_vertex(g.root(), 0, -1);
    // BFS order doubles as processing order; every edge is recorded at its
    // later-indexed endpoint, so it is recorded exactly once.
    for (int v = 0; v < static_cast<int>(ball.ids_.size()); ++v) {
        const NeighborInfo info = g.neighbors(ball.ids_[v]);
        ball.valence_[v] = info.valence();
        const bool expand = ball.dist_[v] < radius;
        for (const VertexId& nbr : info.neighbors) {
            auto it = ball.index_.find(nbr);
            if (it != ball.index_.end()) {
                if (it->second < v) ball.edges_.emplace_back(it->second, v);
            } else if (expand) {
                add_vertex(nbr, ball.dist_[v] + 1, v);
            }
        }
    }

    const int n = ball.size();
    ball.adjacency_.assign(n, {});
    for (const auto& [a, b] : ball.edges_) {
        ball.adjacency_[a].push_back(b);
        ball.adjacency_[b].push_back(a);
    }
    for (auto& nbrs : ball.adjacency_) std::sort(nbrs.begin(), nbrs.end());

    ball.spheres_.assign(radius + 1, {});
    ball.boundary_.assign(n, false);
    for (int v = 0; v < n; ++v) {
        ball.spheres_[ball.dist_[v]].push_back(v);
        ball.boundary_[v] = ball.valence_[v] > ball.in_ball_degree(v);
        if (!ball.boundary_[v]) ball.interior_.push_back(v);
    }
    return ball;
}

// ---------------------------------------------------------------------------
// Valence profiles

ValenceProfile valence_profile(const Ball& ball) {
    ValenceProfile profile;
    const int n = ball.size();
    profile.per_vertex.resize(n);
    for (int v = 0; v < n; ++v) {
        auto& d = profile.per_vertex[v];
        for (int w : ball.neighbors_in_ball(v)) {
            const int dw = ball.distance(w);
            if (dw == ball.distance(v)) {
                ++d.same;
            } else if (dw > ball.distance(v)) {
                ++d.outward;
            } else {
                ++d.inward;
            }
        }
        // Neighbors beyond the ball and declared exterior edges are all
        // strictly farther from the root.
        d.outward += ball.valence(v) - ball.in_ball_degree(v);
    }

    profile.per_sphere.resize(ball.radius() + 1);
    for (int r = 0; r <= ball.radius(); ++r) {
        auto& stats = profile.per_sphere[r];
        bool first = true;
        for (int v : ball.spheres()[r]) {
            const long long m = ball.valence(v);
            if (first || m < stats.min_valence) stats.min_valence = m;
            if (first || m > stats.max_valence) stats.max_valence = m;
            first = false;
        }
    }
    return profile;
}

std::vector<std::optional<long long>> directional_min_valence(const Ball& ball,
                                                              const VertexId& direction) {
    if (!ball.is_tree_ball()) {
        throw std::invalid_argument("directional valence profile requires a tree ball");
    }
    const int dir = ball.index_of(direction);
    if (ball.distance(dir) != 1) {
        throw std::invalid_argument("direction must be a neighbor of the root");
    }

    std::vector<bool> in_branch(ball.size(), false);
    in_branch[dir] = true;
    for (int v = 1; v < ball.size(); ++v) {
        if (v != dir) in_branch[v] = in_branch[ball.parent(v)];
    }

    std::vector<std::optional<long long>> result(ball.radius() + 1);
    for (int r = 1; r <= ball.radius(); ++r) {
        for (int v : ball.spheres()[r]) {
            if (!in_branch[v]) continue;
            const long long m = ball.valence(v);
            if (!result[r] || m < *result[r]) result[r] = m;
        }
    }
    return result;
}

}  // namespace heatgraph
