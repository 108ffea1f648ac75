#pragma once

#include "heatgraph/operators.hpp"

namespace heatgraph {

struct Lambda0Pair {
    double value = 0;
    Eigen::VectorXd eigenfunction;  // interior index order, positive on the interior
};

/// Smallest eigenpair of a reduced Laplacian; the eigenfunction is sign
/// normalized to be positive on the interior.
Lambda0Pair lambda0_ball(const ReducedLaplacian& L);

/// Smallest eigenvalue only; cheaper when the eigenfunction is not needed.
double lambda0_value(const ReducedLaplacian& L);

/// Smallest Dirichlet eigenvalues over a growing radius schedule: a
/// positive, non-increasing sequence whose last value is an upper bound on
/// lambda_0 of the graph (the limit is approached from above).
struct Lambda0Trace {
    std::vector<int> radii;
    std::vector<double> values;
    bool capacity_hit = false;

    double upper_bound_estimate() const { return values.empty() ? 0.0 : values.back(); }
};

Lambda0Trace lambda0_exhaustion(const LazyGraph& g, const std::vector<int>& radii,
                                std::size_t capacity = kDefaultBallCapacity);

/// <df,df>/<f,f> for a nonzero function vanishing on the boundary; never
/// below the smallest Dirichlet eigenvalue of the same ball.
double rayleigh_quotient(const Ball& ball, const VertexFunction& f);

/// Cheeger ratios of a connected vertex subset against the full graph:
/// L counts edges with exactly one endpoint in D, A(D) = sum of valences,
/// Vol(D) = vertex count.
struct CheegerRatios {
    long long edge_boundary = 0;  // L(boundary D)
    long long area = 0;           // A(D)
    long long volume = 0;         // Vol(D)

    double area_ratio() const { return static_cast<double>(edge_boundary) / static_cast<double>(area); }
    double volume_ratio() const { return static_cast<double>(edge_boundary) / static_cast<double>(volume); }
};

CheegerRatios cheeger_ratios(const Ball& ball, const std::vector<int>& subset);

/// Cheeger ratios of a connected subset given by vertex ids, evaluated
/// directly against the neighbor oracle.  This covers structured families
/// (ray pieces, sphere segments) that live far outside any materializable
/// root-centered ball.
CheegerRatios oracle_cheeger_ratios(const LazyGraph& g, const std::vector<VertexId>& subset);

/// Rayleigh upper bounds from characteristic functions of ray pieces
/// {ray.1, ..., ray.k} of a grafted graph, k = 1..max_len; the quotient of
/// a characteristic function equals L(boundary D)/Vol(D) = 2/k.
std::vector<double> ray_piece_quotients(const LazyGraph& g, int max_len);

/// Geometric spectral lower bounds from the directional valence ratio
/// (m_{+1}(x) - m_{-1}(x))/m(x) >= c: lambda_0(bounded) >= c^2/2 and
/// lambda_0 >= c^2 m / 2 for m = min valence.  Not applicable when c <= 0.
struct GeometricBounds {
    double c = 0;
    long long min_valence = 0;
    double bound_bd = 0;
    double bound_full = 0;
    bool applicable = false;
};

GeometricBounds geometric_bounds(const ValenceProfile& profile, const Ball& ball);

/// Positive lambda-harmonic witnesses u_r(root) = 1 over growing radii for
/// lambda below every scheduled lambda_0^r.  Values obey the product upper
/// bound u_r(x) <= prod_{j < d(x)} (M(j) - lambda).
struct HarmonicWitnessTrace {
    std::vector<int> radii;
    std::vector<std::shared_ptr<const Ball>> balls;
    std::vector<VertexFunction> witnesses;
    std::vector<double> stabilization;  // max change on the shared prefix between radii
    double min_interior_value = 0;
    double max_bound_violation = 0;     // vs the product upper bound
};

HarmonicWitnessTrace positive_harmonic_witness(const LazyGraph& g, double lambda,
                                               const std::vector<int>& radii,
                                               std::size_t capacity = kDefaultBallCapacity);

/// lambda_0 of the reduced Laplacian on annulus interiors (functions
/// vanishing on B_inner and on the boundary of B_outer), one entry per
/// inner radius, reported with the geometric bound c^2 m / 2 computed on
/// the same annulus.  A finite-scale proxy for the exterior-domain
/// spectral bottom; the outer Dirichlet wall only raises the value.
struct ExteriorTrace {
    int outer_radius = 0;
    std::vector<int> inner_radii;
    std::vector<double> lambda0;
    std::vector<double> bound;  // 0 when c <= 0 on the annulus
};

ExteriorTrace exterior_lambda0_trace(const LazyGraph& g, const std::vector<int>& inner_radii,
                                     int outer_radius,
                                     std::size_t capacity = kDefaultBallCapacity);

}  // namespace heatgraph
