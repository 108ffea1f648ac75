#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include "heatgraph/csv.hpp"
#include "heatgraph/graph_io.hpp"
#include "heatgraph/kernel_compare.hpp"
#include "heatgraph/spectrum.hpp"

namespace {

using namespace heatgraph;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

std::size_t default_capacity() {
    if (const char* env = std::getenv("HEATGRAPH_CAPACITY")) {
        const long long value = std::atoll(env);
        if (value > 0) return static_cast<std::size_t>(value);
    }
    return kDefaultBallCapacity;
}

std::vector<double> parse_t_grid(const std::string& spec) {
    std::vector<double> grid;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        try {
            grid.push_back(std::stod(spec.substr(pos, comma - pos)));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad t grid '" + spec + "' (expected a comma list)");
        }
        if (grid.back() < 0) throw std::invalid_argument("t values must be >= 0");
        pos = comma + 1;
    }
    if (grid.empty()) throw std::invalid_argument("t grid '" + spec + "' is empty");
    return grid;
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

VertexId resolve_probe(const LazyGraph& g, const std::string& text) {
    return text == "root" ? g.root() : text;
}

/// Default exhaustion schedule: arithmetic with step 2 on slow-growing
/// graphs, geometric up to radius 40 when the branching law grows fast
/// enough that the series sum 1/n(r) converges.
std::vector<int> default_radius_schedule(const LazyGraph& g) {
    const GraphFamily* family = &g.family();
    while (family->type == GraphFamily::Type::GraftRay) family = family->base.get();
    const bool fast = family->is_model_tree() &&
                      family->law->reciprocal_sum_class() == SeriesClass::Convergent;
    if (fast) return {2, 3, 4, 6, 8, 11, 15, 20, 26, 34, 40};
    std::vector<int> radii;
    for (int r = 2; r <= 12; r += 2) radii.push_back(r);
    return radii;
}

struct HeatArgs {
    std::string graph;
    double t = 1.0;
    std::string radii;  // empty: family-dependent default
    std::string probe = "root";
    double tol = 1e-8;
    std::string out = ".";
};

int run_heat(const HeatArgs& args) {
    if (args.tol <= 0) throw std::invalid_argument("tol must be > 0");
    if (args.t < 0) throw std::invalid_argument("t must be >= 0");
    const LazyGraph g = load_graph(args.graph);
    const std::vector<int> radii =
        args.radii.empty() ? default_radius_schedule(g) : parse_radius_schedule(args.radii);

    std::string probe_x = args.probe, probe_y = args.probe;
    if (const auto comma = args.probe.find(','); comma != std::string::npos) {
        probe_x = args.probe.substr(0, comma);
        probe_y = args.probe.substr(comma + 1);
    }
    const VertexId x = resolve_probe(g, probe_x);
    const VertexId y = resolve_probe(g, probe_y);

    ExhaustionOptions options;
    options.tol = args.tol;
    options.capacity = default_capacity();
    const ConvergenceTrace trace = exhaustion_kernel(g, x, y, args.t, radii, options);

    const bool radial_mass = g.family().is_model_tree() && x == g.root();
    std::vector<std::vector<std::string>> kernel_rows;
    std::vector<std::vector<std::string>> mass_rows;
    for (std::size_t i = 0; i < trace.radii.size(); ++i) {
        kernel_rows.push_back({std::to_string(trace.radii[i]), csv::format(args.t), x, y,
                               csv::format(trace.values[i]), csv::format(trace.deltas[i])});
    }
    for (std::size_t i = 0; i < trace.radii.size(); ++i) {
        double mass = 0;
        if (radial_mass) {
            mass = model_radial_mass(*g.family().law, trace.radii[i], args.t);
        } else {
            try {
                const auto ball = std::make_shared<Ball>(
                    materialize_ball(g, trace.radii[i], options.capacity));
                mass = HeatKernelBall(ball).mass(x, args.t);
            } catch (const CapacityError&) {
                break;  // mass rows end here; the kernel trace stands on its own
            }
        }
        mass_rows.push_back({std::to_string(trace.radii[i]), csv::format(args.t), x,
                             csv::format(mass)});
    }
    csv::write_file(out_path(args.out, "heat_trace.csv"),
                    {"radius", "t", "x", "y", "value", "delta"}, kernel_rows);
    csv::write_file(out_path(args.out, "heat_mass.csv"), {"radius", "t", "x", "mass"}, mass_rows);
    std::vector<double> xs(trace.radii.begin(), trace.radii.end());
    csv::write_two_column(out_path(args.out, "heat_trace.dat"), xs, trace.values);

    std::cout << "p_t(" << x << "," << y << ") at t=" << csv::format(args.t)
              << ": final " << csv::format(trace.final_value())
              << (trace.converged ? " (converged, lower bound)" : " (not converged, lower bound)")
              << "\n";
    if (trace.capacity_hit) {
        std::cout << "capacity cap reached before convergence; trace is inconclusive\n";
        return kExitInconclusive;
    }
    return kExitOk;
}

struct DiagnoseArgs {
    std::string graph;
    double lambda = -1.0;
    std::string radii;  // empty: family-dependent default
    double tol = 1e-8;
    std::string out = ".";
};

int run_diagnose(const DiagnoseArgs& args) {
    if (args.tol <= 0) throw std::invalid_argument("tol must be > 0");
    if (!(args.lambda < 0)) throw std::invalid_argument("lambda must be < 0");
    const LazyGraph g = load_graph(args.graph);
    DiagnosticOptions options;
    options.tol = args.tol;
    options.capacity = default_capacity();
    const std::vector<int> radii =
        args.radii.empty() ? default_radius_schedule(g) : parse_radius_schedule(args.radii);
    const DiagnosisReport report = diagnose(g, args.lambda, radii, options);

    std::ofstream json_out(out_path(args.out, "diagnosis.json"));
    json_out << to_json(report).dump(2) << "\n";

    if (report.trace && !report.trace->values.empty()) {
        std::vector<std::vector<std::string>> rows;
        std::vector<double> xs;
        for (std::size_t i = 0; i < report.trace->radii.size(); ++i) {
            rows.push_back({std::to_string(report.trace->radii[i]),
                            csv::format(report.trace->values[i]),
                            csv::format(report.trace->deltas[i])});
            xs.push_back(report.trace->radii[i]);
        }
        csv::write_file(out_path(args.out, "diagnostic_trace.csv"), {"radius", "value", "delta"},
                        rows);
        csv::write_two_column(out_path(args.out, "diagnostic_trace.dat"), xs,
                              report.trace->values);
    }

    std::cout << "verdict: " << to_string(report.verdict) << "\n";
    for (const auto& criterion : report.criteria) {
        std::cout << "  " << criterion.name << ": "
                  << (criterion.applicable ? to_string(criterion.verdict) : "not applicable")
                  << " -- " << criterion.evidence << "\n";
    }
    if (report.trace && !report.trace->values.empty()) {
        std::cout << "  v_r(root) trace:";
        for (double v : report.trace->values) std::cout << " " << csv::format(v);
        std::cout << "\n";
    }
    return report.verdict == Verdict::Inconclusive ? kExitInconclusive : kExitOk;
}

struct SpectrumArgs {
    std::string graph;
    std::string radii = "2:8";
    std::string out = ".";
};

int run_spectrum(const SpectrumArgs& args) {
    const LazyGraph g = load_graph(args.graph);
    const std::vector<int> radii = parse_radius_schedule(args.radii);
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (radii[i] <= radii[i - 1]) {
            throw std::invalid_argument("radius schedule must be strictly increasing");
        }
    }
    const std::size_t capacity = default_capacity();

    std::vector<std::vector<std::string>> rows;
    std::vector<double> xs, ys;
    bool capacity_hit = false;
    for (int radius : radii) {
        Ball ball;
        try {
            ball = materialize_ball(g, radius, capacity);
        } catch (const CapacityError&) {
            capacity_hit = true;
            break;
        }
        const ReducedLaplacian L = assemble_reduced(ball);
        const double lambda0 = lambda0_value(L);
        const GeometricBounds bounds = geometric_bounds(valence_profile(ball), ball);

        // Cheeger sample: the sub-ball of radius r-1 inside this ball.
        std::vector<int> sub_ball;
        for (int v = 0; v < ball.size(); ++v) {
            if (ball.distance(v) <= radius - 1) sub_ball.push_back(v);
        }
        double area_ratio = 0, volume_ratio = 0;
        if (!sub_ball.empty()) {
            const CheegerRatios ratios = cheeger_ratios(ball, sub_ball);
            area_ratio = ratios.area_ratio();
            volume_ratio = ratios.volume_ratio();
        }
        rows.push_back({std::to_string(radius), csv::format(lambda0),
                        csv::format(bounds.applicable ? bounds.bound_full : 0.0),
                        csv::format(area_ratio), csv::format(volume_ratio)});
        xs.push_back(radius);
        ys.push_back(lambda0);
        std::cout << "radius " << radius << ": lambda0 = " << csv::format(lambda0)
                  << ", geometric bound = "
                  << csv::format(bounds.applicable ? bounds.bound_full : 0.0) << "\n";
    }
    csv::write_file(out_path(args.out, "lambda0_trace.csv"),
                    {"radius", "lambda0", "geometric_bound", "cheeger_area_ratio",
                     "cheeger_volume_ratio"},
                    rows);
    csv::write_two_column(out_path(args.out, "lambda0_trace.dat"), xs, ys);
    if (capacity_hit) {
        std::cout << "capacity cap reached; the trace is partial and inconclusive\n";
        return kExitInconclusive;
    }
    return kExitOk;
}

struct CompareArgs {
    std::string base;
    std::string model;
    std::string mode = "comp2";
    int radius = 6;
    std::string t_grid = "0.1,0.5,1,2,5";
    std::string out = ".";
};

int run_compare(const CompareArgs& args) {
    const LazyGraph base = load_graph(args.base);
    const BranchingLaw law = parse_branching_law(nlohmann::json::parse(args.model));
    const std::vector<double> t_grid = parse_t_grid(args.t_grid);
    const Ball ball = materialize_ball(base, args.radius, default_capacity());

    CompareReport report;
    if (args.mode == "comp1") {
        report = compare_embedded(ball, law, t_grid, CompareMode::ModelBelow);
    } else if (args.mode == "comp2") {
        report = compare_embedded(ball, law, t_grid, CompareMode::ModelAbove);
    } else if (args.mode == "generalized") {
        report = compare_generalized_graph(ball, law, t_grid);
    } else {
        throw std::invalid_argument("mode must be comp1, comp2 or generalized");
    }

    std::vector<std::vector<std::string>> rows;
    for (const auto& row : report.rows) {
        rows.push_back({std::to_string(row.r), csv::format(row.t), csv::format(row.rho),
                        csv::format(row.p_min), csv::format(row.p_max), csv::format(row.margin)});
    }
    csv::write_file(out_path(args.out, "compare.csv"),
                    {"r", "t", "rho", "p_min_on_sphere", "p_max_on_sphere", "margin"}, rows);
    std::cout << "mode " << args.mode << ", radius " << args.radius
              << ": min margin = " << csv::format(report.min_margin) << "\n";
    return kExitOk;
}

struct VerifyArgs {
    std::string graph;
    int radius = 4;
    std::string t_grid = "0.1,1,10";
    int pairs = 1000;
    unsigned long long seed = 20240901;
};

int run_verify(const VerifyArgs& args) {
    const LazyGraph g = load_graph(args.graph);
    const std::vector<double> t_grid = parse_t_grid(args.t_grid);
    const std::size_t capacity = default_capacity();
    const auto ball = std::make_shared<Ball>(materialize_ball(g, args.radius, capacity));

    bool all_pass = true;
    auto check = [&](const std::string& name, double violation, double tolerance) {
        const bool pass = violation <= tolerance;
        all_pass &= pass;
        std::cout << (pass ? "PASS " : "FAIL ") << name << ": max violation "
                  << csv::format(violation) << " (tolerance " << csv::format(tolerance) << ")\n";
    };

    // Adjacency symmetry through the oracle, over all recorded edges.
    double adjacency_violations = 0;
    for (const auto& [a, b] : ball->edges()) {
        const auto na = g.neighbors(ball->id(a)).neighbors;
        const auto nb = g.neighbors(ball->id(b)).neighbors;
        const bool ab = std::find(na.begin(), na.end(), ball->id(b)) != na.end();
        const bool ba = std::find(nb.begin(), nb.end(), ball->id(a)) != nb.end();
        if (!ab || !ba) adjacency_violations += 1;
    }
    check("adjacency-symmetry", adjacency_violations, 0);

    double sphere_partition = 0;
    std::size_t counted = 0;
    for (const auto& sphere : ball->spheres()) counted += sphere.size();
    sphere_partition = static_cast<double>(counted) - ball->size();
    check("sphere-partition", std::abs(sphere_partition), 0);

    const HeatKernelBall kernel(ball);
    const KernelPropertyReport properties = verify_kernel_properties(kernel, t_grid);
    check("kernel-initial", properties.initial, 1e-9);
    check("kernel-symmetry", properties.symmetry, 1e-9);
    check("kernel-boundary", properties.boundary, 0);
    check("kernel-semigroup", properties.semigroup, 1e-9);
    check("kernel-positivity", properties.positivity, 1e-9);
    check("kernel-heat-equation", properties.heat_equation, 1e-9);

    // Eigendecomposition kernel against the power-series semigroup.
    double series_gap = 0;
    for (double t : t_grid) {
        series_gap = std::max(series_gap, (kernel.interior_matrix(t) -
                                           semigroup_series(kernel.reduced(), t))
                                              .cwiseAbs()
                                              .maxCoeff());
    }
    check("kernel-vs-series", series_gap, 1e-9);

    // Green identity on random interior-supported pairs, against the
    // scale-aware bound 1e-12 * |f| * |g| * max valence.
    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    long long max_valence = 1;
    for (int v = 0; v < ball->size(); ++v) max_valence = std::max(max_valence, ball->valence(v));
    double green_excess = 0;
    for (int trial = 0; trial < args.pairs; ++trial) {
        VertexFunction f = VertexFunction::Zero(ball->size());
        VertexFunction h = VertexFunction::Zero(ball->size());
        for (int v : ball->interior()) {
            f[v] = uniform(rng);
            h[v] = uniform(rng);
        }
        const double bound = 1e-12 * f.norm() * h.norm() * static_cast<double>(max_valence);
        green_excess = std::max(green_excess, green_residual(*ball, f, h) - bound);
    }
    check("green-identity", std::max(0.0, green_excess), 0);

    check("bounded-laplacian-norm", std::max(0.0, bounded_laplacian_norm_check(*ball) - 2.0),
          1e-10);

    // Monotonicity in the radius at the root probe.
    try {
        const auto bigger = std::make_shared<Ball>(materialize_ball(g, args.radius + 1, capacity));
        const HeatKernelBall bigger_kernel(bigger);
        double violation = 0;
        for (double t : t_grid) {
            const double small_value = kernel.value(ball->root_index(), ball->root_index(), t);
            const double big_value =
                bigger_kernel.value(bigger->root_index(), bigger->root_index(), t);
            violation = std::max(violation, small_value - big_value);
        }
        check("exhaustion-monotonicity", violation, 1e-12);
    } catch (const CapacityError&) {
        std::cout << "SKIP exhaustion-monotonicity: capacity cap at radius "
                  << args.radius + 1 << "\n";
    }

    return all_pass ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat kernels and stochastic completeness on infinite locally finite graphs"};
    app.require_subcommand(1);

    HeatArgs heat_args;
    auto* heat = app.add_subcommand(
        "heat", "Dirichlet heat kernel exhaustion trace and heat mass at a probe vertex");
    heat->add_option("--graph", heat_args.graph,
                     "graph spec: alias (ray|line|binary|tree3|ternary|grafted), inline JSON or file")
        ->required();
    heat->add_option("--t", heat_args.t, "diffusion time");
    heat->add_option("--radii", heat_args.radii,
                     "radius schedule a:b[:step] or comma list; default: arithmetic for "
                     "slow-growing graphs, geometric for fast-growing ones");
    heat->add_option("--probe", heat_args.probe, "probe vertex (or x,y pair); 'root' is the root");
    heat->add_option("--tol", heat_args.tol, "convergence tolerance on successive deltas");
    heat->add_option("--out", heat_args.out, "output directory");

    DiagnoseArgs diagnose_args;
    auto* diag = app.add_subcommand("diagnose", "Stochastic completeness diagnosis");
    diag->add_option("--graph", diagnose_args.graph, "graph spec")->required();
    diag->add_option("--lambda", diagnose_args.lambda, "negative lambda for the diagnostics");
    diag->add_option("--radii", diagnose_args.radii, "radius schedule for the numeric trace");
    diag->add_option("--tol", diagnose_args.tol, "stabilization tolerance");
    diag->add_option("--out", diagnose_args.out, "output directory");

    SpectrumArgs spectrum_args;
    auto* spec = app.add_subcommand("spectrum", "Dirichlet lambda_0 exhaustion with bounds");
    spec->add_option("--graph", spectrum_args.graph, "graph spec")->required();
    spec->add_option("--radii", spectrum_args.radii, "radius schedule");
    spec->add_option("--out", spectrum_args.out, "output directory");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "Heat kernel comparison against a model tree");
    compare->add_option("--base", compare_args.base, "graph to compare")->required();
    compare->add_option("--model", compare_args.model, "branching law JSON")->required();
    compare->add_option("--mode", compare_args.mode, "comp1 | comp2 | generalized");
    compare->add_option("--radius", compare_args.radius, "matched truncation radius");
    compare->add_option("--t", compare_args.t_grid, "comma list of times");
    compare->add_option("--out", compare_args.out, "output directory");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run the invariant suite on a graph");
    verify->add_option("--graph", verify_args.graph, "graph spec")->required();
    verify->add_option("--radius", verify_args.radius, "ball radius");
    verify->add_option("--t", verify_args.t_grid, "comma list of times");
    verify->add_option("--pairs", verify_args.pairs, "random Green-identity pairs");
    verify->add_option("--seed", verify_args.seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (heat->parsed()) return run_heat(heat_args);
        if (diag->parsed()) return run_diagnose(diagnose_args);
        if (spec->parsed()) return run_spectrum(spectrum_args);
        if (compare->parsed()) return run_compare(compare_args);
        if (verify->parsed()) return run_verify(verify_args);
    } catch (const CapacityError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
