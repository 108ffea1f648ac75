#include "heatgraph/graph_io.hpp"

#include <fstream>

namespace heatgraph {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw std::invalid_argument("graph spec: field '" + field + "' " + why);
}

long long require_integer(const json& spec, const std::string& field) {
    if (!spec.contains(field)) bad_field(field, "is missing");
    if (!spec[field].is_number_integer()) bad_field(field, "must be an integer");
    return spec[field].get<long long>();
}

VertexId id_from_json(const json& value, const std::string& field) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    bad_field(field, "must be a vertex id (string or integer)");
}

}  // namespace

BranchingLaw parse_branching_law(const json& spec) {
    if (!spec.is_object()) throw std::invalid_argument("graph spec: 'branching' must be an object");
    if (!spec.contains("kind") || !spec["kind"].is_string()) bad_field("kind", "is missing");
    const std::string kind = spec["kind"].get<std::string>();
    const long long root_valence = require_integer(spec, "root_valence");

    if (kind == "constant") {
        return BranchingLaw::constant(require_integer(spec, "value"), root_valence);
    }
    if (kind == "affine") {
        return BranchingLaw::affine(require_integer(spec, "slope"),
                                    require_integer(spec, "intercept"), root_valence);
    }
    if (kind == "polynomial") {
        if (!spec.contains("coefficients") || !spec["coefficients"].is_array()) {
            bad_field("coefficients", "must be an array of integers");
        }
        std::vector<long long> coefficients;
        for (const auto& c : spec["coefficients"]) {
            if (!c.is_number_integer()) bad_field("coefficients", "must be an array of integers");
            coefficients.push_back(c.get<long long>());
        }
        return BranchingLaw::polynomial(std::move(coefficients), root_valence);
    }
    if (kind == "exponential") {
        const long long scale =
            spec.contains("scale") ? require_integer(spec, "scale") : 1;
        return BranchingLaw::exponential(require_integer(spec, "base"), root_valence, scale);
    }
    if (kind == "explicit") {
        if (!spec.contains("values") || !spec["values"].is_array()) {
            bad_field("values", "must be an array of integers");
        }
        std::vector<long long> values;
        for (const auto& v : spec["values"]) {
            if (!v.is_number_integer()) bad_field("values", "must be an array of integers");
            values.push_back(v.get<long long>());
        }
        std::optional<BranchingLaw> tail;
        if (spec.contains("tail") && !spec["tail"].is_null()) {
            json tail_spec = spec["tail"];
            if (!tail_spec.contains("root_valence")) tail_spec["root_valence"] = root_valence;
            tail = parse_branching_law(tail_spec);
        }
        return BranchingLaw::explicit_prefix(std::move(values), root_valence, std::move(tail));
    }
    bad_field("kind", "has unknown value '" + kind + "'");
}

LazyGraph parse_graph_spec(const json& spec) {
    if (!spec.is_object()) throw std::invalid_argument("graph spec must be a JSON object");
    if (!spec.contains("family") || !spec["family"].is_string()) bad_field("family", "is missing");
    const std::string family = spec["family"].get<std::string>();

    if (family == "model_tree") {
        if (!spec.contains("branching")) bad_field("branching", "is missing");
        return build_model_tree(parse_branching_law(spec["branching"]));
    }
    if (family == "graft_ray") {
        if (!spec.contains("base")) bad_field("base", "is missing");
        LazyGraph base = parse_graph_spec(spec["base"]);
        if (spec.contains("attach_at")) {
            return graft_ray(base, id_from_json(spec["attach_at"], "attach_at"));
        }
        return graft_ray(base);
    }
    if (family == "explicit") {
        if (!spec.contains("edges") || !spec["edges"].is_array()) {
            bad_field("edges", "must be an array of vertex pairs");
        }
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (const auto& e : spec["edges"]) {
            if (!e.is_array() || e.size() != 2) bad_field("edges", "must be an array of pairs");
            edges.emplace_back(id_from_json(e[0], "edges"), id_from_json(e[1], "edges"));
        }
        if (!spec.contains("root")) bad_field("root", "is missing");
        const VertexId root = id_from_json(spec["root"], "root");
        std::unordered_map<VertexId, long long> exterior;
        if (spec.contains("exterior_degree")) {
            if (!spec["exterior_degree"].is_object()) {
                bad_field("exterior_degree", "must be an object of id -> degree");
            }
            for (const auto& [id, degree] : spec["exterior_degree"].items()) {
                if (!degree.is_number_integer()) {
                    bad_field("exterior_degree", "must map ids to integers");
                }
                exterior[id] = degree.get<long long>();
            }
        }
        return build_explicit_graph(edges, root, exterior);
    }
    bad_field("family", "has unknown value '" + family + "'");
}

LazyGraph load_graph(const std::string& text) {
    static const std::unordered_map<std::string, const char*> aliases = {
        {"ray", R"({"family":"model_tree","branching":{"kind":"constant","value":1,"root_valence":1}})"},
        {"line", R"({"family":"graft_ray","base":{"family":"model_tree","branching":{"kind":"constant","value":1,"root_valence":1}}})"},
        {"binary", R"({"family":"model_tree","branching":{"kind":"constant","value":2,"root_valence":3}})"},
        {"tree3", R"({"family":"model_tree","branching":{"kind":"constant","value":2,"root_valence":3}})"},
        {"ternary", R"({"family":"model_tree","branching":{"kind":"constant","value":3,"root_valence":3}})"},
        {"grafted", R"({"family":"graft_ray","base":{"family":"model_tree","branching":{"kind":"exponential","base":2,"root_valence":2}}})"},
    };
    auto alias = aliases.find(text);
    if (alias != aliases.end()) return parse_graph_spec(json::parse(alias->second));
    if (!text.empty() && text.front() == '{') return parse_graph_spec(json::parse(text));

    std::ifstream in(text);
    if (!in) throw std::invalid_argument("cannot open graph spec file '" + text + "'");
    json spec;
    try {
        in >> spec;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("graph spec file '" + text + "': " + e.what());
    }
    return parse_graph_spec(spec);
}

json to_json(const DiagnosticTrace& trace) {
    return json{{"radii", trace.radii},
                {"values", trace.values},
                {"deltas", trace.deltas},
                {"stabilized", trace.stabilized},
                {"capacity_hit", trace.capacity_hit},
                {"limit_estimate", trace.limit_estimate()}};
}

json to_json(const DiagnosisReport& report) {
    json criteria = json::array();
    for (const auto& criterion : report.criteria) {
        criteria.push_back({{"name", criterion.name},
                            {"applicable", criterion.applicable},
                            {"verdict", to_string(criterion.verdict)},
                            {"conclusive", criterion.conclusive},
                            {"evidence", criterion.evidence}});
    }
    json result{{"verdict", to_string(report.verdict)},
                {"lambda", report.lambda},
                {"radii", report.radii},
                {"criteria", criteria}};
    if (report.trace) result["trace"] = to_json(*report.trace);
    return result;
}

}  // namespace heatgraph
