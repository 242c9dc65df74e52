#include "ctsim/instance_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ctsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("instance parse error: " + what);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

LoadedInstance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(e.what());
    }
    if (!doc.is_object()) fail("top level must be an object");

    static const std::set<std::string> known = {"kind",  "vertices",       "edges",
                                                "k",     "alpha",          "B",
                                                "outcome_domain", "vertex_costs", "name"};
    for (const auto& [key, _] : doc.items())
        if (!known.count(key)) fail("unknown field: " + key);

    ProblemInstance inst;
    if (!doc.contains("kind") || !doc["kind"].is_string()) fail("missing string field: kind");
    inst.kind = kind_from_name(doc["kind"].get<std::string>());
    inst.name = doc.value("name", std::string("instance"));

    if (!doc.contains("vertices")) fail("missing field: vertices");
    if (inst.kind == ProblemKind::PMC) {
        if (!doc["vertices"].is_array() || doc["vertices"].size() != 2)
            fail("pmc vertices must be [left, right]");
        inst.left_size = doc["vertices"][0].get<int>();
        inst.num_vertices = inst.left_size + doc["vertices"][1].get<int>();
    } else {
        if (!doc["vertices"].is_number_integer()) fail("vertices must be an integer count");
        inst.num_vertices = doc["vertices"].get<int>();
    }

    if (!doc.contains("edges") || !doc["edges"].is_array()) fail("missing array field: edges");
    const bool vertex_arms = inst.kind == ProblemKind::VertexCover;
    std::vector<Real> edge_means;
    for (const auto& item : doc["edges"]) {
        if (!item.is_array() || item.size() != (vertex_arms ? 2u : 3u))
            fail(vertex_arms ? "vertex-cover edges are [u,v]" : "edges are [u,v,mean]");
        inst.edges.push_back({item[0].get<int>(), item[1].get<int>()});
        if (!vertex_arms) edge_means.push_back(item[2].get<Real>());
    }
    if (vertex_arms) {
        if (!doc.contains("vertex_costs") || !doc["vertex_costs"].is_array())
            fail("vertex cover needs vertex_costs");
        if (static_cast<int>(doc["vertex_costs"].size()) != inst.num_vertices)
            fail("vertex_costs must have one entry per vertex");
        inst.true_means.resize(inst.num_vertices);
        for (int v = 0; v < inst.num_vertices; ++v)
            inst.true_means[v] = doc["vertex_costs"][v].get<Real>();
    } else {
        if (doc.contains("vertex_costs")) fail("vertex_costs only applies to vertex cover");
        inst.true_means = Eigen::Map<Vector>(edge_means.data(), edge_means.size());
    }

    const bool needs_k = inst.kind == ProblemKind::PMC || inst.kind == ProblemKind::OIM ||
                         inst.kind == ProblemKind::KCenter;
    if (needs_k) {
        if (!doc.contains("k")) fail("missing field: k");
        inst.k = doc["k"].get<int>();
    } else if (doc.contains("k")) {
        fail("k only applies to pmc, oim and kcenter");
    }

    inst.alpha = doc.contains("alpha") ? doc["alpha"].get<Real>() : default_alpha(inst.kind);
    if (doc.contains("B")) {
        const auto& b = doc["B"];
        if (!b.is_array()) fail("B must be an array");
        inst.smoothness_b.resize(b.size());
        for (size_t i = 0; i < b.size(); ++i) inst.smoothness_b[static_cast<int>(i)] = b[i].get<Real>();
    }
    if (doc.contains("outcome_domain")) {
        const auto& d = doc["outcome_domain"];
        if (!d.is_array() || d.size() != 2) fail("outcome_domain must be [lo, hi]");
        inst.outcome_domain = {d[0].get<Real>(), d[1].get<Real>()};
    } else if (inst.kind == ProblemKind::PMC || inst.kind == ProblemKind::OIM) {
        inst.outcome_domain = {0.0, 1.0};
    } else {
        inst.outcome_domain = {0.0, std::max(1.0, inst.true_means.size() ? inst.true_means.maxCoeff() : 1.0)};
    }

    LoadedInstance out;
    out.warnings = finalize_instance(inst);
    out.instance = std::move(inst);
    return out;
}

LoadedInstance load_instance(const std::string& path) {
    LoadedInstance out = parse_instance(read_file(path));
    if (out.instance.name == "instance") {
        const size_t slash = path.find_last_of('/');
        std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
        const size_t dot = stem.find_last_of('.');
        out.instance.name = dot == std::string::npos ? stem : stem.substr(0, dot);
    }
    return out;
}

std::string instance_to_json(const ProblemInstance& inst) {
    json doc;
    doc["kind"] = kind_name(inst.kind);
    doc["name"] = inst.name;
    if (inst.kind == ProblemKind::PMC)
        doc["vertices"] = json::array({inst.left_size, inst.right_size()});
    else
        doc["vertices"] = inst.num_vertices;
    json edges = json::array();
    for (size_t e = 0; e < inst.edges.size(); ++e) {
        if (inst.kind == ProblemKind::VertexCover)
            edges.push_back(json::array({inst.edges[e].u, inst.edges[e].v}));
        else
            edges.push_back(json::array(
                {inst.edges[e].u, inst.edges[e].v, inst.true_means[static_cast<int>(e)]}));
    }
    doc["edges"] = edges;
    if (inst.kind == ProblemKind::VertexCover) {
        json costs = json::array();
        for (int v = 0; v < inst.num_vertices; ++v) costs.push_back(inst.true_means[v]);
        doc["vertex_costs"] = costs;
    }
    if (inst.kind == ProblemKind::PMC || inst.kind == ProblemKind::OIM ||
        inst.kind == ProblemKind::KCenter)
        doc["k"] = inst.k;
    doc["alpha"] = inst.alpha;
    json b = json::array();
    for (int i = 0; i < inst.smoothness_b.size(); ++i) b.push_back(inst.smoothness_b[i]);
    doc["B"] = b;
    doc["outcome_domain"] = json::array({inst.outcome_domain.lo, inst.outcome_domain.hi});
    return doc.dump(2) + "\n";
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << instance_to_json(inst);
}

Vector load_mean_vector(const std::string& path, int expected_arms) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("mean vector parse error: ") + e.what());
    }
    if (!doc.is_array() || static_cast<int>(doc.size()) != expected_arms)
        throw std::invalid_argument("mean vector must be an array with one value per arm");
    Vector mu(expected_arms);
    for (int i = 0; i < expected_arms; ++i) mu[i] = doc[i].get<Real>();
    return mu;
}

}  // namespace ctsim
