#include "ctsim/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctsim {

const char* kind_name(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::PMC: return "pmc";
        case ProblemKind::OIM: return "oim";
        case ProblemKind::KCenter: return "kcenter";
        case ProblemKind::VertexCover: return "vertexcover";
        case ProblemKind::MaxCut: return "maxcut";
        case ProblemKind::TSP: return "tsp";
    }
    return "?";
}

ProblemKind kind_from_name(const std::string& name) {
    if (name == "pmc") return ProblemKind::PMC;
    if (name == "oim") return ProblemKind::OIM;
    if (name == "kcenter") return ProblemKind::KCenter;
    if (name == "vertexcover") return ProblemKind::VertexCover;
    if (name == "maxcut") return ProblemKind::MaxCut;
    if (name == "tsp") return ProblemKind::TSP;
    throw std::invalid_argument("unknown problem kind: " + name);
}

bool is_minimization(ProblemKind kind) {
    return kind == ProblemKind::KCenter || kind == ProblemKind::VertexCover ||
           kind == ProblemKind::TSP;
}

Real default_alpha(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::PMC:
        case ProblemKind::OIM: return 1.0 - std::exp(-1.0);
        case ProblemKind::KCenter:
        case ProblemKind::VertexCover: return 0.5;
        case ProblemKind::MaxCut: return gw_alpha();
        case ProblemKind::TSP: return 2.0 / 3.0;
    }
    return 1.0;
}

Real gw_alpha() {
    // (2/pi) min_{0<theta<=pi} theta / (1 - cos theta); the objective is
    // unimodal on (0, pi], so ternary search converges.
    static const Real value = [] {
        auto f = [](Real t) { return t / (1.0 - std::cos(t)); };
        Real lo = 0.1, hi = M_PI;
        for (int it = 0; it < 200; ++it) {
            Real m1 = lo + (hi - lo) / 3.0;
            Real m2 = hi - (hi - lo) / 3.0;
            if (f(m1) < f(m2)) hi = m2; else lo = m1;
        }
        return 2.0 / M_PI * f(0.5 * (lo + hi));
    }();
    return value;
}

int ProblemInstance::arm_of_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= edge_index_.rows() || v >= edge_index_.cols()) return -1;
    return edge_index_(u, v);
}

Real ProblemInstance::edge_value(const Vector& mu, int u, int v) const {
    int arm = arm_of_edge(u, v);
    if (arm < 0) throw std::invalid_argument("edge_value: no such edge");
    return mu[arm];
}

void ProblemInstance::build_caches() {
    const int n_edges = static_cast<int>(edges.size());
    int rows = num_vertices, cols = num_vertices;
    if (kind == ProblemKind::PMC) {
        rows = left_size;
        cols = right_size();
    }
    edge_index_ = IndexMatrix::Constant(std::max(rows, 1), std::max(cols, 1), -1);
    for (int e = 0; e < n_edges; ++e) {
        edge_index_(edges[e].u, edges[e].v) = e;
        if (kind != ProblemKind::PMC && kind != ProblemKind::OIM)
            edge_index_(edges[e].v, edges[e].u) = e;
    }
    out_edges_.assign(num_vertices, {});
    cover_edges_.assign(kind == ProblemKind::PMC ? right_size() : 0, {});
    left_arms_.assign(kind == ProblemKind::PMC ? left_size : 0, {});
    for (int e = 0; e < n_edges; ++e) {
        if (kind == ProblemKind::OIM) {
            out_edges_[edges[e].u].emplace_back(edges[e].v, e);
        } else if (kind == ProblemKind::PMC) {
            cover_edges_[edges[e].v].emplace_back(edges[e].u, e);
            left_arms_[edges[e].u].push_back(e);
        }
    }
}

int max_reach(const ProblemInstance& inst, const Vector& means) {
    int best = 1;
    for (int s = 0; s < inst.num_vertices; ++s) {
        std::vector<char> seen(inst.num_vertices, 0);
        std::vector<int> stack{s};
        seen[s] = 1;
        int count = 0;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            ++count;
            for (const auto& [v, arm] : inst.out_edges(u))
                if (means[arm] > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        best = std::max(best, count);
    }
    return best;
}

Vector default_smoothness(const ProblemInstance& inst) {
    if (inst.kind == ProblemKind::OIM)
        return Vector::Constant(inst.arm_count(), static_cast<Real>(max_reach(inst, inst.true_means)));
    return Vector::Ones(inst.arm_count());
}

namespace {

void require(bool ok, const std::string& constraint) {
    if (!ok) throw std::invalid_argument("instance constraint violated: " + constraint);
}

void check_triangle_inequality(const ProblemInstance& inst) {
    const int n = inst.num_vertices;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                if (a == b || b == c || a == c) continue;
                Real lhs = inst.edge_value(inst.true_means, a, c);
                Real rhs = inst.edge_value(inst.true_means, a, b) +
                           inst.edge_value(inst.true_means, b, c);
                require(lhs <= rhs + kCheckTol, "triangle inequality");
            }
}

}  // namespace

std::vector<std::string> finalize_instance(ProblemInstance& inst) {
    std::vector<std::string> warnings;
    require(inst.num_vertices > 0, "num_vertices > 0");
    require(inst.alpha > 0.0 && inst.alpha <= 1.0, "alpha in (0,1]");
    require(inst.outcome_domain.hi > inst.outcome_domain.lo, "outcome_domain nonempty");

    const bool bipartite = inst.kind == ProblemKind::PMC;
    const bool directed = inst.kind == ProblemKind::OIM;
    if (bipartite) {
        require(inst.left_size > 0 && inst.left_size < inst.num_vertices, "bipartite sides nonempty");
    } else {
        inst.left_size = 0;
    }

    // Canonical edge order defines the arm indexing.
    std::vector<int> perm(inst.edges.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    if (!bipartite && !directed) {
        for (auto& e : inst.edges) {
            require(e.u != e.v, "no self loops");
            if (e.u > e.v) std::swap(e.u, e.v);
        }
    }
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
        if (inst.edges[a].u != inst.edges[b].u) return inst.edges[a].u < inst.edges[b].u;
        return inst.edges[a].v < inst.edges[b].v;
    });
    if (inst.kind != ProblemKind::VertexCover)
        require(static_cast<int>(inst.true_means.size()) == static_cast<int>(inst.edges.size()),
                "one mean per edge arm");
    else
        require(static_cast<int>(inst.true_means.size()) == inst.num_vertices,
                "one mean per vertex arm");
    std::vector<EdgeRef> sorted_edges(inst.edges.size());
    Vector sorted_means = inst.true_means;
    for (size_t i = 0; i < perm.size(); ++i) {
        sorted_edges[i] = inst.edges[perm[i]];
        if (inst.kind != ProblemKind::VertexCover) sorted_means[static_cast<int>(i)] = inst.true_means[perm[i]];
    }
    inst.edges = std::move(sorted_edges);
    inst.true_means = std::move(sorted_means);

    for (size_t i = 0; i + 1 < inst.edges.size(); ++i)
        require(inst.edges[i].u != inst.edges[i + 1].u || inst.edges[i].v != inst.edges[i + 1].v,
                "no duplicate edges");
    const int hi_u = bipartite ? inst.left_size : inst.num_vertices;
    const int hi_v = bipartite ? inst.right_size() : inst.num_vertices;
    for (const auto& e : inst.edges) {
        require(e.u >= 0 && e.u < hi_u, "edge endpoint in range");
        require(e.v >= 0 && e.v < hi_v, "edge endpoint in range");
        if (directed) require(e.u != e.v, "no self loops");
    }

    if (inst.smoothness_b.size() == 0) {
        inst.build_caches();
        inst.smoothness_b = default_smoothness(inst);
    }
    require(static_cast<int>(inst.smoothness_b.size()) == inst.arm_count(), "B has one entry per arm");
    require((inst.smoothness_b.array() >= 0.0).all(), "B nonnegative");

    switch (inst.kind) {
        case ProblemKind::PMC:
        case ProblemKind::OIM:
            require((inst.true_means.array() >= 0.0).all() && (inst.true_means.array() <= 1.0).all(),
                    "edge probabilities in [0,1]");
            require(inst.k >= 1, "k >= 1");
            require(inst.k <= (bipartite ? inst.left_size : inst.num_vertices), "k within ground set");
            break;
        case ProblemKind::KCenter:
        case ProblemKind::TSP:
            require(static_cast<int>(inst.edges.size()) ==
                        inst.num_vertices * (inst.num_vertices - 1) / 2,
                    "complete graph");
            require((inst.true_means.array() >= 0.0).all(), "distances nonnegative");
            if (inst.kind == ProblemKind::KCenter)
                require(inst.k >= 1 && inst.k <= inst.num_vertices, "k in [1, |V|]");
            else
                require(inst.num_vertices >= 3, "TSP needs >= 3 vertices");
            break;
        case ProblemKind::VertexCover:
        case ProblemKind::MaxCut:
            require((inst.true_means.array() >= 0.0).all(), "weights nonnegative");
            break;
    }
    for (int i = 0; i < inst.true_means.size(); ++i)
        require(inst.outcome_domain.contains(inst.true_means[i], kCheckTol),
                "means inside outcome_domain");

    inst.build_caches();
    if (inst.kind == ProblemKind::KCenter || inst.kind == ProblemKind::TSP)
        check_triangle_inequality(inst);
    if (inst.kind == ProblemKind::OIM) {
        for (int e = 0; e < inst.arm_count(); ++e)
            if (inst.true_means[e] == 0.0) {
                warnings.push_back("oim edge with zero probability: p* = 0, its outcome can never be observed");
                break;
            }
    }
    return warnings;
}

}  // namespace ctsim
