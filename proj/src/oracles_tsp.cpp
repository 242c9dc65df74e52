#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ctsim/oracles.hpp"

namespace ctsim {

// Prim MST on the complete graph; returns edges (parent, child).
std::vector<std::pair<int, int>> minimum_spanning_tree(const ProblemInstance& inst,
                                                       const Vector& mu) {
    const int n = inst.num_vertices;
    std::vector<char> in_tree(n, 0);
    std::vector<Real> key(n, std::numeric_limits<Real>::infinity());
    std::vector<int> parent(n, -1);
    key[0] = 0.0;
    std::vector<std::pair<int, int>> edges;
    for (int step = 0; step < n; ++step) {
        int u = -1;
        for (int v = 0; v < n; ++v)
            if (!in_tree[v] && (u < 0 || key[v] < key[u])) u = v;
        in_tree[u] = 1;
        if (parent[u] >= 0) edges.emplace_back(parent[u], u);
        for (int v = 0; v < n; ++v)
            if (!in_tree[v]) {
                const Real w = inst.edge_value(mu, u, v);
                if (w < key[v]) {
                    key[v] = w;
                    parent[v] = u;
                }
            }
    }
    return edges;
}

// Exact minimum-weight perfect matching over <= 16 vertices by subset DP.
std::vector<std::pair<int, int>> min_weight_matching(const ProblemInstance& inst, const Vector& mu,
                                                     const std::vector<int>& odd) {
    const int q = static_cast<int>(odd.size());
    if (q == 0) return {};
    if (q > 16)
        throw TooLargeError("matching DP refused: " + std::to_string(q) + " odd vertices exceed 16",
                            std::uint64_t(1) << q);
    const std::uint32_t full = (1u << q) - 1;
    std::vector<Real> dp(full + 1, std::numeric_limits<Real>::infinity());
    std::vector<int> choice(full + 1, -1);
    dp[0] = 0.0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int i = std::countr_zero(mask);
        if (!(mask >> i & 1u)) continue;
        for (int j = i + 1; j < q; ++j) {
            if (!(mask >> j & 1u)) continue;
            const std::uint32_t rest = mask & ~(1u << i) & ~(1u << j);
            const Real cand = dp[rest] + inst.edge_value(mu, odd[i], odd[j]);
            if (cand < dp[mask]) {
                dp[mask] = cand;
                choice[mask] = j;
            }
        }
    }
    std::vector<std::pair<int, int>> pairs;
    std::uint32_t mask = full;
    while (mask) {
        const int i = std::countr_zero(mask);
        const int j = choice[mask];
        pairs.emplace_back(odd[i], odd[j]);
        mask &= ~(1u << i) & ~(1u << static_cast<unsigned>(j));
    }
    return pairs;
}

namespace {

struct CircuitStep {
    int from, to, edge;
};

// Hierholzer Eulerian circuit over the multigraph; every vertex has even
// degree and the graph is connected, so a single circuit covers all edges.
std::vector<CircuitStep> eulerian_circuit(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        adj[edges[e].first].emplace_back(edges[e].second, e);
        adj[edges[e].second].emplace_back(edges[e].first, e);
    }
    std::vector<int> next(n, 0);
    std::vector<char> used(edges.size(), 0);
    std::vector<std::pair<int, int>> stack{{0, -1}};  // (vertex, incoming edge)
    std::vector<CircuitStep> circuit;
    std::vector<int> path_vertices;
    std::vector<int> path_edges;
    while (!stack.empty()) {
        auto [u, via] = stack.back();
        if (next[u] < static_cast<int>(adj[u].size())) {
            auto [v, e] = adj[u][next[u]++];
            if (used[e]) continue;
            used[e] = 1;
            stack.emplace_back(v, e);
        } else {
            stack.pop_back();
            path_vertices.push_back(u);
            path_edges.push_back(via);
        }
    }
    // path is the circuit reversed; convert to directed steps.
    std::reverse(path_vertices.begin(), path_vertices.end());
    std::reverse(path_edges.begin(), path_edges.end());
    for (size_t i = 1; i < path_vertices.size(); ++i)
        circuit.push_back({path_vertices[i - 1], path_vertices[i], path_edges[i]});
    return circuit;
}

struct ShortcutRun {
    std::vector<int> tour;
    std::vector<char> kept;  // per multigraph edge: traversed directly in the tour
};

// Walks the circuit starting at position `start`, keeping the first visit of
// each vertex. A circuit edge survives into the tour exactly when its source
// is the most recently kept vertex (no shortcut jumped over it).
ShortcutRun shortcut_from(const std::vector<CircuitStep>& circuit, int start, int n,
                          int edge_count) {
    ShortcutRun run;
    run.kept.assign(edge_count, 0);
    std::vector<char> visited(n, 0);
    const int len = static_cast<int>(circuit.size());
    const CircuitStep& first = circuit[start];
    run.tour = {first.from, first.to};
    visited[first.from] = visited[first.to] = 1;
    run.kept[first.edge] = 1;
    int last = first.to;
    for (int i = 1; i < len; ++i) {
        const CircuitStep& step = circuit[(start + i) % len];
        if (i == len - 1) {
            // Closing edge back to the tour start.
            run.kept[step.edge] = step.from == last;
            break;
        }
        if (!visited[step.to]) {
            run.kept[step.edge] = step.from == last;
            visited[step.to] = 1;
            run.tour.push_back(step.to);
            last = step.to;
        }
    }
    return run;
}

}  // namespace

OracleResult christofides(const ProblemInstance& inst, const Vector& mu, Rng& rng) {
    if (inst.kind != ProblemKind::TSP)
        throw std::invalid_argument("christofides needs a tsp instance");

    const auto tree = minimum_spanning_tree(inst, mu);
    std::vector<int> degree(inst.num_vertices, 0);
    for (const auto& [u, v] : tree) {
        ++degree[u];
        ++degree[v];
    }
    std::vector<int> odd;
    for (int v = 0; v < inst.num_vertices; ++v)
        if (degree[v] % 2) odd.push_back(v);
    const auto matching = min_weight_matching(inst, mu, odd);

    std::vector<std::pair<int, int>> multigraph(tree);
    multigraph.insert(multigraph.end(), matching.begin(), matching.end());
    const auto circuit = eulerian_circuit(inst.num_vertices, multigraph);
    const int m = static_cast<int>(multigraph.size());

    // q_e of the uniform start-edge rule, by exhausting the start choices.
    std::vector<Real> q(m, 0.0);
    std::vector<int> start_of_edge(m, -1);
    for (int pos = 0; pos < m; ++pos) start_of_edge[circuit[pos].edge] = pos;
    for (int e = 0; e < m; ++e) {
        const ShortcutRun run = shortcut_from(circuit, start_of_edge[e], inst.num_vertices, m);
        for (int f = 0; f < m; ++f) q[f] += run.kept[f];
    }
    for (Real& v : q) v /= m;

    std::uniform_int_distribution<int> pick(0, m - 1);
    const int start_edge = pick(rng);
    ShortcutRun played = shortcut_from(circuit, start_of_edge[start_edge], inst.num_vertices, m);

    Real tree_cost = 0.0;
    for (const auto& [u, v] : tree) tree_cost += inst.edge_value(mu, u, v);
    Real matching_cost = 0.0;
    for (const auto& [u, v] : matching) matching_cost += inst.edge_value(mu, u, v);

    OracleResult out;
    SubSolution tree_sub;
    tree_sub.payload = tree;
    tree_sub.sub_reward = -tree_cost;
    tree_sub.weight = 2.0 / 3.0;
    out.trace.subproblems.push_back(std::move(tree_sub));
    SubSolution matching_sub;
    matching_sub.payload = matching;
    matching_sub.sub_reward = -matching_cost;
    matching_sub.weight = 2.0 / 3.0;
    out.trace.subproblems.push_back(std::move(matching_sub));
    out.action = Tour{played.tour};
    out.trace.final_action = out.action;
    out.start_edge_probs = std::move(q);
    out.multigraph_edges = std::move(multigraph);
    out.played_kept = std::move(played.kept);
    return out;
}

}  // namespace ctsim
