#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ctsim/oracles.hpp"

namespace ctsim {

namespace {

constexpr Real kFlowEps = 1e-12;

// Dinic max-flow; small dense-ish graphs only.
class FlowNetwork {
public:
    explicit FlowNetwork(int n) : graph_(n) {}

    void add_edge(int from, int to, Real cap) {
        graph_[from].push_back({to, cap, static_cast<int>(graph_[to].size())});
        graph_[to].push_back({from, 0.0, static_cast<int>(graph_[from].size()) - 1});
    }

    Real max_flow(int s, int t) {
        Real flow = 0.0;
        while (bfs(s, t)) {
            iter_.assign(graph_.size(), 0);
            Real f;
            while ((f = dfs(s, t, std::numeric_limits<Real>::infinity())) > kFlowEps) flow += f;
        }
        return flow;
    }

    /// Vertices reachable from s in the residual graph (the min-cut side).
    std::vector<char> residual_reachable(int s) const {
        std::vector<char> seen(graph_.size(), 0);
        std::queue<int> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const auto& e : graph_[u])
                if (e.cap > kFlowEps && !seen[e.to]) {
                    seen[e.to] = 1;
                    q.push(e.to);
                }
        }
        return seen;
    }

private:
    struct Edge {
        int to;
        Real cap;
        int rev;
    };

    bool bfs(int s, int t) {
        level_.assign(graph_.size(), -1);
        std::queue<int> q;
        q.push(s);
        level_[s] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const auto& e : graph_[u])
                if (e.cap > kFlowEps && level_[e.to] < 0) {
                    level_[e.to] = level_[u] + 1;
                    q.push(e.to);
                }
        }
        return level_[t] >= 0;
    }

    Real dfs(int u, int t, Real pushed) {
        if (u == t) return pushed;
        for (int& i = iter_[u]; i < static_cast<int>(graph_[u].size()); ++i) {
            Edge& e = graph_[u][i];
            if (e.cap > kFlowEps && level_[e.to] == level_[u] + 1) {
                Real got = dfs(e.to, t, std::min(pushed, e.cap));
                if (got > kFlowEps) {
                    e.cap -= got;
                    graph_[e.to][e.rev].cap += got;
                    return got;
                }
            }
        }
        return 0.0;
    }

    std::vector<std::vector<Edge>> graph_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

}  // namespace

OracleResult vc_half_integral(const ProblemInstance& inst, const Vector& mu) {
    if (inst.kind != ProblemKind::VertexCover)
        throw std::invalid_argument("vc_half_integral needs a vertex-cover instance");
    if ((mu.array() < 0.0).any())
        throw std::invalid_argument("vertex costs must be nonnegative");

    // Bipartite duplication: vertex v becomes v_L (1 + v) and v_R (1 + n + v);
    // each edge (u,v) becomes (u_L, v_R) and (v_L, u_R). A minimum-weight
    // cover of the doubled graph halves back to the optimal half-integral LP
    // point.
    const int n = inst.num_vertices;
    const int source = 0, sink = 1 + 2 * n;
    FlowNetwork net(2 * n + 2);
    const Real inf = mu.sum() + 1.0;
    for (int v = 0; v < n; ++v) {
        net.add_edge(source, 1 + v, mu[v]);
        net.add_edge(1 + n + v, sink, mu[v]);
    }
    for (const auto& e : inst.edges) {
        net.add_edge(1 + e.u, 1 + n + e.v, inf);
        net.add_edge(1 + e.v, 1 + n + e.u, inf);
    }
    net.max_flow(source, sink);
    const std::vector<char> reach = net.residual_reachable(source);

    Vector x = Vector::Zero(n);
    for (int v = 0; v < n; ++v) {
        if (!reach[1 + v]) x[v] += 0.5;      // v_L in the cover
        if (reach[1 + n + v]) x[v] += 0.5;   // v_R in the cover
    }

    std::vector<int> cover_ids;
    for (int v = 0; v < n; ++v)
        if (x[v] >= 0.5) cover_ids.push_back(v);

    OracleResult out;
    SubSolution sub;
    sub.payload = x;
    sub.sub_reward = -x.dot(mu);
    sub.weight = 1.0;
    out.trace.subproblems.push_back(std::move(sub));
    out.action = Cover{cover_ids};
    out.trace.final_action = out.action;
    return out;
}

}  // namespace ctsim
