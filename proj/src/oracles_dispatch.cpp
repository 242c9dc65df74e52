#include <algorithm>
#include <stdexcept>

#include "ctsim/oracles.hpp"

namespace ctsim {

OracleResult solve_instance(const ProblemInstance& inst, const Vector& mu, Rng& rng,
                            const OracleOptions& opts) {
    switch (inst.kind) {
        case ProblemKind::PMC:
        case ProblemKind::OIM: return greedy_submodular(inst, mu, rng, opts);
        case ProblemKind::KCenter: return kcenter_greedy(inst, mu);
        case ProblemKind::VertexCover: return vc_half_integral(inst, mu);
        case ProblemKind::MaxCut: return maxcut_oracle(inst, mu, rng, opts);
        case ProblemKind::TSP: return christofides(inst, mu, rng);
    }
    throw std::logic_error("unreachable");
}

Real sub_reward(const ProblemInstance& inst, const DecompositionTrace& trace, int j,
                const Vector& mu) {
    if (j < 0 || j >= trace.ell()) throw std::invalid_argument("sub-problem index out of range");
    const SubSolution& sub = trace.subproblems[j];
    switch (inst.kind) {
        case ProblemKind::PMC: {
            const auto& prefix = std::get<std::vector<int>>(sub.payload);
            std::vector<int> ids(prefix);
            std::sort(ids.begin(), ids.end());
            return reward(inst, VertexSet{ids}, mu);
        }
        case ProblemKind::OIM: {
            const auto& prefix = std::get<std::vector<int>>(sub.payload);
            std::vector<int> ids(prefix);
            std::sort(ids.begin(), ids.end());
            return sigma_exact(inst, ids, mu);
        }
        case ProblemKind::KCenter: {
            const auto& prefix = std::get<std::vector<int>>(sub.payload);
            if (prefix.size() <= 1) return 0.0;  // r_1 is identically zero
            Real nearest = std::numeric_limits<Real>::infinity();
            for (size_t l = 0; l + 1 < prefix.size(); ++l)
                nearest = std::min(nearest, inst.edge_value(mu, prefix.back(), prefix[l]));
            return nearest;
        }
        case ProblemKind::VertexCover:
            return -std::get<Vector>(sub.payload).dot(mu);
        case ProblemKind::MaxCut: {
            const auto& rows = std::get<Matrix>(sub.payload);
            Real total = 0.0;
            for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
                total += 0.5 * mu[e] *
                         (1.0 - rows.row(inst.edges[e].u).dot(rows.row(inst.edges[e].v)));
            return total;
        }
        case ProblemKind::TSP: {
            const auto& edges = std::get<std::vector<std::pair<int, int>>>(sub.payload);
            Real cost = 0.0;
            for (const auto& [u, v] : edges) cost += inst.edge_value(mu, u, v);
            return -cost;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace ctsim
