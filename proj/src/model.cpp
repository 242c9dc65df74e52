#include "ctsim/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "ctsim/rng.hpp"

namespace ctsim {

namespace {

constexpr int kWorldEnumMaxEdges = 20;     // OIM exact-vs-MC threshold
constexpr std::uint64_t kMaxSubsets = 1'000'000;

bool sorted_distinct(const std::vector<int>& ids, int lo, int hi) {
    for (size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] < lo || ids[i] >= hi) return false;
        if (i > 0 && ids[i] <= ids[i - 1]) return false;
    }
    return true;
}

Real clamped_acos_over_pi(Real dot) {
    return std::acos(std::clamp(dot, -1.0, 1.0)) / M_PI;
}

// Probabilistic coverage value f(A, mu) = sum_v (1 - prod_{u in A} (1 - mu_uv)).
Real pmc_value(const ProblemInstance& inst, const std::vector<int>& left_set, const Vector& mu) {
    Real total = 0.0;
    for (int v = 0; v < inst.right_size(); ++v) {
        Real survive = 1.0;
        for (const auto& [u, arm] : inst.cover_edges(v))
            if (std::binary_search(left_set.begin(), left_set.end(), u))
                survive *= 1.0 - mu[arm];
        total += 1.0 - survive;
    }
    return total;
}

Real kcenter_cost(const ProblemInstance& inst, const std::vector<int>& centers, const Vector& mu) {
    Real worst = 0.0;
    for (int v = 0; v < inst.num_vertices; ++v) {
        if (std::binary_search(centers.begin(), centers.end(), v)) continue;
        Real nearest = std::numeric_limits<Real>::infinity();
        for (int a : centers) nearest = std::min(nearest, inst.edge_value(mu, v, a));
        worst = std::max(worst, nearest);
    }
    return worst;
}

Real cut_value(const ProblemInstance& inst, const std::vector<int>& side_a, const Vector& mu) {
    Real total = 0.0;
    for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
        bool ua = std::binary_search(side_a.begin(), side_a.end(), inst.edges[e].u);
        bool va = std::binary_search(side_a.begin(), side_a.end(), inst.edges[e].v);
        if (ua != va) total += mu[e];
    }
    return total;
}

Real tour_cost(const ProblemInstance& inst, const std::vector<int>& order, const Vector& mu) {
    Real total = 0.0;
    const int n = static_cast<int>(order.size());
    for (int i = 0; i < n; ++i) total += inst.edge_value(mu, order[i], order[(i + 1) % n]);
    return total;
}

// Reached-vertex bitmask from `seeds` through live edges of `live_mask`.
std::uint32_t reach_mask(const ProblemInstance& inst, std::uint32_t seed_mask,
                         std::uint32_t live_mask) {
    std::uint32_t reached = seed_mask;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
            if (!(live_mask >> e & 1u)) continue;
            if ((reached >> inst.edges[e].u & 1u) && !(reached >> inst.edges[e].v & 1u)) {
                reached |= 1u << inst.edges[e].v;
                grew = true;
            }
        }
    }
    return reached;
}

std::uint32_t vertex_mask(const std::vector<int>& ids) {
    std::uint32_t m = 0;
    for (int v : ids) m |= 1u << v;
    return m;
}

// Enumerates independent-cascade worlds, invoking fn(world_probability,
// reached_vertex_mask). Requires |E| <= kWorldEnumMaxEdges.
void for_each_world(const ProblemInstance& inst, const std::vector<int>& seeds,
                    const Vector& mu, const std::function<void(Real, std::uint32_t)>& fn) {
    const int m = static_cast<int>(inst.edges.size());
    if (m > kWorldEnumMaxEdges)
        throw TooLargeError("oim world enumeration refused: 2^" + std::to_string(m) + " worlds",
                            std::uint64_t(1) << m);
    const std::uint32_t seed_mask = vertex_mask(seeds);
    for (std::uint32_t live = 0; live < (1u << m); ++live) {
        Real p = 1.0;
        for (int e = 0; e < m; ++e) p *= (live >> e & 1u) ? mu[e] : 1.0 - mu[e];
        if (p == 0.0) continue;
        fn(p, reach_mask(inst, seed_mask, live));
    }
}

void check_dimension(const ProblemInstance& inst, const Vector& mu) {
    if (static_cast<int>(mu.size()) != inst.arm_count())
        throw std::invalid_argument("mean vector dimension mismatch");
}

}  // namespace

void validate_action(const ProblemInstance& inst, const Action& action, bool as_play) {
    switch (inst.kind) {
        case ProblemKind::PMC:
        case ProblemKind::OIM:
        case ProblemKind::KCenter: {
            const auto* vs = std::get_if<VertexSet>(&action);
            if (!vs) throw std::invalid_argument("action must be a vertex set");
            const int hi = inst.kind == ProblemKind::PMC ? inst.left_size : inst.num_vertices;
            if (!sorted_distinct(vs->ids, 0, hi))
                throw std::invalid_argument("vertex set must be sorted, distinct and in range");
            if (as_play && static_cast<int>(vs->ids.size()) != inst.k)
                throw std::invalid_argument("vertex set must have exactly k elements");
            if (inst.kind == ProblemKind::KCenter && vs->ids.empty())
                throw std::invalid_argument("k-center needs at least one center");
            return;
        }
        case ProblemKind::VertexCover: {
            const auto* c = std::get_if<Cover>(&action);
            if (!c) throw std::invalid_argument("action must be a cover");
            if (!sorted_distinct(c->ids, 0, inst.num_vertices))
                throw std::invalid_argument("cover must be sorted, distinct and in range");
            for (const auto& e : inst.edges)
                if (!std::binary_search(c->ids.begin(), c->ids.end(), e.u) &&
                    !std::binary_search(c->ids.begin(), c->ids.end(), e.v))
                    throw std::invalid_argument("infeasible action: edge (" + std::to_string(e.u) +
                                                "," + std::to_string(e.v) + ") not covered");
            return;
        }
        case ProblemKind::MaxCut: {
            if (const auto* vs = std::get_if<VertexSet>(&action)) {
                if (!sorted_distinct(vs->ids, 0, inst.num_vertices))
                    throw std::invalid_argument("cut side must be sorted, distinct and in range");
                return;
            }
            const auto* dist = std::get_if<CutDistribution>(&action);
            if (!dist) throw std::invalid_argument("max-cut action must be a cut or cut distribution");
            if (dist->vectors.rows() != inst.num_vertices)
                throw std::invalid_argument("cut distribution needs one vector per vertex");
            for (int u = 0; u < dist->vectors.rows(); ++u)
                if (std::abs(dist->vectors.row(u).norm() - 1.0) > kCheckTol)
                    throw std::invalid_argument("cut distribution rows must be unit vectors");
            return;
        }
        case ProblemKind::TSP: {
            const auto* t = std::get_if<Tour>(&action);
            if (!t) throw std::invalid_argument("action must be a tour");
            if (static_cast<int>(t->order.size()) != inst.num_vertices)
                throw std::invalid_argument("tour must visit every vertex exactly once");
            std::vector<char> seen(inst.num_vertices, 0);
            for (int v : t->order) {
                if (v < 0 || v >= inst.num_vertices || seen[v])
                    throw std::invalid_argument("tour must visit every vertex exactly once");
                seen[v] = 1;
            }
            return;
        }
    }
}

Real sigma_exact(const ProblemInstance& inst, const std::vector<int>& seeds, const Vector& mu) {
    check_dimension(inst, mu);
    Real total = 0.0;
    for_each_world(inst, seeds, mu, [&](Real p, std::uint32_t reached) {
        total += p * std::popcount(reached);
    });
    return total;
}

Real reward(const ProblemInstance& inst, const Action& action, const Vector& mu) {
    check_dimension(inst, mu);
    validate_action(inst, action, false);
    switch (inst.kind) {
        case ProblemKind::PMC:
            return pmc_value(inst, std::get<VertexSet>(action).ids, mu);
        case ProblemKind::OIM:
            return sigma_exact(inst, std::get<VertexSet>(action).ids, mu);
        case ProblemKind::KCenter:
            return -kcenter_cost(inst, std::get<VertexSet>(action).ids, mu);
        case ProblemKind::VertexCover: {
            Real cost = 0.0;
            for (int v : std::get<Cover>(action).ids) cost += mu[v];
            return -cost;
        }
        case ProblemKind::MaxCut: {
            if (const auto* vs = std::get_if<VertexSet>(&action)) return cut_value(inst, vs->ids, mu);
            const auto& dist = std::get<CutDistribution>(action);
            Real total = 0.0;
            for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
                total += mu[e] * clamped_acos_over_pi(
                                      dist.vectors.row(inst.edges[e].u).dot(dist.vectors.row(inst.edges[e].v)));
            return total;
        }
        case ProblemKind::TSP:
            return -tour_cost(inst, std::get<Tour>(action).order, mu);
    }
    return 0.0;
}

Vector triggering_probabilities(const ProblemInstance& inst, const Action& action) {
    validate_action(inst, action, false);
    Vector p = Vector::Zero(inst.arm_count());
    switch (inst.kind) {
        case ProblemKind::PMC:
            for (int u : std::get<VertexSet>(action).ids)
                for (int arm : inst.left_arms(u)) p[arm] = 1.0;
            break;
        case ProblemKind::OIM: {
            // p_e(A) = P(source of e reached from A).
            for_each_world(inst, std::get<VertexSet>(action).ids, inst.true_means,
                           [&](Real prob, std::uint32_t reached) {
                               for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
                                   if (reached >> inst.edges[e].u & 1u) p[e] += prob;
                           });
            break;
        }
        case ProblemKind::KCenter: {
            const auto& ids = std::get<VertexSet>(action).ids;
            for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
                if (std::binary_search(ids.begin(), ids.end(), inst.edges[e].u) ||
                    std::binary_search(ids.begin(), ids.end(), inst.edges[e].v))
                    p[e] = 1.0;
            break;
        }
        case ProblemKind::VertexCover:
            for (int v : std::get<Cover>(action).ids) p[v] = 1.0;
            break;
        case ProblemKind::MaxCut: {
            if (const auto* vs = std::get_if<VertexSet>(&action)) {
                for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
                    bool ua = std::binary_search(vs->ids.begin(), vs->ids.end(), inst.edges[e].u);
                    bool va = std::binary_search(vs->ids.begin(), vs->ids.end(), inst.edges[e].v);
                    if (ua != va) p[e] = 1.0;
                }
            } else {
                const auto& dist = std::get<CutDistribution>(action);
                for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
                    p[e] = clamped_acos_over_pi(
                        dist.vectors.row(inst.edges[e].u).dot(dist.vectors.row(inst.edges[e].v)));
            }
            break;
        }
        case ProblemKind::TSP: {
            const auto& order = std::get<Tour>(action).order;
            for (size_t i = 0; i < order.size(); ++i)
                p[inst.arm_of_edge(order[i], order[(i + 1) % order.size()])] = 1.0;
            break;
        }
    }
    return p;
}

TriggerEstimate triggering_probability(const ProblemInstance& inst, const Action& action,
                                       ArmId arm, int mc_samples, std::uint64_t rng_seed) {
    if (arm < 0 || arm >= inst.arm_count()) throw std::invalid_argument("arm id out of range");
    if (inst.kind == ProblemKind::OIM &&
        static_cast<int>(inst.edges.size()) > kWorldEnumMaxEdges) {
        if (mc_samples <= 0)
            throw std::invalid_argument("monte-carlo triggering estimate needs mc_samples > 0");
        validate_action(inst, action, false);
        const auto& seeds = std::get<VertexSet>(action).ids;
        Rng rng = make_rng(rng_seed);
        std::uniform_real_distribution<Real> unif(0.0, 1.0);
        const int m = static_cast<int>(inst.edges.size());
        const int src = inst.edges[arm].u;
        long hits = 0;
        std::vector<char> live(m);
        for (int s = 0; s < mc_samples; ++s) {
            for (int e = 0; e < m; ++e) live[e] = unif(rng) < inst.true_means[e];
            // BFS over live edges.
            std::vector<char> seen(inst.num_vertices, 0);
            std::vector<int> stack(seeds.begin(), seeds.end());
            for (int v : seeds) seen[v] = 1;
            bool reached = seen[src];
            while (!stack.empty() && !reached) {
                int u = stack.back();
                stack.pop_back();
                for (const auto& [v, e] : inst.out_edges(u))
                    if (live[e] && !seen[v]) {
                        seen[v] = 1;
                        stack.push_back(v);
                        if (v == src) reached = true;
                    }
            }
            hits += reached;
        }
        const Real est = static_cast<Real>(hits) / mc_samples;
        return {est, std::sqrt(est * (1.0 - est) / mc_samples)};
    }
    return {triggering_probabilities(inst, action)[arm], 0.0};
}

SmoothnessCheck check_smoothness(const ProblemInstance& inst, const Action& action,
                                 const Vector& mu, const Vector& mu_prime) {
    check_dimension(inst, mu);
    check_dimension(inst, mu_prime);
    SmoothnessCheck out;
    out.lhs = std::abs(reward(inst, action, mu) - reward(inst, action, mu_prime));
    const Vector p = triggering_probabilities(inst, action);
    out.rhs = (p.array() * inst.smoothness_b.array() * (mu - mu_prime).array().abs()).sum();
    out.holds = out.lhs <= out.rhs + kCheckTol;
    return out;
}

namespace {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Visits k-subsets of [0, n) in lexicographic order.
void for_each_combination(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> c(k);
    std::iota(c.begin(), c.end(), 0);
    if (k == 0) {
        fn(c);
        return;
    }
    if (k > n) return;
    while (true) {
        fn(c);
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i) --i;
        if (i < 0) return;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
}

// Subsets of [0, n) in encoding order: {} < {0} < {0,1} < ... < {1} < ...
void for_each_subset_lex(int n, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> cur;
    const std::function<void(int)> lex = [&](int next) {
        if (!cur.empty()) fn(cur);
        for (int v = next; v < n; ++v) {
            cur.push_back(v);
            lex(v + 1);
            cur.pop_back();
        }
    };
    fn({});
    lex(0);
}

struct HeldKarp {
    // g[S][j]: cheapest path j -> (visits S) -> 0, over vertices 1..n-1.
    std::vector<std::vector<Real>> g;
    Real opt = 0.0;
};

HeldKarp held_karp(const ProblemInstance& inst, const Vector& mu) {
    const int n = inst.num_vertices;
    const int m = n - 1;  // vertices 1..n-1 encoded as bits 0..m-1
    auto d = [&](int a, int b) { return inst.edge_value(mu, a, b); };
    HeldKarp hk;
    hk.g.assign(std::size_t(1) << m, std::vector<Real>(m, 0.0));
    for (int j = 0; j < m; ++j) hk.g[0][j] = d(j + 1, 0);
    for (std::uint32_t s = 1; s < (1u << m); ++s)
        for (int j = 0; j < m; ++j) {
            if (s >> j & 1u) continue;
            Real best = std::numeric_limits<Real>::infinity();
            for (int v = 0; v < m; ++v)
                if (s >> v & 1u) best = std::min(best, d(j + 1, v + 1) + hk.g[s & ~(1u << v)][v]);
            hk.g[s][j] = best;
        }
    const std::uint32_t full = (1u << m) - 1;
    Real opt = std::numeric_limits<Real>::infinity();
    for (int v = 0; v < m; ++v) opt = std::min(opt, d(0, v + 1) + hk.g[full & ~(1u << v)][v]);
    hk.opt = opt;
    return hk;
}

Optimum tsp_optimum(const ProblemInstance& inst, const Vector& mu) {
    if (inst.num_vertices > 12)
        throw TooLargeError("held-karp refused: |V| = " + std::to_string(inst.num_vertices) +
                                " exceeds 12",
                            std::uint64_t(1) << (inst.num_vertices - 1));
    const HeldKarp hk = held_karp(inst, mu);
    // Lexicographic reconstruction: from vertex 0 pick the smallest next
    // vertex that still completes at optimal cost.
    const int m = inst.num_vertices - 1;
    auto d = [&](int a, int b) { return inst.edge_value(mu, a, b); };
    std::vector<int> order{0};
    std::uint32_t remaining = (1u << m) - 1;
    int cur = 0;
    Real target = hk.opt;
    const Real tol = 1e-9 * (1.0 + std::abs(hk.opt));
    while (remaining) {
        for (int v = 0; v < m; ++v) {
            if (!(remaining >> v & 1u)) continue;
            const Real through = d(cur, v + 1) + hk.g[remaining & ~(1u << v)][v];
            if (through <= target + tol) {
                order.push_back(v + 1);
                target -= d(cur, v + 1);
                cur = v + 1;
                remaining &= ~(1u << v);
                break;
            }
        }
    }
    return {Tour{action_encoding(Tour{order})}, -hk.opt};
}

}  // namespace

std::uint64_t action_space_size(const ProblemInstance& inst) {
    switch (inst.kind) {
        case ProblemKind::PMC: return binomial(inst.left_size, inst.k);
        case ProblemKind::OIM:
        case ProblemKind::KCenter: return binomial(inst.num_vertices, inst.k);
        case ProblemKind::VertexCover:
        case ProblemKind::MaxCut: return std::uint64_t(1) << inst.num_vertices;
        case ProblemKind::TSP: {
            std::uint64_t f = 1;
            for (int i = 2; i < inst.num_vertices; ++i) f *= i;
            return f / 2;  // rotations fixed, reflections identified
        }
    }
    return 0;
}

void for_each_action(const ProblemInstance& inst, const std::function<void(const Action&)>& fn) {
    switch (inst.kind) {
        case ProblemKind::PMC:
        case ProblemKind::OIM:
        case ProblemKind::KCenter: {
            const int ground = inst.kind == ProblemKind::PMC ? inst.left_size : inst.num_vertices;
            if (binomial(ground, inst.k) > kMaxSubsets)
                throw TooLargeError("action enumeration refused: C(" + std::to_string(ground) + "," +
                                        std::to_string(inst.k) + ") too large",
                                    binomial(ground, inst.k));
            for_each_combination(ground, inst.k, [&](const std::vector<int>& ids) {
                fn(VertexSet{ids});
            });
            return;
        }
        case ProblemKind::VertexCover: {
            if (inst.num_vertices > 12)
                throw TooLargeError("cover enumeration refused: 2^" +
                                        std::to_string(inst.num_vertices) + " subsets",
                                    std::uint64_t(1) << inst.num_vertices);
            for_each_subset_lex(inst.num_vertices, [&](const std::vector<int>& ids) {
                Cover c{ids};
                for (const auto& e : inst.edges)
                    if (!std::binary_search(ids.begin(), ids.end(), e.u) &&
                        !std::binary_search(ids.begin(), ids.end(), e.v))
                        return;
                fn(c);
            });
            return;
        }
        case ProblemKind::MaxCut: {
            if (inst.num_vertices > 12)
                throw TooLargeError("cut enumeration refused: 2^" +
                                        std::to_string(inst.num_vertices) + " subsets",
                                    std::uint64_t(1) << inst.num_vertices);
            for_each_subset_lex(inst.num_vertices, [&](const std::vector<int>& ids) {
                fn(VertexSet{ids});
            });
            return;
        }
        case ProblemKind::TSP: {
            if (inst.num_vertices > 10)
                throw TooLargeError("tour enumeration refused: (n-1)!/2 tours",
                                    action_space_size(inst));
            std::vector<int> rest(inst.num_vertices - 1);
            std::iota(rest.begin(), rest.end(), 1);
            do {
                if (rest.size() >= 2 && rest.front() > rest.back()) continue;  // one direction only
                std::vector<int> order{0};
                order.insert(order.end(), rest.begin(), rest.end());
                fn(Tour{order});
            } while (std::next_permutation(rest.begin(), rest.end()));
            return;
        }
    }
}

Optimum exact_optimum(const ProblemInstance& inst, const Vector& mu) {
    check_dimension(inst, mu);
    if (inst.kind == ProblemKind::TSP) return tsp_optimum(inst, mu);
    bool found = false;
    Optimum best;
    for_each_action(inst, [&](const Action& a) {
        const Real value = reward(inst, a, mu);
        if (!found || value > best.value ||
            (value == best.value && encoding_less(a, best.action))) {
            best = {a, value};
            found = true;
        }
    });
    if (!found) throw std::invalid_argument("empty action space");
    return best;
}

}  // namespace ctsim
