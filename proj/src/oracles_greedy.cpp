#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctsim/oracles.hpp"

namespace ctsim {

PmcCoverage::PmcCoverage(const ProblemInstance& inst, const Vector& mu)
    : inst_(inst), mu_(mu), survival_(Vector::Ones(inst.right_size())) {}

Real PmcCoverage::marginal(int candidate) const {
    Real gain = 0.0;
    for (int arm : inst_.left_arms(candidate))
        gain += survival_[inst_.edges[arm].v] * mu_[arm];
    return gain;
}

void PmcCoverage::add(int vertex) {
    for (int arm : inst_.left_arms(vertex)) {
        const int v = inst_.edges[arm].v;
        value_ += survival_[v] * mu_[arm];
        survival_[v] *= 1.0 - mu_[arm];
    }
}

Real pmc_marginal(const ProblemInstance& inst, const VertexSet& set, int candidate,
                  const Vector& mu) {
    if (std::binary_search(set.ids.begin(), set.ids.end(), candidate))
        throw std::invalid_argument("pmc_marginal: candidate already in the set");
    PmcCoverage cov(inst, mu);
    for (int u : set.ids) cov.add(u);
    return cov.marginal(candidate);
}

SpreadEstimate ic_spread(const ProblemInstance& inst, const VertexSet& seeds, const Vector& mu,
                         int samples, Rng& rng) {
    if (samples < 1) throw std::invalid_argument("ic_spread needs samples >= 1");
    std::uniform_real_distribution<Real> unif(0.0, 1.0);
    const int m = static_cast<int>(inst.edges.size());
    Real sum = 0.0, sum_sq = 0.0;
    std::vector<char> live(m);
    std::vector<char> seen(inst.num_vertices);
    std::vector<int> stack;
    for (int s = 0; s < samples; ++s) {
        for (int e = 0; e < m; ++e) live[e] = unif(rng) < mu[e];
        std::fill(seen.begin(), seen.end(), 0);
        stack.assign(seeds.ids.begin(), seeds.ids.end());
        for (int v : seeds.ids) seen[v] = 1;
        int reached = 0;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            ++reached;
            for (const auto& [v, e] : inst.out_edges(u))
                if (live[e] && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        sum += reached;
        sum_sq += static_cast<Real>(reached) * reached;
    }
    const Real mean = sum / samples;
    Real stderr_ = 0.0;
    if (samples > 1) {
        const Real var = std::max(0.0, (sum_sq - samples * mean * mean) / (samples - 1));
        stderr_ = std::sqrt(var / samples);
    }
    return {mean, stderr_};
}

OracleResult greedy_submodular(const ProblemInstance& inst, const Vector& mu, Rng& rng,
                               const OracleOptions& opts) {
    const bool pmc = inst.kind == ProblemKind::PMC;
    if (!pmc && inst.kind != ProblemKind::OIM)
        throw std::invalid_argument("greedy_submodular handles pmc and oim only");
    const int ground = pmc ? inst.left_size : inst.num_vertices;
    if (inst.k > ground) throw std::invalid_argument("k exceeds the ground set");

    const bool exact_spread =
        pmc || (!opts.oim_force_monte_carlo &&
                static_cast<int>(inst.edges.size()) <= 20);

    OracleResult out;
    std::vector<int> prefix;
    std::vector<char> chosen(ground, 0);
    PmcCoverage cov(inst, mu);
    Real current = 0.0;

    auto value_with = [&](int candidate) -> Real {
        if (pmc) return current + cov.marginal(candidate);
        std::vector<int> ids(prefix);
        ids.push_back(candidate);
        std::sort(ids.begin(), ids.end());
        if (exact_spread) return sigma_exact(inst, ids, mu);
        return ic_spread(inst, VertexSet{ids}, mu, opts.oim_spread_samples, rng).sigma_hat;
    };

    for (int step = 0; step < inst.k; ++step) {
        int best = -1;
        Real best_value = 0.0;
        for (int c = 0; c < ground; ++c) {
            if (chosen[c]) continue;
            const Real value = value_with(c);
            if (best < 0 || value > best_value) {
                best = c;
                best_value = value;
            }
        }
        chosen[best] = 1;
        prefix.push_back(best);
        if (pmc) {
            cov.add(best);
            current = cov.value();
        } else {
            current = best_value;
        }
        SubSolution sub;
        sub.payload = prefix;
        sub.sub_reward = current;
        sub.weight = std::pow(1.0 - 1.0 / inst.k, inst.k - (step + 1)) / inst.k;
        out.trace.subproblems.push_back(std::move(sub));
    }
    std::vector<int> ids(prefix);
    std::sort(ids.begin(), ids.end());
    out.action = VertexSet{ids};
    out.trace.final_action = out.action;
    return out;
}

OracleResult kcenter_greedy(const ProblemInstance& inst, const Vector& mu) {
    if (inst.kind != ProblemKind::KCenter)
        throw std::invalid_argument("kcenter_greedy needs a k-center instance");
    OracleResult out;
    std::vector<int> prefix{0};
    {
        SubSolution sub;
        sub.payload = prefix;
        sub.sub_reward = 0.0;
        sub.weight = 0.5;
        out.trace.subproblems.push_back(std::move(sub));
    }
    Vector dist_to_set(inst.num_vertices);
    for (int v = 0; v < inst.num_vertices; ++v)
        dist_to_set[v] = v == 0 ? 0.0 : inst.edge_value(mu, v, 0);
    for (int step = 1; step < inst.k; ++step) {
        int best = -1;
        Real best_dist = -1.0;
        for (int v = 0; v < inst.num_vertices; ++v) {
            if (dist_to_set[v] > best_dist &&
                std::find(prefix.begin(), prefix.end(), v) == prefix.end()) {
                best = v;
                best_dist = dist_to_set[v];
            }
        }
        prefix.push_back(best);
        for (int v = 0; v < inst.num_vertices; ++v)
            if (v != best) dist_to_set[v] = std::min(dist_to_set[v], inst.edge_value(mu, v, best));
        dist_to_set[best] = 0.0;
        SubSolution sub;
        sub.payload = prefix;
        sub.sub_reward = best_dist;
        sub.weight = 0.5;
        out.trace.subproblems.push_back(std::move(sub));
    }
    std::vector<int> ids(prefix);
    std::sort(ids.begin(), ids.end());
    out.action = VertexSet{ids};
    out.trace.final_action = out.action;
    return out;
}

Vector clamp_sample(const Vector& theta, const Interval& domain) {
    Vector out = theta;
    for (int i = 0; i < out.size(); ++i) out[i] = domain.clamp(out[i]);
    return out;
}

}  // namespace ctsim
