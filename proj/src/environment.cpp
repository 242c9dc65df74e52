#include "ctsim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "ctsim/model.hpp"
#include "ctsim/stats.hpp"

namespace ctsim {

OutcomeLaw default_law(ProblemKind kind) {
    if (kind == ProblemKind::PMC || kind == ProblemKind::OIM)
        return {OutcomeLawKind::BernoulliProduct, 0.0};
    return {OutcomeLawKind::TruncGaussianProduct, 0.1};
}

Environment make_environment(const ProblemInstance& inst) {
    return make_environment(inst, default_law(inst.kind));
}

Environment make_environment(const ProblemInstance& inst, const OutcomeLaw& law) {
    if (inst.kind == ProblemKind::OIM && law.kind != OutcomeLawKind::BernoulliProduct)
        throw std::invalid_argument(
            "oim triggering depends on the outcomes; only a Bernoulli product law is sound");
    if (law.kind == OutcomeLawKind::BernoulliProduct)
        for (int i = 0; i < inst.true_means.size(); ++i)
            if (inst.true_means[i] < 0.0 || inst.true_means[i] > 1.0)
                throw std::invalid_argument("bernoulli law needs means in [0,1]");
    return {&inst, law};
}

namespace {

Real draw_outcome(const OutcomeLaw& law, const Interval& domain, Real mean, Rng& rng) {
    switch (law.kind) {
        case OutcomeLawKind::Deterministic: return mean;
        case OutcomeLawKind::BernoulliProduct: {
            std::uniform_real_distribution<Real> unif(0.0, 1.0);
            return unif(rng) < mean ? 1.0 : 0.0;
        }
        case OutcomeLawKind::TruncGaussianProduct: {
            // Symmetric truncation keeps the outcome mean exactly at mu*.
            const Real half = std::min(mean - domain.lo, domain.hi - mean);
            if (half <= 0.0) return mean;
            std::uniform_real_distribution<Real> unif(0.0, 1.0);
            const Real lo_cdf = normal_cdf(-half / law.sigma);
            const Real hi_cdf = normal_cdf(half / law.sigma);
            const Real u = lo_cdf + unif(rng) * (hi_cdf - lo_cdf);
            const Real offset = law.sigma * normal_quantile(u);
            return mean + std::clamp(offset, -half, half);
        }
    }
    return mean;
}

}  // namespace

StepResult step(const Environment& env, const Action& action, Rng& rng) {
    const ProblemInstance& inst = *env.instance;
    validate_action(inst, action, true);

    // Outcomes are drawn for every arm before the trigger mask is formed, so
    // an arm's outcome can never depend on whether it is observed.
    Vector outcomes(inst.arm_count());
    for (int i = 0; i < inst.arm_count(); ++i)
        outcomes[i] = draw_outcome(env.law, inst.outcome_domain, inst.true_means[i], rng);

    std::vector<ArmId> triggered;
    switch (inst.kind) {
        case ProblemKind::PMC: {
            for (int u : std::get<VertexSet>(action).ids)
                for (int arm : inst.left_arms(u)) triggered.push_back(arm);
            break;
        }
        case ProblemKind::OIM: {
            const auto& seeds = std::get<VertexSet>(action).ids;
            std::vector<char> seen(inst.num_vertices, 0);
            std::vector<int> stack(seeds.begin(), seeds.end());
            for (int v : seeds) seen[v] = 1;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (const auto& [v, e] : inst.out_edges(u))
                    if (outcomes[e] == 1.0 && !seen[v]) {
                        seen[v] = 1;
                        stack.push_back(v);
                    }
            }
            // Edge observed iff its source node is reached.
            for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
                if (seen[inst.edges[e].u]) triggered.push_back(e);
            break;
        }
        case ProblemKind::KCenter: {
            const auto& ids = std::get<VertexSet>(action).ids;
            for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
                if (std::binary_search(ids.begin(), ids.end(), inst.edges[e].u) ||
                    std::binary_search(ids.begin(), ids.end(), inst.edges[e].v))
                    triggered.push_back(e);
            break;
        }
        case ProblemKind::VertexCover:
            triggered.assign(std::get<Cover>(action).ids.begin(),
                             std::get<Cover>(action).ids.end());
            break;
        case ProblemKind::MaxCut: {
            std::vector<int> sides;
            if (const auto* dist = std::get_if<CutDistribution>(&action)) {
                sides = sampled_cut_sides(*dist);
            } else {
                const auto& ids = std::get<VertexSet>(action).ids;
                sides.assign(inst.num_vertices, -1);
                for (int v : ids) sides[v] = 1;
            }
            for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
                if (sides[inst.edges[e].u] != sides[inst.edges[e].v]) triggered.push_back(e);
            break;
        }
        case ProblemKind::TSP: {
            const auto& order = std::get<Tour>(action).order;
            for (size_t i = 0; i < order.size(); ++i)
                triggered.push_back(inst.arm_of_edge(order[i], order[(i + 1) % order.size()]));
            break;
        }
    }
    std::sort(triggered.begin(), triggered.end());

    StepResult out;
    out.triggered.arms = std::move(triggered);
    out.outcomes.reserve(out.triggered.arms.size());
    for (ArmId arm : out.triggered.arms) out.outcomes.push_back(outcomes[arm]);
    return out;
}

namespace {

std::vector<EdgeRef> metric_edges(int n) {
    std::vector<EdgeRef> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
    return edges;
}

Vector euclidean_means(const std::vector<EdgeRef>& edges, const std::vector<std::pair<Real, Real>>& pts) {
    Vector means(edges.size());
    for (size_t e = 0; e < edges.size(); ++e) {
        const Real dx = pts[edges[e].u].first - pts[edges[e].v].first;
        const Real dy = pts[edges[e].u].second - pts[edges[e].v].second;
        means[static_cast<int>(e)] = std::sqrt(dx * dx + dy * dy);
    }
    return means;
}

}  // namespace

ProblemInstance generate(const GeneratorSpec& spec) {
    Rng rng = make_rng(spec.seed);
    std::uniform_real_distribution<Real> unif(0.0, 1.0);
    auto mean_draw = [&] { return spec.mean_lo + unif(rng) * (spec.mean_hi - spec.mean_lo); };

    ProblemInstance inst;
    inst.kind = spec.kind;
    inst.name = std::string(kind_name(spec.kind)) + "-s" + std::to_string(spec.seed);
    inst.alpha = default_alpha(spec.kind);

    switch (spec.kind) {
        case ProblemKind::PMC: {
            inst.num_vertices = spec.left_size + spec.right_size;
            inst.left_size = spec.left_size;
            inst.k = spec.k;
            for (int u = 0; u < spec.left_size; ++u)
                for (int v = 0; v < spec.right_size; ++v) inst.edges.push_back({u, v});
            inst.true_means.resize(static_cast<Eigen::Index>(inst.edges.size()));
            for (int e = 0; e < inst.true_means.size(); ++e) inst.true_means[e] = mean_draw();
            inst.outcome_domain = {0.0, 1.0};
            break;
        }
        case ProblemKind::OIM: {
            inst.num_vertices = spec.num_vertices;
            inst.k = spec.k;
            for (int u = 0; u < spec.num_vertices; ++u)
                for (int v = 0; v < spec.num_vertices; ++v) {
                    if (u == v) continue;
                    if (unif(rng) < spec.edge_density) inst.edges.push_back({u, v});
                }
            inst.true_means.resize(static_cast<Eigen::Index>(inst.edges.size()));
            for (int e = 0; e < inst.true_means.size(); ++e) inst.true_means[e] = mean_draw();
            inst.outcome_domain = {0.0, 1.0};
            break;
        }
        case ProblemKind::KCenter:
        case ProblemKind::TSP: {
            inst.num_vertices = spec.num_vertices;
            inst.k = spec.kind == ProblemKind::KCenter ? spec.k : 0;
            std::vector<std::pair<Real, Real>> pts(spec.num_vertices);
            for (auto& p : pts) p = {unif(rng), unif(rng)};
            inst.edges = metric_edges(spec.num_vertices);
            inst.true_means = euclidean_means(inst.edges, pts);
            inst.outcome_domain = {0.0, std::sqrt(2.0)};
            break;
        }
        case ProblemKind::VertexCover:
        case ProblemKind::MaxCut: {
            inst.num_vertices = spec.num_vertices;
            for (int u = 0; u < spec.num_vertices; ++u)
                for (int v = u + 1; v < spec.num_vertices; ++v)
                    if (unif(rng) < spec.edge_density) inst.edges.push_back({u, v});
            if (inst.edges.empty()) inst.edges.push_back({0, 1});
            const int arms = spec.kind == ProblemKind::VertexCover
                                 ? spec.num_vertices
                                 : static_cast<int>(inst.edges.size());
            inst.true_means.resize(arms);
            for (int e = 0; e < arms; ++e) inst.true_means[e] = mean_draw();
            inst.outcome_domain = {0.0, std::max(1.0, spec.mean_hi)};
            break;
        }
    }
    finalize_instance(inst);
    bool too_large = inst.kind == ProblemKind::OIM && inst.edges.size() > 20;
    try {
        too_large = too_large || action_space_size(inst) > 1'000'000;
    } catch (...) {
    }
    if (too_large)
        std::cerr << "warning: " << inst.name
                  << " exceeds the brute-force ceilings; regret runs need an exact optimum\n";
    return inst;
}

}  // namespace ctsim
