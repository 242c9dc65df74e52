#include "ctsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctsim/environment.hpp"
#include "ctsim/model.hpp"
#include "ctsim/oracles.hpp"
#include "ctsim/regret.hpp"

namespace ctsim {

Action random_feasible_action(const ProblemInstance& inst, Rng& rng,
                              bool allow_cut_distributions) {
    std::uniform_real_distribution<Real> unif(0.0, 1.0);
    switch (inst.kind) {
        case ProblemKind::PMC:
        case ProblemKind::OIM:
        case ProblemKind::KCenter: {
            const int ground = inst.kind == ProblemKind::PMC ? inst.left_size : inst.num_vertices;
            std::vector<int> pool(ground);
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < inst.k; ++i) {
                std::uniform_int_distribution<int> pick(i, ground - 1);
                std::swap(pool[i], pool[pick(rng)]);
            }
            std::vector<int> ids(pool.begin(), pool.begin() + inst.k);
            std::sort(ids.begin(), ids.end());
            return VertexSet{ids};
        }
        case ProblemKind::VertexCover: {
            std::vector<char> in(inst.num_vertices, 0);
            for (int v = 0; v < inst.num_vertices; ++v) in[v] = unif(rng) < 0.5;
            for (const auto& e : inst.edges)
                if (!in[e.u] && !in[e.v]) in[std::min(e.u, e.v)] = 1;
            std::vector<int> ids;
            for (int v = 0; v < inst.num_vertices; ++v)
                if (in[v]) ids.push_back(v);
            return Cover{ids};
        }
        case ProblemKind::MaxCut: {
            if (allow_cut_distributions && unif(rng) < 0.5) {
                const int rank =
                    static_cast<int>(std::ceil(std::sqrt(2.0 * inst.num_vertices)));
                std::normal_distribution<Real> gauss(0.0, 1.0);
                Matrix rows(inst.num_vertices, rank);
                for (int u = 0; u < inst.num_vertices; ++u) {
                    for (int r = 0; r < rank; ++r) rows(u, r) = gauss(rng);
                    rows.row(u).normalize();
                }
                CutDistribution dist;
                dist.vectors = rows;
                dist.hyperplane_seed = rng();
                return dist;
            }
            std::vector<int> ids;
            for (int v = 0; v < inst.num_vertices; ++v)
                if (unif(rng) < 0.5) ids.push_back(v);
            return VertexSet{ids};
        }
        case ProblemKind::TSP: {
            std::vector<int> order(inst.num_vertices);
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            return Tour{order};
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

Vector random_mean_vector(const ProblemInstance& inst, Rng& rng) {
    std::uniform_real_distribution<Real> unif(inst.outcome_domain.lo, inst.outcome_domain.hi);
    Vector mu(inst.arm_count());
    for (int i = 0; i < mu.size(); ++i) mu[i] = unif(rng);
    return mu;
}

CheckLine smoothness_corpus(const ProblemInstance& inst, const VerifyOptions& opts, Rng& rng) {
    CheckLine line{"smoothness", 0, opts.smoothness_triples, false, ""};
    for (int i = 0; i < opts.smoothness_triples; ++i) {
        const Action a = random_feasible_action(inst, rng, true);
        const Vector mu = random_mean_vector(inst, rng);
        const Vector mu_prime = random_mean_vector(inst, rng);
        const SmoothnessCheck chk = check_smoothness(inst, a, mu, mu_prime);
        if (chk.holds)
            ++line.passed;
        else if (line.detail.empty())
            line.detail = "lhs " + format_real(chk.lhs) + " > rhs " + format_real(chk.rhs);
    }
    line.ok = line.passed == line.total;
    return line;
}

CheckLine reduce_corpus(const ProblemInstance& inst, const VerifyOptions& opts, Rng& rng) {
    CheckLine line{"reduce2exact", 0, opts.reduce_checks, false, ""};
    for (int i = 0; i < opts.reduce_checks; ++i) {
        const Vector theta = random_mean_vector(inst, rng);
        const OracleResult res = solve_instance(inst, theta, rng);
        const ReduceCheck chk = check_reduce2exact(inst, res.trace, inst.true_means);
        if (chk.holds)
            ++line.passed;
        else if (line.detail.empty())
            line.detail = "lhs " + format_real(chk.lhs) + " > rhs " + format_real(chk.rhs);
    }
    line.ok = line.passed == line.total;
    return line;
}

CheckLine trigger_corpus(const ProblemInstance& inst, const VerifyOptions& opts, Rng& rng) {
    CheckLine line{"trigger-frequency", 0, 0, false, ""};
    const Environment env = make_environment(inst);
    for (int a = 0; a < opts.trigger_actions; ++a) {
        const Action action = random_feasible_action(inst, rng, false);
        const Vector p = triggering_probabilities(inst, action);
        Vector hits = Vector::Zero(inst.arm_count());
        for (int s = 0; s < opts.trigger_steps; ++s) {
            const StepResult fb = step(env, action, rng);
            for (ArmId arm : fb.triggered.arms) hits[arm] += 1.0;
        }
        for (int i = 0; i < inst.arm_count(); ++i) {
            ++line.total;
            const Real freq = hits[i] / opts.trigger_steps;
            const Real se = std::sqrt(p[i] * (1.0 - p[i]) / opts.trigger_steps);
            const bool ok = se == 0.0 ? freq == p[i] : std::abs(freq - p[i]) <= 4.0 * se;
            if (ok)
                ++line.passed;
            else if (line.detail.empty())
                line.detail = "arm " + std::to_string(i) + ": freq " + format_real(freq) +
                              " vs p " + format_real(p[i]);
        }
    }
    line.ok = line.passed == line.total;
    return line;
}

}  // namespace

CheckReport run_verification(const ProblemInstance& inst, const VerifyOptions& opts) {
    CheckReport report;
    Rng rng = make_rng(derive_seed(opts.seed, 0xc0de));
    report.lines.push_back(smoothness_corpus(inst, opts, rng));
    report.lines.push_back(reduce_corpus(inst, opts, rng));
    report.lines.push_back(trigger_corpus(inst, opts, rng));
    return report;
}

}  // namespace ctsim
