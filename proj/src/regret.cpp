#include "ctsim/regret.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ctsim/oracles.hpp"

namespace ctsim {

Real approximation_gap(const ProblemInstance& inst, const Action& action, Real alpha,
                       Real opt_value, const Vector& mu_star) {
    const Real value = reward(inst, action, mu_star);
    if (is_minimization(inst.kind)) return std::max(0.0, opt_value - alpha * value);
    return std::max(0.0, alpha * opt_value - value);
}

Real approximation_gap(const ProblemInstance& inst, const Action& action, Real alpha) {
    return approximation_gap(inst, action, alpha, exact_optimum(inst, inst.true_means).value,
                             inst.true_means);
}

namespace {

std::vector<int> greedy_prefix(const DecompositionTrace& trace, int j) {
    if (j == 0) return {};
    return std::get<std::vector<int>>(trace.subproblems[j - 1].payload);
}

// Best single-element extension value of the played prefix under mu_star.
Real best_extension(const ProblemInstance& inst, const std::vector<int>& prefix,
                    const Vector& mu_star) {
    const int ground = inst.kind == ProblemKind::PMC ? inst.left_size : inst.num_vertices;
    Real best = -std::numeric_limits<Real>::infinity();
    for (int c = 0; c < ground; ++c) {
        if (std::find(prefix.begin(), prefix.end(), c) != prefix.end()) continue;
        std::vector<int> ids(prefix);
        ids.push_back(c);
        std::sort(ids.begin(), ids.end());
        const Real value = inst.kind == ProblemKind::PMC ? reward(inst, VertexSet{ids}, mu_star)
                                                         : sigma_exact(inst, ids, mu_star);
        best = std::max(best, value);
    }
    return best;
}

Real kcenter_best_extension(const ProblemInstance& inst, const std::vector<int>& prefix,
                            const Vector& mu_star) {
    Real best = -std::numeric_limits<Real>::infinity();
    for (int v = 0; v < inst.num_vertices; ++v) {
        if (std::find(prefix.begin(), prefix.end(), v) != prefix.end()) continue;
        Real nearest = std::numeric_limits<Real>::infinity();
        for (int a : prefix) nearest = std::min(nearest, inst.edge_value(mu_star, v, a));
        best = std::max(best, nearest);
    }
    return best;
}

std::vector<int> set_difference_count_base(const std::vector<int>& opt,
                                           const std::vector<int>& prefix) {
    std::vector<int> out;
    for (int v : opt)
        if (std::find(prefix.begin(), prefix.end(), v) == prefix.end()) out.push_back(v);
    return out;
}

}  // namespace

ReduceCheck check_reduce2exact(const ProblemInstance& inst, const DecompositionTrace& trace,
                               const Vector& mu_star) {
    const Optimum opt = exact_optimum(inst, mu_star);
    ReduceCheck out;
    out.lhs = approximation_gap(inst, trace.final_action, inst.alpha, opt.value, mu_star);

    switch (inst.kind) {
        case ProblemKind::PMC:
        case ProblemKind::OIM: {
            const auto& opt_ids = std::get<VertexSet>(opt.action).ids;
            for (int j = 0; j < trace.ell(); ++j) {
                const std::vector<int> prefix = greedy_prefix(trace, j);
                const Real played = sub_reward(inst, trace, j, mu_star);
                const Real best = std::max(best_extension(inst, prefix, mu_star), played);
                const Real missing =
                    static_cast<Real>(set_difference_count_base(opt_ids, prefix).size());
                out.rhs += trace.subproblems[j].weight * missing * (best - played);
            }
            break;
        }
        case ProblemKind::KCenter: {
            for (int j = 1; j < trace.ell(); ++j) {
                const std::vector<int> prefix = greedy_prefix(trace, j);
                const Real played = sub_reward(inst, trace, j, mu_star);
                const Real best = std::max(kcenter_best_extension(inst, prefix, mu_star), played);
                out.rhs += 0.5 * (best - played);
                out.rhs_max_form = std::max(out.rhs_max_form, 0.5 * (best - played));
            }
            break;
        }
        case ProblemKind::VertexCover: {
            const Real played = sub_reward(inst, trace, 0, mu_star);
            const OracleResult star = vc_half_integral(inst, mu_star);
            const Real best = std::max(star.trace.subproblems[0].sub_reward, played);
            out.rhs = best - played;
            break;
        }
        case ProblemKind::MaxCut: {
            const Real played = sub_reward(inst, trace, 0, mu_star);
            Rng rng = make_rng(0x5d9c0ffee);
            const OracleResult star = maxcut_oracle(inst, mu_star, rng);
            const Real best = std::max(star.trace.subproblems[0].sub_reward, played);
            out.rhs = inst.alpha * (best - played);
            break;
        }
        case ProblemKind::TSP: {
            const Real played_tree = sub_reward(inst, trace, 0, mu_star);
            const Real played_matching = sub_reward(inst, trace, 1, mu_star);
            Real best_tree = 0.0;
            for (const auto& [u, v] : minimum_spanning_tree(inst, mu_star))
                best_tree -= inst.edge_value(mu_star, u, v);
            best_tree = std::max(best_tree, played_tree);
            // The matching sub-space is defined by the odd vertices of the
            // *played* tree.
            const auto& tree = std::get<std::vector<std::pair<int, int>>>(
                trace.subproblems[0].payload);
            std::vector<int> degree(inst.num_vertices, 0);
            for (const auto& [u, v] : tree) {
                ++degree[u];
                ++degree[v];
            }
            std::vector<int> odd;
            for (int v = 0; v < inst.num_vertices; ++v)
                if (degree[v] % 2) odd.push_back(v);
            Real best_matching = 0.0;
            for (const auto& [u, v] : min_weight_matching(inst, mu_star, odd))
                best_matching -= inst.edge_value(mu_star, u, v);
            best_matching = std::max(best_matching, played_matching);
            out.rhs = 2.0 / 3.0 * (best_tree - played_tree) +
                      2.0 / 3.0 * (best_matching - played_matching);
            break;
        }
    }
    out.holds = out.lhs <= out.rhs + kCheckTol;
    return out;
}

RegretLedger make_ledger(const ProblemInstance& inst, const std::string& policy,
                         std::uint64_t seed, const std::vector<RoundRecord>& records) {
    RegretLedger ledger;
    ledger.instance_name = inst.name;
    ledger.policy = policy;
    ledger.seed = seed;
    ledger.gaps.reserve(records.size());
    Real cum = 0.0;
    for (const auto& r : records) {
        ledger.gaps.push_back(r.gap);
        ledger.gaps_sampled.push_back(r.gap_sampled);
        cum += r.gap;
        ledger.cumulative.push_back(cum);
    }
    return ledger;
}

ScalingFit scaling_fit(const std::vector<RegretLedger>& ledgers,
                       const std::vector<int>& checkpoints) {
    if (ledgers.size() < 10)
        throw std::invalid_argument("scaling_fit needs at least 10 seeds");
    if (checkpoints.empty()) throw std::invalid_argument("scaling_fit needs checkpoints");
    const size_t horizon = ledgers.front().cumulative.size();
    for (const auto& l : ledgers)
        if (l.cumulative.size() != horizon)
            throw std::invalid_argument("ledgers must share the horizon");
    if (checkpoints.back() > static_cast<int>(horizon) || checkpoints.front() < 1)
        throw std::invalid_argument("checkpoints out of range");

    auto mean_at = [&](int t) {
        Real sum = 0.0;
        for (const auto& l : ledgers) sum += l.cumulative[t - 1];
        return sum / ledgers.size();
    };

    ScalingFit fit;
    for (int t : checkpoints) fit.checkpoint_means.push_back(mean_at(t));
    for (size_t i = 0; i + 1 < fit.checkpoint_means.size(); ++i)
        fit.ratios.push_back(fit.checkpoint_means[i] == 0.0
                                 ? std::numeric_limits<Real>::quiet_NaN()
                                 : fit.checkpoint_means[i + 1] / fit.checkpoint_means[i]);

    // Least squares of mean cumulative regret against log t over the window.
    const int t_lo = checkpoints.front(), t_hi = checkpoints.back();
    const int count = t_hi - t_lo + 1;
    Real sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int t = t_lo; t <= t_hi; ++t) {
        const Real x = std::log(static_cast<Real>(t));
        const Real y = mean_at(t);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const Real var_x = sxx - sx * sx / count;
    const Real var_y = syy - sy * sy / count;
    const Real cov = sxy - sx * sy / count;
    if (var_y <= 1e-18 || var_x <= 0.0) {
        fit.log_fit_r2 = 1.0;  // constant curve: fit is exact
    } else {
        fit.log_fit_r2 = cov * cov / (var_x * var_y);
    }
    return fit;
}

namespace {

Real bound_weight_factor(const ProblemInstance& inst) {
    // Worst-case sum_j B_ij c_j of the sub-reward smoothness constants.
    switch (inst.kind) {
        case ProblemKind::PMC:
        case ProblemKind::OIM: {
            Real sum = 0.0;
            for (int i = 0; i < inst.k; ++i) sum += std::pow(1.0 - 1.0 / inst.k, i);
            const Real b = inst.kind == ProblemKind::OIM
                               ? static_cast<Real>(max_reach(inst, inst.true_means))
                               : 1.0;
            return b * sum;
        }
        case ProblemKind::KCenter: return 0.5 * inst.k;
        case ProblemKind::VertexCover: return 1.0;
        case ProblemKind::MaxCut: return 1.0;  // B = 1/alpha, c = alpha
        case ProblemKind::TSP:
            return (2.0 / 3.0 + 2.0 / 3.0) *
                   (inst.num_vertices - 1 + inst.num_vertices / 2);
    }
    return 1.0;
}

}  // namespace

BoundDiagnostics bound_diagnostics(const ProblemInstance& inst) {
    const Optimum opt = exact_optimum(inst, inst.true_means);
    BoundDiagnostics diag;
    const Real nan = std::numeric_limits<Real>::quiet_NaN();
    diag.delta_i_min = Vector::Constant(inst.arm_count(), nan);
    diag.delta_min = nan;
    diag.delta_max = 0.0;
    diag.p_star = 1.0;

    for_each_action(inst, [&](const Action& a) {
        const Vector p = triggering_probabilities(inst, a);
        const Real gap = approximation_gap(inst, a, inst.alpha, opt.value, inst.true_means);
        diag.delta_max = std::max(diag.delta_max, gap);
        int triggerable = 0;
        for (int i = 0; i < p.size(); ++i) {
            if (p[i] <= 0.0) continue;
            ++triggerable;
            diag.p_star = std::min(diag.p_star, p[i]);
            if (gap > 0.0 &&
                (std::isnan(diag.delta_i_min[i]) || gap < diag.delta_i_min[i]))
                diag.delta_i_min[i] = gap;
        }
        diag.m = std::max(diag.m, triggerable);
    });

    const Vector p_opt = triggering_probabilities(inst, opt.action);
    diag.m_star = static_cast<int>((p_opt.array() > 0.0).count());

    for (int i = 0; i < diag.delta_i_min.size(); ++i)
        if (!std::isnan(diag.delta_i_min[i]))
            diag.delta_min = std::isnan(diag.delta_min)
                                 ? diag.delta_i_min[i]
                                 : std::min(diag.delta_min, diag.delta_i_min[i]);

    const Real factor = bound_weight_factor(inst);
    diag.leading_term = 0.0;
    for (int i = 0; i < diag.delta_i_min.size(); ++i)
        if (!std::isnan(diag.delta_i_min[i]) && diag.delta_i_min[i] > 0.0)
            diag.leading_term +=
                factor * factor * std::log(std::max(2.0, static_cast<Real>(diag.m))) /
                diag.delta_i_min[i];
    return diag;
}

std::string format_real(Real value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::vector<int> geometric_checkpoints(int horizon) {
    std::vector<int> out;
    for (int t = 1; t < horizon; t *= 2) out.push_back(t);
    out.push_back(horizon);
    return out;
}

void write_ledger_csv(const std::string& path, const std::vector<RegretLedger>& ledgers) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "problem,policy,seed,t,gap,cum_regret,gap_sampled\n";
    for (const auto& l : ledgers)
        for (size_t t = 0; t < l.gaps.size(); ++t)
            out << l.instance_name << ',' << l.policy << ',' << l.seed << ',' << t + 1 << ','
                << format_real(l.gaps[t]) << ',' << format_real(l.cumulative[t]) << ','
                << format_real(l.gaps_sampled[t]) << '\n';
}

void write_plot_csv(const std::string& path, const std::vector<RegretLedger>& ledgers,
                    const std::vector<int>& checkpoints) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "problem,policy,t,mean_cum_regret,stderr\n";
    // Group by (instance, policy), preserving first-appearance order.
    std::vector<std::pair<std::string, std::string>> groups;
    for (const auto& l : ledgers) {
        std::pair<std::string, std::string> key{l.instance_name, l.policy};
        if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
    }
    for (const auto& [instance, policy] : groups) {
        for (int t : checkpoints) {
            Real sum = 0.0, sum_sq = 0.0;
            int count = 0;
            for (const auto& l : ledgers) {
                if (l.instance_name != instance || l.policy != policy) continue;
                if (t > static_cast<int>(l.cumulative.size())) continue;
                const Real v = l.cumulative[t - 1];
                sum += v;
                sum_sq += v * v;
                ++count;
            }
            if (count == 0) continue;
            const Real mean = sum / count;
            Real se = 0.0;
            if (count > 1) {
                const Real var = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1));
                se = std::sqrt(var / count);
            }
            out << instance << ',' << policy << ',' << t << ',' << format_real(mean) << ','
                << format_real(se) << '\n';
        }
    }
}

void write_diagnostics_csv(const std::string& path, const std::string& arms_path,
                           const std::vector<std::pair<std::string, BoundDiagnostics>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "problem,delta_min,delta_max,m,m_star,p_star,leading_term\n";
    for (const auto& [name, d] : rows)
        out << name << ',' << format_real(d.delta_min) << ',' << format_real(d.delta_max) << ','
            << d.m << ',' << d.m_star << ',' << format_real(d.p_star) << ','
            << format_real(d.leading_term) << '\n';
    std::ofstream arms(arms_path);
    if (!arms) throw std::runtime_error("cannot write " + arms_path);
    arms << "problem,arm,delta_i_min\n";
    for (const auto& [name, d] : rows)
        for (int i = 0; i < d.delta_i_min.size(); ++i)
            arms << name << ',' << i << ',' << format_real(d.delta_i_min[i]) << '\n';
}

}  // namespace ctsim
