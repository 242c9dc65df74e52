#pragma once

#include <string>
#include <vector>

#include "ctsim/policy.hpp"
#include "ctsim/trace.hpp"

namespace ctsim {

/// Approximation gap of a played action against the cached optimum value.
/// Maximization problems pay max(0, alpha r(A*) - r(A)); minimization
/// problems pay the cost-form gap max(0, alpha cost(A) - cost(A*)), which is
/// the form whose benchmark the 1/alpha-ratio guarantee actually reaches.
/// Cut distributions are charged their closed-form expected reward.
Real approximation_gap(const ProblemInstance& inst, const Action& action, Real alpha,
                       Real opt_value, const Vector& mu_star);

/// Convenience overload computing the exact optimum internally.
Real approximation_gap(const ProblemInstance& inst, const Action& action, Real alpha);

struct ReduceCheck {
    Real lhs = 0.0;
    Real rhs = 0.0;
    bool holds = false;
    Real rhs_max_form = 0.0;  // k-center only: the tighter max-over-j bound
};

/// Verifies the reduction inequality of the two-stage oracle: the gap of the
/// assembled action is at most the weighted sum of sub-optimality gaps of the
/// exactly-solvable sub-problems, each re-solved under mu_star given the
/// trace's earlier sub-solutions. Slack kCheckTol.
ReduceCheck check_reduce2exact(const ProblemInstance& inst, const DecompositionTrace& trace,
                               const Vector& mu_star);

/// Per-round gaps and cumulative regret of one (instance, policy, seed) run.
struct RegretLedger {
    std::string instance_name;
    std::string policy;
    std::uint64_t seed = 0;
    std::vector<Real> gaps;
    std::vector<Real> gaps_sampled;
    std::vector<Real> cumulative;  // nondecreasing prefix sums of gaps
};

RegretLedger make_ledger(const ProblemInstance& inst, const std::string& policy,
                         std::uint64_t seed, const std::vector<RoundRecord>& records);

struct ScalingFit {
    std::vector<Real> checkpoint_means;  // mean cumulative regret at each checkpoint
    std::vector<Real> ratios;            // successive checkpoint ratios
    Real log_fit_r2 = 0.0;               // R^2 of mean cumulative regret vs log t
};

/// Shape diagnostics against the logarithmic-regret prediction: mean regret
/// at geometric checkpoints, their ratios, and the least-squares fit of mean
/// cumulative regret against log t over [checkpoints.front(),
/// checkpoints.back()]. Requires at least 10 seeds.
ScalingFit scaling_fit(const std::vector<RegretLedger>& ledgers,
                       const std::vector<int>& checkpoints);

struct BoundDiagnostics {
    Real delta_min = 0.0;
    Real delta_max = 0.0;
    int m = 0;        // sup_A |T(A)|
    int m_star = 0;   // |T(A*)|
    Real p_star = 1.0;
    Vector delta_i_min;  // per arm; NaN when no positive-gap action triggers the arm
    Real leading_term = 0.0;  // sum_i (sum_j B_ij c_j)^2 log(m) / Delta_i_min
};

/// Exhaustive computation of the gap / triggering constants appearing in the
/// regret bounds, plus the bound's leading constant (worst-case weights).
BoundDiagnostics bound_diagnostics(const ProblemInstance& inst);

/// ledger.csv: problem,policy,seed,t,gap,cum_regret,gap_sampled (one row per
/// round; header-only when no ledgers).
void write_ledger_csv(const std::string& path, const std::vector<RegretLedger>& ledgers);

/// plot.csv: problem,policy,t,mean_cum_regret,stderr at geometric checkpoints.
void write_plot_csv(const std::string& path, const std::vector<RegretLedger>& ledgers,
                    const std::vector<int>& checkpoints);

/// diagnostics.csv + per-arm companion rows.
void write_diagnostics_csv(const std::string& path, const std::string& arms_path,
                           const std::vector<std::pair<std::string, BoundDiagnostics>>& rows);

/// Geometric checkpoint grid 1, 2, 4, ... capped at and including T.
std::vector<int> geometric_checkpoints(int horizon);

/// Stable shortest-round-trip formatting used in every CSV.
std::string format_real(Real value);

}  // namespace ctsim
