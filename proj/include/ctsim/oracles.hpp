#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ctsim/instance.hpp"
#include "ctsim/model.hpp"
#include "ctsim/rng.hpp"
#include "ctsim/trace.hpp"

namespace ctsim {

struct OracleOptions {
    int oim_spread_samples = 1000;  // Monte-Carlo cascades per spread estimate
    bool oim_force_monte_carlo = false;
    int sdp_rank = 0;  // 0: ceil(sqrt(2 |V|))
    int sdp_max_iters = 100000;
    Real sdp_tol = 1e-8;
};

struct OracleResult {
    Action action;
    DecompositionTrace trace;
    /// TSP only: per-multigraph-edge probability q_e that the edge survives
    /// into the tour under the uniform start-edge rule, the multigraph edge
    /// list itself, and which edges survived in the played run.
    std::vector<Real> start_edge_probs;
    std::vector<std::pair<int, int>> multigraph_edges;
    std::vector<char> played_kept;
};

/// Incremental evaluator of probabilistic-coverage marginals: keeps the
/// per-node survival products of the current set so each candidate marginal
/// is one pass over its incident edges.
class PmcCoverage {
public:
    PmcCoverage(const ProblemInstance& inst, const Vector& mu);
    Real value() const { return value_; }
    Real marginal(int candidate) const;
    void add(int vertex);

private:
    const ProblemInstance& inst_;
    const Vector& mu_;
    Vector survival_;  // per right vertex
    Real value_ = 0.0;
};

/// f(A u {candidate}, mu) - f(A, mu), recomputed through the incremental
/// survival products. `candidate` must not be in `set`.
Real pmc_marginal(const ProblemInstance& inst, const VertexSet& set, int candidate,
                  const Vector& mu);

struct SpreadEstimate {
    Real sigma_hat = 0.0;
    Real stderr_ = 0.0;
};

/// Monte-Carlo influence spread: mean reached-set size over independent
/// cascade worlds (BFS per world).
SpreadEstimate ic_spread(const ProblemInstance& inst, const VertexSet& seeds, const Vector& mu,
                         int samples, Rng& rng);

/// Greedy submodular maximization for PMC and OIM: k exact single-element
/// argmax steps. OIM marginals use exact spread below the world-enumeration
/// ceiling and Monte-Carlo estimates above it (or when forced).
OracleResult greedy_submodular(const ProblemInstance& inst, const Vector& mu, Rng& rng,
                               const OracleOptions& opts = {});

/// Farthest-point greedy for metric k-center; first center is vertex 0
/// (the r_1 = 0 sub-problem leaves it free).
OracleResult kcenter_greedy(const ProblemInstance& inst, const Vector& mu);

/// Exact half-integral relaxation of vertex cover via the bipartite
/// duplication reduction and a min cut, rounded at 1/2.
OracleResult vc_half_integral(const ProblemInstance& inst, const Vector& mu);

/// Low-rank unit-vector relaxation of Max-Cut, maximized by projected
/// coordinate-gradient ascent with row renormalization. Throws on
/// non-convergence, reporting the last objective.
Matrix maxcut_sdp(const ProblemInstance& inst, const Vector& mu, Rng& rng,
                  const OracleOptions& opts = {});

/// Samples a uniform hyperplane and wraps the assignment into the cut
/// distribution action carrying the drawn seed.
Action maxcut_round(const Matrix& assignment, Rng& rng);

/// Full Max-Cut oracle: relaxation + rounding, trace with ell = 1.
OracleResult maxcut_oracle(const ProblemInstance& inst, const Vector& mu, Rng& rng,
                           const OracleOptions& opts = {});

/// Christofides: exact MST, exact minimum-weight perfect matching of the
/// odd-degree vertices (bitmask DP, at most 16 odd vertices), Eulerian
/// circuit, and shortcutting from a start edge drawn uniformly from the
/// multigraph. Also returns the per-edge survival probabilities q_e of the
/// uniform start rule.
OracleResult christofides(const ProblemInstance& inst, const Vector& mu, Rng& rng);

/// Exact MST of the complete graph under mu (Prim), as (parent, child) edges.
std::vector<std::pair<int, int>> minimum_spanning_tree(const ProblemInstance& inst,
                                                       const Vector& mu);

/// Exact minimum-weight perfect matching over the given vertices (<= 16) by
/// subset dynamic programming.
std::vector<std::pair<int, int>> min_weight_matching(const ProblemInstance& inst, const Vector& mu,
                                                     const std::vector<int>& odd);

/// Componentwise clamp of a sampled mean vector into the instance's declared
/// domain, applied before the oracle sees it.
Vector clamp_sample(const Vector& theta, const Interval& domain);

/// Dispatches to the instance's oracle.
OracleResult solve_instance(const ProblemInstance& inst, const Vector& mu, Rng& rng,
                            const OracleOptions& opts = {});

/// r_j(E_j, mu) re-evaluated for an arbitrary mean vector; used by the
/// reduction checker and the sub-reward smoothness tests.
Real sub_reward(const ProblemInstance& inst, const DecompositionTrace& trace, int j,
                const Vector& mu);

}  // namespace ctsim
