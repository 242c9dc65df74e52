#include <cmath>
#include <stdexcept>
#include <string>

#include "ctsim/oracles.hpp"

namespace ctsim {

namespace {

Real relaxation_value(const ProblemInstance& inst, const Vector& mu, const Matrix& rows) {
    Real total = 0.0;
    for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e)
        total += 0.5 * mu[e] * (1.0 - rows.row(inst.edges[e].u).dot(rows.row(inst.edges[e].v)));
    return total;
}

}  // namespace

Matrix maxcut_sdp(const ProblemInstance& inst, const Vector& mu, Rng& rng,
                  const OracleOptions& opts) {
    if (inst.kind != ProblemKind::MaxCut)
        throw std::invalid_argument("maxcut_sdp needs a max-cut instance");
    if ((mu.array() < 0.0).any())
        throw std::invalid_argument("max-cut weights must be nonnegative");
    const int n = inst.num_vertices;
    const int min_rank = static_cast<int>(std::ceil(std::sqrt(2.0 * n)));
    const int rank = opts.sdp_rank > 0 ? opts.sdp_rank : min_rank;
    if (rank < min_rank)
        throw std::invalid_argument("sdp rank below ceil(sqrt(2|V|)) = " + std::to_string(min_rank));

    std::normal_distribution<Real> gauss(0.0, 1.0);
    Matrix rows(n, rank);
    for (int u = 0; u < n; ++u) {
        for (int r = 0; r < rank; ++r) rows(u, r) = gauss(rng);
        rows.row(u).normalize();
    }

    // Projected coordinate-gradient ascent: each row moves along its exact
    // gradient -sum_v w_uv v_v and is renormalized, which maximizes the
    // row's terms given the others, so the objective never decreases.
    Real value = relaxation_value(inst, mu, rows);
    for (int iter = 0; iter < opts.sdp_max_iters; ++iter) {
        for (int u = 0; u < n; ++u) {
            Eigen::RowVectorXd grad = Eigen::RowVectorXd::Zero(rank);
            for (int e = 0; e < static_cast<int>(inst.edges.size()); ++e) {
                if (inst.edges[e].u == u)
                    grad -= mu[e] * rows.row(inst.edges[e].v);
                else if (inst.edges[e].v == u)
                    grad -= mu[e] * rows.row(inst.edges[e].u);
            }
            const Real norm = grad.norm();
            if (norm > 0.0) rows.row(u) = grad / norm;
        }
        const Real next = relaxation_value(inst, mu, rows);
        if (std::abs(next - value) <= opts.sdp_tol * std::max(1.0, std::abs(next))) return rows;
        value = next;
    }
    throw std::runtime_error("maxcut_sdp did not converge after " +
                             std::to_string(opts.sdp_max_iters) +
                             " sweeps; last objective " + std::to_string(value));
}

Action maxcut_round(const Matrix& assignment, Rng& rng) {
    CutDistribution dist;
    dist.vectors = assignment;
    for (int u = 0; u < dist.vectors.rows(); ++u) dist.vectors.row(u).normalize();
    dist.hyperplane_seed = rng();
    return dist;
}

OracleResult maxcut_oracle(const ProblemInstance& inst, const Vector& mu, Rng& rng,
                           const OracleOptions& opts) {
    const Matrix rows = maxcut_sdp(inst, mu, rng, opts);
    OracleResult out;
    SubSolution sub;
    sub.payload = rows;
    sub.sub_reward = relaxation_value(inst, mu, rows);
    sub.weight = inst.alpha;
    out.trace.subproblems.push_back(std::move(sub));
    out.action = maxcut_round(rows, rng);
    out.trace.final_action = out.action;
    return out;
}

}  // namespace ctsim
