#pragma once

#include <cstdint>

#include "ctsim/action.hpp"
#include "ctsim/instance.hpp"
#include "ctsim/rng.hpp"

namespace ctsim {

enum class OutcomeLawKind { BernoulliProduct, TruncGaussianProduct, Deterministic };

/// Product outcome law of the environment. Truncated-Gaussian outcomes are
/// centered at the true mean with a symmetric truncation window inside the
/// outcome domain, so every arm's outcome mean is exactly mu*_i and support
/// stays bounded (sub-Gaussian per the bounded range).
struct OutcomeLaw {
    OutcomeLawKind kind = OutcomeLawKind::BernoulliProduct;
    Real sigma = 0.1;  // TruncGaussianProduct only
};

/// Bernoulli coins for the [0,1]-mean problems, truncated Gaussians around
/// the distance-valued means elsewhere.
OutcomeLaw default_law(ProblemKind kind);

/// Immutable environment: instance + outcome law. OIM triggering depends on
/// the realized outcomes, which is only sound under a product law whose
/// outcomes are the live/blocked coins, so OIM rejects everything but
/// BernoulliProduct.
struct Environment {
    const ProblemInstance* instance = nullptr;
    OutcomeLaw law;
};

Environment make_environment(const ProblemInstance& inst);
Environment make_environment(const ProblemInstance& inst, const OutcomeLaw& law);

struct StepResult {
    TriggeredSet triggered;
    std::vector<Real> outcomes;  // aligned with triggered.arms; absent arms are absent
};

/// One environment interaction: draws the full outcome vector first, then
/// the triggered set from (action, outcomes), and reveals outcomes on
/// triggered arms only.
StepResult step(const Environment& env, const Action& action, Rng& rng);

/// Seeded instance generator. Metric kinds place points in the unit square,
/// so the triangle inequality holds by construction.
struct GeneratorSpec {
    ProblemKind kind = ProblemKind::PMC;
    std::uint64_t seed = 0;
    int num_vertices = 6;  // non-bipartite kinds
    int left_size = 5;     // PMC
    int right_size = 5;    // PMC
    int k = 2;             // PMC / OIM / KCenter
    Real mean_lo = 0.1;    // sampled mean range (probabilities or weights)
    Real mean_hi = 0.9;
    Real edge_density = 0.5;  // OIM / VertexCover / MaxCut
};

ProblemInstance generate(const GeneratorSpec& spec);

}  // namespace ctsim
