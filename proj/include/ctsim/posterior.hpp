#pragma once

#include <optional>

#include "ctsim/action.hpp"
#include "ctsim/rng.hpp"
#include "ctsim/types.hpp"

namespace ctsim {

/// Per-arm Beta(gamma, delta) belief. Both parameters start at 1 and grow by
/// Bernoulli increments, so gamma_i + delta_i - 2 always equals the number of
/// times arm i has been triggered.
struct BetaState {
    Vector gamma;
    Vector delta;

    explicit BetaState(int n) : gamma(Vector::Ones(n)), delta(Vector::Ones(n)) {}

    int arm_count() const { return static_cast<int>(gamma.size()); }
    Real trigger_count(ArmId i) const { return gamma[i] + delta[i] - 2.0; }
};

/// Per-arm (empirical mean, counter) belief with exploration width beta > 1.
/// Means of unseen arms carry a NaN sentinel rather than a silent zero; the
/// sampler never reads them (uniform fallback or the policy's initialization
/// covers count-zero arms).
struct GaussianState {
    Vector mean;
    IntVector count;
    Real beta = 2.0;
    std::optional<Interval> fallback_range;

    GaussianState(int n, Real beta_, std::optional<Interval> fallback = Interval{0.0, 1.0});

    int arm_count() const { return static_cast<int>(mean.size()); }
};

/// Independent per-arm Beta draws; every component lies strictly inside (0,1).
Vector beta_sample(const BetaState& state, Rng& rng);

/// Bernoulli-rounded update: for each triggered arm with outcome X in [0,1],
/// draws Y ~ Bernoulli(X) and increments gamma by Y, delta by 1 - Y.
/// Untriggered arms are untouched.
BetaState beta_update(const BetaState& state, const TriggeredSet& triggered,
                      const std::vector<Real>& outcomes, Rng& rng);

/// Independent draws theta_i ~ N(mean_i, beta / (4 count_i)); arms with
/// count 0 draw uniformly from the fallback range. Throws when a count-zero
/// arm has no fallback range.
Vector gaussian_sample(const GaussianState& state, Rng& rng);

/// Exact running-mean update (numerically stable incremental form) and
/// counter increment on triggered arms.
GaussianState gaussian_update(const GaussianState& state, const TriggeredSet& triggered,
                              const std::vector<Real>& outcomes);

}  // namespace ctsim
