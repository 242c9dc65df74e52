#include "ctsim/posterior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctsim {

GaussianState::GaussianState(int n, Real beta_, std::optional<Interval> fallback)
    : mean(Vector::Constant(n, std::numeric_limits<Real>::quiet_NaN())),
      count(IntVector::Zero(n)),
      beta(beta_),
      fallback_range(fallback) {
    if (beta <= 1.0) throw std::invalid_argument("gaussian posterior requires beta > 1");
}

Vector beta_sample(const BetaState& state, Rng& rng) {
    Vector theta(state.arm_count());
    for (int i = 0; i < state.arm_count(); ++i) {
        std::gamma_distribution<Real> ga(state.gamma[i], 1.0);
        std::gamma_distribution<Real> gb(state.delta[i], 1.0);
        const Real x = ga(rng);
        const Real y = gb(rng);
        Real t = x + y > 0.0 ? x / (x + y) : 0.5;
        // Keep draws strictly inside the open support.
        t = std::min(std::max(t, std::numeric_limits<Real>::min()),
                     1.0 - std::numeric_limits<Real>::epsilon());
        theta[i] = t;
    }
    return theta;
}

BetaState beta_update(const BetaState& state, const TriggeredSet& triggered,
                      const std::vector<Real>& outcomes, Rng& rng) {
    if (triggered.arms.size() != outcomes.size())
        throw std::invalid_argument("outcomes must align with the triggered set");
    BetaState next = state;
    std::uniform_real_distribution<Real> unif(0.0, 1.0);
    for (size_t j = 0; j < triggered.arms.size(); ++j) {
        const Real x = outcomes[j];
        if (x < 0.0 || x > 1.0) throw std::invalid_argument("beta update outcome outside [0,1]");
        const bool success = unif(rng) < x;
        const ArmId i = triggered.arms[j];
        if (success)
            next.gamma[i] += 1.0;
        else
            next.delta[i] += 1.0;
    }
    return next;
}

Vector gaussian_sample(const GaussianState& state, Rng& rng) {
    Vector theta(state.arm_count());
    std::normal_distribution<Real> gauss(0.0, 1.0);
    std::uniform_real_distribution<Real> unif(0.0, 1.0);
    for (int i = 0; i < state.arm_count(); ++i) {
        if (state.count[i] == 0) {
            if (!state.fallback_range)
                throw std::runtime_error("gaussian sample: arm with zero count and no fallback range");
            theta[i] = state.fallback_range->lo + unif(rng) * state.fallback_range->width();
        } else {
            theta[i] = state.mean[i] + gauss(rng) * std::sqrt(state.beta / (4.0 * state.count[i]));
        }
    }
    return theta;
}

GaussianState gaussian_update(const GaussianState& state, const TriggeredSet& triggered,
                              const std::vector<Real>& outcomes) {
    if (triggered.arms.size() != outcomes.size())
        throw std::invalid_argument("outcomes must align with the triggered set");
    GaussianState next = state;
    for (size_t j = 0; j < triggered.arms.size(); ++j) {
        const ArmId i = triggered.arms[j];
        next.count[i] += 1;
        if (next.count[i] == 1)
            next.mean[i] = outcomes[j];
        else
            next.mean[i] += (outcomes[j] - next.mean[i]) / next.count[i];
    }
    return next;
}

}  // namespace ctsim
