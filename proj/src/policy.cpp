#include "ctsim/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ctsim/regret.hpp"
#include "ctsim/verify.hpp"

namespace ctsim {

const char* policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::CtsBeta: return "cts-beta";
        case PolicyKind::CtsGaussian: return "cts-gaussian";
        case PolicyKind::Cucb: return "cucb";
        case PolicyKind::RandomAction: return "random";
    }
    return "?";
}

PolicyKind policy_from_name(const std::string& name) {
    if (name == "cts-beta") return PolicyKind::CtsBeta;
    if (name == "cts-gaussian") return PolicyKind::CtsGaussian;
    if (name == "cucb") return PolicyKind::Cucb;
    if (name == "random") return PolicyKind::RandomAction;
    throw std::invalid_argument("unknown policy: " + name);
}

EpisodeRunner::EpisodeRunner(const ProblemInstance& inst, const EpisodeConfig& cfg)
    : inst_(inst),
      cfg_(cfg),
      env_(make_environment(inst)),
      rng_posterior_(make_rng(derive_seed(cfg.seed, 1))),
      rng_env_(make_rng(derive_seed(cfg.seed, 2))),
      rng_oracle_(make_rng(derive_seed(cfg.seed, 3))),
      trigger_counts_(IntVector::Zero(inst.arm_count())) {
    if (cfg.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    switch (cfg_.policy) {
        case PolicyKind::CtsBeta:
            beta_state_.emplace(inst.arm_count());
            break;
        case PolicyKind::CtsGaussian:
            gaussian_state_.emplace(inst.arm_count(), cfg.beta, Interval{0.0, 1.0});
            break;
        case PolicyKind::Cucb:
            cucb_mean_ = Vector::Zero(inst.arm_count());
            break;
        case PolicyKind::RandomAction:
            break;
    }
    optimum_ = exact_optimum(inst, inst.true_means);
    benchmark_ = optimum_.value;
    init_cap_ = cfg_.init_mode == InitMode::TriggerAllFirst ? 10 * inst.arm_count() : 0;
}

Vector EpisodeRunner::sample_theta_normalized() {
    switch (cfg_.policy) {
        case PolicyKind::CtsBeta:
            return beta_sample(*beta_state_, rng_posterior_);
        case PolicyKind::CtsGaussian: {
            const bool init_phase = cfg_.init_mode == InitMode::TriggerAllFirst &&
                                    t_ <= init_cap_ && (trigger_counts_.array() == 0).any();
            Vector theta(inst_.arm_count());
            for (int i = 0; i < inst_.arm_count(); ++i) {
                if (gaussian_state_->count[i] == 0) {
                    if (init_phase) {
                        theta[i] = 1.0;  // optimistic for still-untriggered arms
                    } else {
                        std::uniform_real_distribution<Real> unif(0.0, 1.0);
                        theta[i] = unif(rng_posterior_);
                    }
                } else {
                    std::normal_distribution<Real> gauss(0.0, 1.0);
                    theta[i] = gaussian_state_->mean[i] +
                               gauss(rng_posterior_) *
                                   std::sqrt(cfg_.beta / (4.0 * gaussian_state_->count[i]));
                }
            }
            return theta;
        }
        case PolicyKind::Cucb: {
            Vector index(inst_.arm_count());
            for (int i = 0; i < inst_.arm_count(); ++i)
                index[i] = cucb_index(cucb_mean_[i], trigger_counts_[i], t_);
            return index;
        }
        case PolicyKind::RandomAction:
            return Vector();
    }
    return Vector();
}

Action EpisodeRunner::random_action() {
    return random_feasible_action(inst_, rng_oracle_, false);
}

RoundRecord EpisodeRunner::play_round() {
    ++t_;
    RoundRecord record;
    record.t = t_;

    const Interval domain = inst_.outcome_domain;
    Action action;
    if (cfg_.policy == PolicyKind::RandomAction) {
        action = random_action();
    } else {
        const Vector theta_norm = sample_theta_normalized();
        Vector theta_domain(theta_norm.size());
        for (int i = 0; i < theta_norm.size(); ++i)
            theta_domain[i] = domain.lo + theta_norm[i] * domain.width();
        if (cfg_.trace_theta) record.theta = theta_domain;
        const Vector theta_oracle = clamp_sample(theta_domain, domain);
        action = solve_instance(inst_, theta_oracle, rng_oracle_, cfg_.oracle).action;
    }

    const StepResult fb = step(env_, action, rng_env_);
    std::vector<Real> normalized(fb.outcomes.size());
    for (size_t j = 0; j < fb.outcomes.size(); ++j)
        normalized[j] = (fb.outcomes[j] - domain.lo) / domain.width();
    if (beta_state_)
        beta_state_ = beta_update(*beta_state_, fb.triggered, normalized, rng_posterior_);
    if (gaussian_state_)
        gaussian_state_ = gaussian_update(*gaussian_state_, fb.triggered, normalized);
    if (cfg_.policy == PolicyKind::Cucb) {
        for (size_t j = 0; j < fb.triggered.arms.size(); ++j) {
            const ArmId i = fb.triggered.arms[j];
            cucb_mean_[i] += (normalized[j] - cucb_mean_[i]) / (trigger_counts_[i] + 1);
        }
    }
    for (ArmId i : fb.triggered.arms) trigger_counts_[i] += 1;

    record.action = action;
    record.triggered = fb.triggered;
    record.gap = approximation_gap(inst_, action, inst_.alpha, benchmark_, inst_.true_means);
    if (const auto* dist = std::get_if<CutDistribution>(&action)) {
        const auto sides = sampled_cut_sides(*dist);
        std::vector<int> side_a;
        for (int v = 0; v < inst_.num_vertices; ++v)
            if (sides[v] > 0) side_a.push_back(v);
        record.gap_sampled =
            approximation_gap(inst_, VertexSet{side_a}, inst_.alpha, benchmark_, inst_.true_means);
    } else {
        record.gap_sampled = record.gap;
    }

    if (cfg_.trace_posteriors) {
        for (int i = 0; i < inst_.arm_count(); ++i) {
            if (beta_state_)
                posterior_trace_.push_back({t_, i, beta_state_->gamma[i], beta_state_->delta[i]});
            else if (gaussian_state_)
                posterior_trace_.push_back(
                    {t_, i, gaussian_state_->mean[i], static_cast<Real>(gaussian_state_->count[i])});
        }
    }
    return record;
}

Real cucb_index(Real mean_normalized, int count, int t) {
    if (count == 0) return 1.0;
    return std::min(1.0,
                    mean_normalized + std::sqrt(1.5 * std::log(static_cast<Real>(t)) / count));
}

EpisodeResult run_episode(const ProblemInstance& inst, const EpisodeConfig& cfg) {
    EpisodeRunner runner(inst, cfg);
    EpisodeResult out;
    out.records.reserve(cfg.horizon);
    for (int t = 0; t < cfg.horizon; ++t) out.records.push_back(runner.play_round());
    out.trigger_counts = runner.trigger_counts();
    out.posterior_trace = runner.posterior_trace();
    return out;
}

}  // namespace ctsim
