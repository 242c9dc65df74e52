#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctsim/environment.hpp"
#include "ctsim/model.hpp"
#include "ctsim/oracles.hpp"
#include "ctsim/posterior.hpp"

namespace ctsim {

enum class PolicyKind { CtsBeta, CtsGaussian, Cucb, RandomAction };

const char* policy_name(PolicyKind kind);
PolicyKind policy_from_name(const std::string& name);

enum class InitMode { UniformFallback, TriggerAllFirst };

struct EpisodeConfig {
    int horizon = 1000;
    std::uint64_t seed = 0;
    PolicyKind policy = PolicyKind::CtsBeta;
    Real beta = 2.0;  // CtsGaussian only, must be > 1
    InitMode init_mode = InitMode::UniformFallback;
    bool trace_theta = false;
    bool trace_posteriors = false;
    OracleOptions oracle;
};

struct RoundRecord {
    int t = 0;
    Action action;
    TriggeredSet triggered;
    Real gap = 0.0;          // expected approximation gap of the played action
    Real gap_sampled = 0.0;  // gap of the realized cut for Max-Cut; equals gap elsewhere
    std::optional<Vector> theta;  // domain-scale sample fed to the oracle (pre-clamp)
};

struct PosteriorTraceRow {
    int t = 0;
    ArmId arm = 0;
    Real a = 0.0;  // gamma or empirical mean
    Real b = 0.0;  // delta or counter
};

struct EpisodeResult {
    std::vector<RoundRecord> records;
    IntVector trigger_counts;  // N_{i,T}
    std::vector<PosteriorTraceRow> posterior_trace;
};

/// Optimistic index mean + sqrt(1.5 ln t / count) in [0,1] scale, clipped to
/// the domain; a count of zero yields the domain upper bound.
Real cucb_index(Real mean_normalized, int count, int t);

/// Sequential decision loop over one episode: sample / index, oracle, play,
/// observe, update. Posteriors live in [0,1] scale (outcomes are affinely
/// normalized by the declared domain); the oracle sees the sample mapped back
/// to domain scale and clamped. One master seed is split into posterior /
/// environment / oracle substreams, so results do not depend on how much
/// randomness the oracle consumes internally.
class EpisodeRunner {
public:
    EpisodeRunner(const ProblemInstance& inst, const EpisodeConfig& cfg);

    /// Plays round t (1-based), updates state and returns the record.
    RoundRecord play_round();

    const IntVector& trigger_counts() const { return trigger_counts_; }
    const std::vector<PosteriorTraceRow>& posterior_trace() const { return posterior_trace_; }
    Real benchmark() const { return benchmark_; }

private:
    Vector sample_theta_normalized();
    Action random_action();

    const ProblemInstance& inst_;
    EpisodeConfig cfg_;
    Environment env_;
    Rng rng_posterior_;
    Rng rng_env_;
    Rng rng_oracle_;
    std::optional<BetaState> beta_state_;
    std::optional<GaussianState> gaussian_state_;
    Vector cucb_mean_;
    IntVector trigger_counts_;
    Optimum optimum_;
    Real benchmark_ = 0.0;  // r(A*, mu*), the optimal expected reward
    int t_ = 0;
    int init_cap_ = 0;
    std::vector<PosteriorTraceRow> posterior_trace_;
};

/// Runs a full episode of `cfg.horizon` rounds (horizon >= 1 required).
/// Identical (instance, config) pairs produce bit-identical results.
EpisodeResult run_episode(const ProblemInstance& inst, const EpisodeConfig& cfg);

}  // namespace ctsim
