#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "ctsim/action.hpp"
#include "ctsim/instance.hpp"

namespace ctsim {

/// Thrown when an exhaustive operation would exceed its enumeration ceiling.
struct TooLargeError : std::runtime_error {
    TooLargeError(const std::string& what, std::uint64_t refused)
        : std::runtime_error(what), refused_count(refused) {}
    std::uint64_t refused_count;
};

/// Checks structural validity of an action for an instance (id ranges,
/// sortedness, unit norms, Hamiltonicity, cover property). With
/// `as_play = true` also enforces action-space membership (|A| = k for
/// cardinality problems). Throws std::invalid_argument.
void validate_action(const ProblemInstance& inst, const Action& action, bool as_play);

/// Exact expected reward r(A, mu). Minimization problems return the negated
/// cost so that higher is better for every kind. Cut distributions evaluate
/// to their closed-form expected crossing weight.
Real reward(const ProblemInstance& inst, const Action& action, const Vector& mu);

/// Exact influence spread under the independent cascade model, by
/// enumeration over edge worlds. Requires |E| <= 20.
Real sigma_exact(const ProblemInstance& inst, const std::vector<int>& seeds, const Vector& mu);

/// Exact triggering probability of every arm under the given action
/// (Definition-1 probabilities). OIM uses world enumeration (|E| <= 20);
/// everything else is closed-form.
Vector triggering_probabilities(const ProblemInstance& inst, const Action& action);

struct TriggerEstimate {
    Real estimate = 0.0;
    Real stderr_ = 0.0;
};

/// Per-arm triggering probability; exact where possible, Monte-Carlo with
/// reported standard error for OIM instances beyond the enumeration ceiling.
TriggerEstimate triggering_probability(const ProblemInstance& inst, const Action& action,
                                       ArmId arm, int mc_samples, std::uint64_t rng_seed);

struct SmoothnessCheck {
    Real lhs = 0.0;
    Real rhs = 0.0;
    bool holds = false;
};

/// Evaluates the triggering-probability-modulated smoothness inequality
/// |r(A,mu) - r(A,mu')| <= sum_i p_i(A) B_i |mu_i - mu'_i| with the
/// instance's certificate B and slack kCheckTol.
SmoothnessCheck check_smoothness(const ProblemInstance& inst, const Action& action,
                                 const Vector& mu, const Vector& mu_prime);

struct Optimum {
    Action action;
    Real value = 0.0;
};

/// Exhaustive argmax of reward over the action space; ties broken by the
/// lexicographically smallest action encoding. TSP uses Held-Karp dynamic
/// programming with lexicographic reconstruction. Throws TooLargeError above
/// the desk-scale ceilings (C(n,k) <= 1e6, |V| <= 12).
Optimum exact_optimum(const ProblemInstance& inst, const Vector& mu);

/// Number of actions exact_optimum would enumerate.
std::uint64_t action_space_size(const ProblemInstance& inst);

/// Visits every action in the action space in encoding order (TSP limited to
/// |V| <= 10). Used by the diagnostics and brute-force checkers.
void for_each_action(const ProblemInstance& inst, const std::function<void(const Action&)>& fn);

}  // namespace ctsim
