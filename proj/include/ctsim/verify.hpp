#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctsim/instance.hpp"
#include "ctsim/rng.hpp"

namespace ctsim {

struct VerifyOptions {
    int smoothness_triples = 1000;
    int reduce_checks = 1000;
    int trigger_steps = 100000;
    int trigger_actions = 3;
    std::uint64_t seed = 1;
};

struct CheckLine {
    std::string check;
    int passed = 0;
    int total = 0;
    bool ok = false;
    std::string detail;
};

struct CheckReport {
    std::vector<CheckLine> lines;
    bool all_ok() const {
        for (const auto& l : lines)
            if (!l.ok) return false;
        return true;
    }
};

/// Runs the checker corpus on one instance: smoothness triples with the
/// declared B, reduction-inequality checks on oracle traces from random
/// sampled means, and empirical trigger frequencies against the exact
/// triggering probabilities (4 standard errors).
CheckReport run_verification(const ProblemInstance& inst, const VerifyOptions& opts);

/// Random feasible action: uniform k-subset, coin-flipped repaired cover,
/// random cut side or random tour. For Max-Cut, every second draw is a
/// random unit-vector cut distribution when allowed.
Action random_feasible_action(const ProblemInstance& inst, Rng& rng,
                              bool allow_cut_distributions = false);

}  // namespace ctsim
