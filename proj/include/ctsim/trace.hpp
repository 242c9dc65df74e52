#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "ctsim/action.hpp"
#include "ctsim/types.hpp"

namespace ctsim {

/// One exactly-solved sub-problem solution E_j. Greedy problems store the
/// chosen prefix, vertex cover the half-integral point, Max-Cut the unit
/// vector assignment, and TSP the tree / matching edge sets.
struct SubSolution {
    std::variant<std::vector<int>,                 // greedy prefix a_1..a_j
                 Vector,                           // half-integral x
                 Matrix,                           // unit vector rows
                 std::vector<std::pair<int, int>>  // edge set
                 >
        payload;
    Real sub_reward = 0.0;  // r_j(E_j, mu) under the oracle's input mu
    Real weight = 0.0;      // c_j; for PMC/OIM only the (1-1/k)^(k-j)/k factor,
                            // the checker multiplies in |A* \ A^(j-1)|
};

/// The sequence E_1..E_ell produced by the oracle's exact stage, plus the
/// assembled action. Feeds the reduction-inequality checker.
struct DecompositionTrace {
    std::vector<SubSolution> subproblems;
    Action final_action;

    int ell() const { return static_cast<int>(subproblems.size()); }
};

}  // namespace ctsim
