#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "ctsim/types.hpp"

namespace ctsim {

/// A set of chosen vertices, sorted ascending. Used for PMC / OIM seed sets,
/// k-center center sets and deterministic Max-Cut sides.
struct VertexSet {
    std::vector<int> ids;
};

/// A vertex cover produced by rounding a half-integral LP point.
struct Cover {
    std::vector<int> ids;  // sorted ascending
};

/// A Hamiltonian cycle given as a vertex sequence; the closing edge
/// (back to order.front()) is implicit.
struct Tour {
    std::vector<int> order;
};

/// A distribution over cuts: unit rows (one per vertex) plus the seed of the
/// hyperplane draw used for this round's feedback. The concrete cut is a
/// deterministic function of (vectors, hyperplane_seed).
struct CutDistribution {
    Matrix vectors;                  // |V| x r, rows unit 2-norm
    std::uint64_t hyperplane_seed = 0;
};

using Action = std::variant<VertexSet, Cover, Tour, CutDistribution>;

/// Canonical encoding used for deterministic tie-breaking: vertex sets and
/// covers compare as their sorted id lists, tours as the canonical rotation
/// (start at the smallest vertex, direction with the smaller successor).
std::vector<int> action_encoding(const Action& action);

/// true when `a` encodes lexicographically before `b`.
bool encoding_less(const Action& a, const Action& b);

/// Vertex side labels (+1 / -1) of the cut sampled from a distribution;
/// deterministic in the stored hyperplane seed.
std::vector<int> sampled_cut_sides(const CutDistribution& dist);

/// The set of arms (sorted distinct ids, all < n) whose outcomes were
/// revealed in a round.
struct TriggeredSet {
    std::vector<ArmId> arms;
};

}  // namespace ctsim
