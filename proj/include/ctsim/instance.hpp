#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctsim/action.hpp"
#include "ctsim/types.hpp"

namespace ctsim {

enum class ProblemKind { PMC, OIM, KCenter, VertexCover, MaxCut, TSP };

const char* kind_name(ProblemKind kind);
ProblemKind kind_from_name(const std::string& name);

/// true for problems whose natural objective is a cost to minimize
/// (k-center, vertex cover, TSP). They are exposed as maximization of the
/// negated cost, so rewards are <= 0 for them.
bool is_minimization(ProblemKind kind);

struct EdgeRef {
    int u = 0;  // PMC: left vertex; OIM: source
    int v = 0;  // PMC: right vertex; OIM: target
};

/// One of the six environments: a weighted graph, the cardinality budget
/// where applicable, the true arm means, the oracle's approximation ratio
/// and the per-arm smoothness certificate B.
///
/// Arms are indexed 0..n-1: one per edge (in the stored, canonically sorted
/// edge order) for every kind except vertex cover, where arms are vertices.
/// Instances are immutable after construction and safe to share across
/// threads.
struct ProblemInstance {
    ProblemKind kind = ProblemKind::PMC;
    std::string name;

    int num_vertices = 0;  // PMC: |L| + |R|
    int left_size = 0;     // PMC only: |L|; right vertices are 0..|R|-1 on their own side
    std::vector<EdgeRef> edges;
    int k = 0;  // cardinality budget (PMC, OIM, KCenter)

    Vector true_means;  // per arm
    Real alpha = 1.0;
    Vector smoothness_b;      // per arm, nonnegative
    Interval outcome_domain;  // domain M of the means / outcomes

    int arm_count() const {
        return kind == ProblemKind::VertexCover ? num_vertices : static_cast<int>(edges.size());
    }
    int right_size() const { return num_vertices - left_size; }

    /// Arm id of edge (u,v); -1 when absent. Symmetric lookup for undirected
    /// kinds, directed for OIM.
    int arm_of_edge(int u, int v) const;

    /// Distance/weight between u and v under `mu` (complete-graph kinds).
    Real edge_value(const Vector& mu, int u, int v) const;

    /// Out-neighbors with arm ids (OIM).
    const std::vector<std::pair<int, int>>& out_edges(int u) const { return out_edges_[u]; }
    /// Edges incident to a right vertex (PMC): (left vertex, arm id).
    const std::vector<std::pair<int, int>>& cover_edges(int v) const { return cover_edges_[v]; }
    /// Arms incident to a left vertex (PMC).
    const std::vector<int>& left_arms(int u) const { return left_arms_[u]; }

    /// Builds adjacency caches; called once by make_instance.
    void build_caches();

private:
    IndexMatrix edge_index_;
    std::vector<std::vector<std::pair<int, int>>> out_edges_;
    std::vector<std::vector<std::pair<int, int>>> cover_edges_;
    std::vector<std::vector<int>> left_arms_;
};

/// Default approximation ratio of the bundled oracle for each problem.
Real default_alpha(ProblemKind kind);

/// Goemans-Williamson constant (2/pi) min_theta theta/(1-cos theta).
Real gw_alpha();

/// Default smoothness certificate: all-ones except OIM, where every entry is
/// the largest number of nodes any single node can reach in the support graph
/// of `means`.
Vector default_smoothness(const ProblemInstance& inst);

/// Largest number of nodes reachable from any single vertex through edges
/// with mean > 0 (OIM smoothness constant).
int max_reach(const ProblemInstance& inst, const Vector& means);

/// Validates invariants (alpha in (0,1], triangle inequality for metric
/// kinds, mean ranges, B >= 0, completeness where required), sorts edges
/// canonically and builds caches. Throws std::invalid_argument naming the
/// violated constraint. Returns non-fatal warnings (e.g. OIM edges with zero
/// probability, whose triggering can never be observed).
std::vector<std::string> finalize_instance(ProblemInstance& inst);

}  // namespace ctsim
