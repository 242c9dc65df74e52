#pragma once

#include <string>
#include <vector>

#include "ctsim/instance.hpp"

namespace ctsim {

struct LoadedInstance {
    ProblemInstance instance;
    std::vector<std::string> warnings;
};

/// Text format of an instance:
///   {"kind": ..., "vertices": n or [nL,nR], "edges": [[u,v,mean],...],
///    "k": ..., "alpha": ..., "B": [...], "outcome_domain": [lo,hi],
///    "vertex_costs": [...] (vertex cover), "name": ...}
/// Field order is irrelevant; unknown fields are rejected; alpha, B,
/// outcome_domain and name are optional and default per kind.
LoadedInstance parse_instance(const std::string& text);
LoadedInstance load_instance(const std::string& path);

std::string instance_to_json(const ProblemInstance& inst);
void save_instance(const ProblemInstance& inst, const std::string& path);

/// Mean-vector file: a JSON array with one value per arm.
Vector load_mean_vector(const std::string& path, int expected_arms);

}  // namespace ctsim
