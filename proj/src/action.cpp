#include "ctsim/action.hpp"

#include <algorithm>

#include "ctsim/rng.hpp"

namespace ctsim {

namespace {

std::vector<int> canonical_tour(const std::vector<int>& order) {
    if (order.empty()) return {};
    const int n = static_cast<int>(order.size());
    int start = 0;
    for (int i = 1; i < n; ++i)
        if (order[i] < order[start]) start = i;
    // Direction with the smaller successor of the start vertex.
    int fwd = order[(start + 1) % n];
    int bwd = order[(start + n - 1) % n];
    std::vector<int> out(n);
    if (fwd <= bwd)
        for (int i = 0; i < n; ++i) out[i] = order[(start + i) % n];
    else
        for (int i = 0; i < n; ++i) out[i] = order[(start + n - i) % n];
    return out;
}

}  // namespace

std::vector<int> action_encoding(const Action& action) {
    if (const auto* vs = std::get_if<VertexSet>(&action)) return vs->ids;
    if (const auto* c = std::get_if<Cover>(&action)) return c->ids;
    if (const auto* t = std::get_if<Tour>(&action)) return canonical_tour(t->order);
    // Cut distributions are continuous objects; order by the sampled side.
    const auto& dist = std::get<CutDistribution>(action);
    return sampled_cut_sides(dist);
}

bool encoding_less(const Action& a, const Action& b) {
    const auto ea = action_encoding(a);
    const auto eb = action_encoding(b);
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
}

std::vector<int> sampled_cut_sides(const CutDistribution& dist) {
    Rng rng = make_rng(dist.hyperplane_seed);
    std::normal_distribution<Real> gauss(0.0, 1.0);
    Vector z(dist.vectors.cols());
    for (int i = 0; i < z.size(); ++i) z[i] = gauss(rng);
    const Real norm = z.norm();
    if (norm > 0.0) z /= norm;
    std::vector<int> sides(dist.vectors.rows());
    for (int u = 0; u < dist.vectors.rows(); ++u)
        sides[u] = dist.vectors.row(u).dot(z) >= 0.0 ? 1 : -1;
    return sides;
}

}  // namespace ctsim
