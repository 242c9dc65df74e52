#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ctsim/environment.hpp"
#include "ctsim/model.hpp"
#include "ctsim/verify.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"

using namespace ctsim;
using namespace ctsim::testing;

namespace {

Vector random_means(const ProblemInstance& inst, Rng& rng) {
    std::uniform_real_distribution<Real> unif(inst.outcome_domain.lo, inst.outcome_domain.hi);
    Vector mu(inst.arm_count());
    for (int i = 0; i < mu.size(); ++i) mu[i] = unif(rng);
    return mu;
}

std::vector<ProblemInstance> one_of_each_kind() {
    std::vector<ProblemInstance> out;
    for (ProblemKind kind : {ProblemKind::PMC, ProblemKind::OIM, ProblemKind::KCenter,
                             ProblemKind::VertexCover, ProblemKind::MaxCut, ProblemKind::TSP}) {
        GeneratorSpec spec;
        spec.kind = kind;
        spec.seed = 5 + static_cast<int>(kind);
        spec.num_vertices = kind == ProblemKind::OIM ? 4 : 6;
        spec.k = 2;
        out.push_back(generate(spec));
    }
    return out;
}

}  // namespace

TEST_CASE("pmc reward closed form") {
    // Empty set covers nothing.
    const ProblemInstance k11 = pmc_k11(0.5);
    CHECK(reward(k11, VertexSet{{}}, k11.true_means) == doctest::Approx(0.0));
    CHECK(reward(k11, VertexSet{{0}}, k11.true_means) == doctest::Approx(0.5));

    // Random 4x4 instance matches the from-scratch evaluation on every
    // 2-subset.
    GeneratorSpec spec;
    spec.kind = ProblemKind::PMC;
    spec.seed = 3;
    spec.left_size = 4;
    spec.right_size = 4;
    spec.k = 2;
    const ProblemInstance inst = generate(spec);
    for_each_action(inst, [&](const Action& a) {
        const auto& ids = std::get<VertexSet>(a).ids;
        CHECK(reward(inst, a, inst.true_means) ==
              doctest::Approx(pmc_value_reference(inst, ids, inst.true_means)).epsilon(1e-12));
    });
}

TEST_CASE("oim reward is the exact spread") {
    const ProblemInstance path = oim_path(1.0, 1.0);
    CHECK(reward(path, VertexSet{{0}}, path.true_means) == doctest::Approx(3.0));

    const ProblemInstance half = oim_path(0.5, 0.5);
    CHECK(reward(half, VertexSet{{0}}, half.true_means) ==
          doctest::Approx(sigma_reference(half, {0}, half.true_means)).epsilon(1e-12));
    CHECK(reward(half, VertexSet{{0}}, half.true_means) == doctest::Approx(1.75));
}

TEST_CASE("minimization rewards are negated costs") {
    const ProblemInstance line = kcenter_line(2);
    CHECK(reward(line, VertexSet{{0, 2}}, line.true_means) == doctest::Approx(-1.0));

    const ProblemInstance vc = make_vc_instance(2, {{0, 1}}, {1.0, 2.0});
    CHECK(reward(vc, Cover{{0}}, vc.true_means) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(reward(vc, Cover{{}}, vc.true_means), std::invalid_argument);

    const ProblemInstance square = tsp_square();
    CHECK(reward(square, Tour{{0, 1, 2, 3}}, square.true_means) == doctest::Approx(-4.0));
}

TEST_CASE("reward rejects dimension mismatch") {
    const ProblemInstance k11 = pmc_k11(0.5);
    CHECK_THROWS_AS(reward(k11, VertexSet{{0}}, Vector::Ones(3)), std::invalid_argument);
}

TEST_CASE("triggering probabilities") {
    SUBCASE("pmc incident edges") {
        GeneratorSpec spec;
        spec.kind = ProblemKind::PMC;
        spec.seed = 9;
        spec.left_size = 3;
        spec.right_size = 2;
        spec.k = 1;
        const ProblemInstance inst = generate(spec);
        const auto p = triggering_probability(inst, VertexSet{{0}}, inst.arm_of_edge(0, 0), 0, 0);
        CHECK(p.estimate == 1.0);
        CHECK(p.stderr_ == 0.0);
        const auto q = triggering_probability(inst, VertexSet{{0}}, inst.arm_of_edge(1, 0), 0, 0);
        CHECK(q.estimate == 0.0);
    }
    SUBCASE("oim downstream edge through a coin") {
        const ProblemInstance path = oim_path(0.5, 0.9);
        const Vector p = triggering_probabilities(path, VertexSet{{0}});
        CHECK(p[path.arm_of_edge(0, 1)] == doctest::Approx(1.0));
        CHECK(p[path.arm_of_edge(1, 2)] == doctest::Approx(0.5));
    }
    SUBCASE("sum over arms bounded by largest triggerable set") {
        for (const auto& inst : one_of_each_kind()) {
            Rng rng = make_rng(11);
            int m = 0;
            for_each_action(inst, [&](const Action& a) {
                m = std::max(m, static_cast<int>(
                                    (triggering_probabilities(inst, a).array() > 0.0).count()));
            });
            for (int i = 0; i < 20; ++i) {
                const Action a = random_feasible_action(inst, rng, true);
                CHECK(triggering_probabilities(inst, a).sum() <= m + kCheckTol);
            }
        }
    }
}

TEST_CASE("empirical trigger frequencies match the exact probabilities") {
    GeneratorSpec spec;
    spec.kind = ProblemKind::OIM;
    spec.seed = 21;
    spec.num_vertices = 4;
    spec.k = 2;
    spec.edge_density = 0.6;
    const ProblemInstance inst = generate(spec);
    Rng rng = make_rng(7);
    const Action a = random_feasible_action(inst, rng, false);
    const Vector exact = triggering_probabilities(inst, a);
    const Environment env = make_environment(inst);
    const int steps = 20000;
    Vector hits = Vector::Zero(inst.arm_count());
    for (int s = 0; s < steps; ++s)
        for (ArmId arm : step(env, a, rng).triggered.arms) hits[arm] += 1.0;
    for (int i = 0; i < inst.arm_count(); ++i) {
        const Real se = std::sqrt(exact[i] * (1.0 - exact[i]) / steps);
        if (se == 0.0)
            CHECK(hits[i] / steps == exact[i]);
        else
            CHECK(std::abs(hits[i] / steps - exact[i]) <= 4.0 * se);
    }
}

TEST_CASE("smoothness inequality with the declared certificates") {
    SUBCASE("identical vectors give zero on both sides") {
        const ProblemInstance k11 = pmc_k11(0.3);
        const auto chk = check_smoothness(k11, VertexSet{{0}}, k11.true_means, k11.true_means);
        CHECK(chk.lhs == 0.0);
        CHECK(chk.rhs == 0.0);
        CHECK(chk.holds);
    }
    SUBCASE("random triples hold for every kind") {
        for (const auto& inst : one_of_each_kind()) {
            Rng rng = make_rng(1234 + static_cast<int>(inst.kind));
            for (int i = 0; i < 300; ++i) {
                const Action a = random_feasible_action(inst, rng, true);
                const Vector mu = random_means(inst, rng);
                const Vector mu2 = random_means(inst, rng);
                const auto chk = check_smoothness(inst, a, mu, mu2);
                CHECK(chk.holds);
            }
        }
    }
}

TEST_CASE("exact optimum") {
    SUBCASE("single-action pmc") {
        const ProblemInstance k11 = pmc_k11(0.5);
        const Optimum opt = exact_optimum(k11, k11.true_means);
        CHECK(std::get<VertexSet>(opt.action).ids == std::vector<int>{0});
        CHECK(opt.value == doctest::Approx(0.5));
    }
    SUBCASE("vertex cover single edge picks the cheap endpoint") {
        const ProblemInstance vc = make_vc_instance(2, {{0, 1}}, {1.0, 2.0});
        const Optimum opt = exact_optimum(vc, vc.true_means);
        CHECK(std::get<Cover>(opt.action).ids == std::vector<int>{0});
        CHECK(opt.value == doctest::Approx(-1.0));
    }
    SUBCASE("three-vertex tour is the unique triangle") {
        const ProblemInstance tri = make_instance(
            ProblemKind::TSP, 3, {{0, 1, 1.0}, {1, 2, 1.2}, {0, 2, 0.9}}, 0, 0, {0.0, 2.0});
        const Optimum opt = exact_optimum(tri, tri.true_means);
        CHECK(std::get<Tour>(opt.action).order == std::vector<int>{0, 1, 2});
        CHECK(opt.value == doctest::Approx(-3.1));
    }
    SUBCASE("argmax dominates every enumerated action") {
        for (const auto& inst : one_of_each_kind()) {
            if (inst.kind == ProblemKind::TSP) continue;  // covered by the held-karp case
            const Optimum opt = exact_optimum(inst, inst.true_means);
            for_each_action(inst, [&](const Action& a) {
                CHECK(opt.value >= reward(inst, a, inst.true_means) - 1e-12);
            });
        }
    }
    SUBCASE("held-karp equals permutation enumeration") {
        for (std::uint64_t seed : {1, 2, 3}) {
            GeneratorSpec spec;
            spec.kind = ProblemKind::TSP;
            spec.seed = seed;
            spec.num_vertices = 7;
            const ProblemInstance inst = generate(spec);
            const Optimum opt = exact_optimum(inst, inst.true_means);
            CHECK(opt.value ==
                  doctest::Approx(-tsp_optimum_reference(inst, inst.true_means)).epsilon(1e-12));
            CHECK(reward(inst, opt.action, inst.true_means) == doctest::Approx(opt.value));
        }
    }
    SUBCASE("oversized instance is refused with the enumeration count") {
        GeneratorSpec spec;
        spec.kind = ProblemKind::TSP;
        spec.seed = 4;
        spec.num_vertices = 14;
        const ProblemInstance inst = generate(spec);
        CHECK_THROWS_AS(exact_optimum(inst, inst.true_means), TooLargeError);
        try {
            exact_optimum(inst, inst.true_means);
        } catch (const TooLargeError& e) {
            CHECK(e.refused_count > 0);
        }
    }
}

TEST_CASE("instance constraints are validated by name") {
    ProblemInstance bad;
    bad.kind = ProblemKind::KCenter;
    bad.name = "bad";
    bad.num_vertices = 3;
    bad.k = 1;
    bad.edges = {{0, 1}, {0, 2}, {1, 2}};
    bad.true_means.resize(3);
    bad.true_means << 1.0, 1.0, 5.0;  // d(1,2) > d(1,0) + d(0,2)
    bad.outcome_domain = {0.0, 10.0};
    CHECK_THROWS_WITH_AS(finalize_instance(bad),
                         "instance constraint violated: triangle inequality",
                         std::invalid_argument);
}

TEST_CASE("monte-carlo triggering agrees with the environment beyond the ceiling") {
    // 30 directed edges put the instance past the world-enumeration limit,
    // so the estimator falls back to cascade simulation; the environment's
    // own triggering is an independent implementation of the same law.
    GeneratorSpec spec;
    spec.kind = ProblemKind::OIM;
    spec.seed = 99;
    spec.num_vertices = 6;
    spec.k = 2;
    spec.edge_density = 1.0;
    const ProblemInstance inst = generate(spec);
    REQUIRE(inst.arm_count() == 30);
    const Action action = VertexSet{{0, 1}};
    CHECK_THROWS_AS(triggering_probabilities(inst, action), TooLargeError);
    CHECK_THROWS_AS(triggering_probability(inst, action, 0, 0, 1), std::invalid_argument);

    const int samples = 40000;
    const Environment env = make_environment(inst);
    Rng rng = make_rng(12);
    Vector hits = Vector::Zero(inst.arm_count());
    for (int s = 0; s < samples; ++s)
        for (ArmId arm : step(env, action, rng).triggered.arms) hits[arm] += 1.0;
    for (ArmId arm = 0; arm < inst.arm_count(); ++arm) {
        const TriggerEstimate est = triggering_probability(inst, action, arm, samples, 500 + arm);
        const Real env_freq = hits[arm] / samples;
        const Real env_se = std::sqrt(env_freq * (1.0 - env_freq) / samples);
        CHECK(std::abs(est.estimate - env_freq) <= 4.0 * (est.stderr_ + env_se) + 1e-9);
    }
}

TEST_CASE("optimum ties break toward the smallest encoding") {
    // Two identical left vertices: {0} and {1} share the optimal value.
    const ProblemInstance twin =
        make_instance(ProblemKind::PMC, 3, {{0, 0, 0.5}, {1, 0, 0.5}}, 1, 2);
    const Optimum opt = exact_optimum(twin, twin.true_means);
    CHECK(std::get<VertexSet>(opt.action).ids == std::vector<int>{0});
}

TEST_CASE("tour encodings identify rotations and reflections") {
    const Tour a{{0, 1, 2, 3}};
    const Tour b{{2, 3, 0, 1}};
    const Tour c{{0, 3, 2, 1}};
    CHECK(action_encoding(a) == action_encoding(b));
    CHECK(action_encoding(a) == action_encoding(c));
    const Tour other{{0, 2, 1, 3}};
    CHECK(action_encoding(a) != action_encoding(other));
}

TEST_CASE("cut distributions must carry unit rows") {
    const ProblemInstance inst =
        make_instance(ProblemKind::MaxCut, 2, {{0, 1, 1.0}}, 0, 0, {0.0, 1.0});
    Matrix rows(2, 2);
    rows << 1.0, 0.0, 0.7, 0.0;  // second row is not unit
    CHECK_THROWS_AS(validate_action(inst, CutDistribution{rows, 0}, true),
                    std::invalid_argument);
}
