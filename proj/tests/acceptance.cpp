// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "ctsim/environment.hpp"
#include "ctsim/model.hpp"
#include "ctsim/oracles.hpp"
#include "ctsim/parallel.hpp"
#include "ctsim/policy.hpp"
#include "ctsim/regret.hpp"
#include "ctsim/verify.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/stats_test.hpp"

namespace fs = std::filesystem;
using namespace ctsim;
using namespace ctsim::testing;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

ProblemInstance desk_instance(ProblemKind kind, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    switch (kind) {
        case ProblemKind::PMC:
            spec.left_size = 5;
            spec.right_size = 5;
            spec.k = 2;
            break;
        case ProblemKind::OIM:
            spec.num_vertices = 4;
            spec.k = 2;
            spec.edge_density = 0.5;
            break;
        case ProblemKind::KCenter:
            spec.num_vertices = 6;
            spec.k = 3;
            break;
        case ProblemKind::VertexCover:
            spec.num_vertices = 7;
            spec.edge_density = 0.45;
            break;
        case ProblemKind::MaxCut:
            spec.num_vertices = 6;
            spec.edge_density = 0.6;
            break;
        case ProblemKind::TSP:
            spec.num_vertices = 6;
            break;
    }
    return generate(spec);
}

Vector random_theta(const ProblemInstance& inst, Rng& rng) {
    std::uniform_real_distribution<Real> unif(inst.outcome_domain.lo, inst.outcome_domain.hi);
    Vector theta(inst.arm_count());
    for (int i = 0; i < theta.size(); ++i) theta[i] = unif(rng);
    return theta;
}

constexpr std::array<ProblemKind, 6> kAllKinds = {ProblemKind::PMC,         ProblemKind::OIM,
                                                  ProblemKind::KCenter,     ProblemKind::VertexCover,
                                                  ProblemKind::MaxCut,      ProblemKind::TSP};

// -- criterion 1: the reduction inequality on 1000 random triples per problem
void criterion_reduce2exact() {
    const auto start = std::chrono::steady_clock::now();
    int checked = 0, held = 0;
    std::string first_failure;
    std::array<std::string, 6> notes;
    std::vector<int> counts(6, 0);
    parallel_for(6, 6, [&](int ki) {
        const ProblemKind kind = kAllKinds[ki];
        Rng rng = make_rng(90000 + ki);
        int ok = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const ProblemInstance inst =
                desk_instance(kind, 40000 + 1000 * ki + trial);
            const Vector theta = random_theta(inst, rng);
            const OracleResult res = solve_instance(inst, theta, rng);
            const ReduceCheck chk = check_reduce2exact(inst, res.trace, inst.true_means);
            if (chk.holds)
                ++ok;
            else if (notes[ki].empty())
                notes[ki] = std::string(kind_name(kind)) + " trial " + std::to_string(trial) +
                            ": lhs " + format_real(chk.lhs) + " rhs " + format_real(chk.rhs);
        }
        counts[ki] = ok;
    });
    for (int ki = 0; ki < 6; ++ki) {
        checked += 1000;
        held += counts[ki];
        if (!notes[ki].empty() && first_failure.empty()) first_failure = notes[ki];
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    std::ostringstream detail;
    detail << held << "/" << checked << " hold, slack 1e-9, " << secs.count() << " s";
    if (!first_failure.empty()) detail << "; first: " << first_failure;
    report(1, "reduction inequality across the six oracles", held == checked && secs.count() < 300.0,
           detail.str());
}

// -- criterion 2: smoothness with the declared certificates
void criterion_smoothness() {
    int checked = 0, held = 0;
    std::string first_failure;
    for (int ki = 0; ki < 6; ++ki) {
        const ProblemKind kind = kAllKinds[ki];
        Rng rng = make_rng(91000 + ki);
        for (int trial = 0; trial < 1000; ++trial) {
            const ProblemInstance inst = desk_instance(kind, 50000 + 1000 * ki + (trial % 40));
            const Action action = random_feasible_action(inst, rng, true);
            const Vector mu = random_theta(inst, rng);
            const Vector mu_prime = random_theta(inst, rng);
            const SmoothnessCheck chk = check_smoothness(inst, action, mu, mu_prime);
            ++checked;
            if (chk.holds)
                ++held;
            else if (first_failure.empty())
                first_failure = std::string(kind_name(kind)) + ": lhs " + format_real(chk.lhs) +
                                " rhs " + format_real(chk.rhs);
        }
    }
    std::ostringstream detail;
    detail << held << "/" << checked << " hold, slack 1e-9";
    if (!first_failure.empty()) detail << "; first: " << first_failure;
    report(2, "triggering-modulated smoothness", held == checked, detail.str());
}

// -- criterion 3: empirical trigger frequencies on the cascade path
void criterion_triggering() {
    const ProblemInstance path = oim_path(0.5, 0.5, 1);
    const Action action = VertexSet{{0}};
    const Vector exact = triggering_probabilities(path, action);
    const Environment env = make_environment(path);
    Rng rng = make_rng(92000);
    const int steps = 100000;
    Vector hits = Vector::Zero(path.arm_count());
    for (int s = 0; s < steps; ++s)
        for (ArmId arm : step(env, action, rng).triggered.arms) hits[arm] += 1.0;
    bool ok = true;
    std::ostringstream detail;
    for (int i = 0; i < path.arm_count(); ++i) {
        const Real freq = hits[i] / steps;
        const Real se = std::sqrt(exact[i] * (1.0 - exact[i]) / steps);
        const bool arm_ok = se == 0.0 ? freq == exact[i] : std::abs(freq - exact[i]) <= 4.0 * se;
        ok = ok && arm_ok;
        if (i) detail << ", ";
        detail << "arm " << i << " freq " << freq << " vs p " << exact[i];
    }
    report(3, "cascade triggering law over 1e5 steps", ok, detail.str());
}

// -- criterion 4: approximation ratios against brute force
void criterion_ratios() {
    int violations = 0;
    std::ostringstream detail;

    const Real coverage_ratio = 1.0 - std::exp(-1.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ProblemInstance inst = desk_instance(ProblemKind::PMC, 60000 + seed);
        Rng rng = make_rng(seed);
        const OracleResult res = greedy_submodular(inst, inst.true_means, rng);
        const Real value = reward(inst, res.action, inst.true_means);
        if (value < coverage_ratio * exact_optimum(inst, inst.true_means).value - 1e-9)
            ++violations;
    }
    detail << "coverage greedy vs (1-1/e)OPT on 100";

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ProblemInstance inst = desk_instance(ProblemKind::KCenter, 61000 + seed);
        const OracleResult res = kcenter_greedy(inst, inst.true_means);
        const Real cost = -reward(inst, res.action, inst.true_means);
        if (cost > 2.0 * kcenter_optimum_reference(inst, inst.true_means) + 1e-9) ++violations;
    }
    detail << ", k-center vs 2 OPT on 100";

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ProblemInstance inst = desk_instance(ProblemKind::VertexCover, 62000 + seed);
        const OracleResult res = vc_half_integral(inst, inst.true_means);
        const Real cost = -reward(inst, res.action, inst.true_means);
        if (cost > 2.0 * vc_cover_optimum_reference(inst, inst.true_means) + 1e-9) ++violations;
    }
    detail << ", cover vs 2 OPT on 100";

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorSpec spec;
        spec.kind = ProblemKind::TSP;
        spec.seed = 63000 + seed;
        spec.num_vertices = 5 + static_cast<int>(seed % 6);  // 5..10
        const ProblemInstance inst = generate(spec);
        Rng rng = make_rng(seed);
        const OracleResult res = christofides(inst, inst.true_means, rng);
        const Real cost = -reward(inst, res.action, inst.true_means);
        const Real opt = -exact_optimum(inst, inst.true_means).value;  // held-karp
        if (cost > 1.5 * opt + 1e-9) ++violations;
    }
    detail << ", tours vs 1.5 OPT on 50";

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorSpec spec;
        spec.kind = ProblemKind::MaxCut;
        spec.seed = 64000 + seed;
        spec.num_vertices = 5 + static_cast<int>(seed % 6);  // 5..10
        spec.edge_density = 0.6;
        const ProblemInstance inst = generate(spec);
        Rng rng = make_rng(seed);
        const OracleResult res = maxcut_oracle(inst, inst.true_means, rng);
        const Real expected_cut = reward(inst, res.action, inst.true_means);
        if (expected_cut < 0.878 * res.trace.subproblems[0].sub_reward - 1e-9) ++violations;
    }
    detail << ", rounded cut vs 0.878 relaxation on 50; violations: " << violations;
    report(4, "approximation ratios against brute force", violations == 0, detail.str());
}

// -- criterion 5: hyperplane crossing probability
void criterion_rounding_probability() {
    Rng rng = make_rng(93000);
    std::normal_distribution<Real> gauss(0.0, 1.0);
    const int dim = 4;
    const int samples = 100000;
    bool ok = true;
    Real worst_dev = 0.0;
    for (int pair = 0; pair < 20; ++pair) {
        Matrix rows(2, dim);
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < dim; ++c) rows(r, c) = gauss(rng);
            rows.row(r).normalize();
        }
        const Real p = std::acos(std::clamp(rows.row(0).dot(rows.row(1)), -1.0, 1.0)) / M_PI;
        int crossings = 0;
        for (int s = 0; s < samples; ++s) {
            CutDistribution dist{rows, rng()};
            const auto sides = sampled_cut_sides(dist);
            crossings += sides[0] != sides[1];
        }
        const Real freq = crossings / static_cast<Real>(samples);
        const Real se = std::sqrt(p * (1.0 - p) / samples);
        worst_dev = std::max(worst_dev, se > 0 ? std::abs(freq - p) / se : 0.0);
        ok = ok && std::abs(freq - p) <= 4.0 * se;
    }
    std::ostringstream detail;
    detail << "20 pairs, 1e5 hyperplanes each, worst deviation " << worst_dev << " stderr";
    report(5, "hyperplane crossing probability", ok, detail.str());
}

// -- criterion 6: relaxation solver accuracy on closed-form optima
void criterion_sdp_accuracy() {
    const ProblemInstance triangle = make_instance(
        ProblemKind::MaxCut, 3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}, 0, 0, {0.0, 1.0});
    Rng rng = make_rng(94000);
    const OracleResult tri = maxcut_oracle(triangle, triangle.true_means, rng);
    const Real tri_err = std::abs(tri.trace.subproblems[0].sub_reward - 2.25);

    const ProblemInstance cycle = make_instance(
        ProblemKind::MaxCut, 5,
        {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {0, 4, 1.0}}, 0, 0, {0.0, 1.0});
    const Real cycle_target = 2.5 * (1.0 + std::cos(M_PI / 5.0));
    const OracleResult c5 = maxcut_oracle(cycle, cycle.true_means, rng);
    const Real c5_err = std::abs(c5.trace.subproblems[0].sub_reward - cycle_target);

    std::ostringstream detail;
    detail << "triangle error " << tri_err << ", five-cycle error " << c5_err;
    report(6, "relaxation solver accuracy (1e-4)", tri_err <= 1e-4 && c5_err <= 1e-4, detail.str());
}

// -- criterion 7: posterior sampling distributions
void criterion_posteriors() {
    Rng rng = make_rng(95000);
    bool ok = true;
    Real min_p = 1.0;
    const std::vector<std::pair<Real, Real>> beta_params = {
        {1.0, 1.0}, {3.0, 2.0}, {10.0, 30.0}, {101.0, 1.0}, {2.5, 2.5}};
    for (const auto& [g, d] : beta_params) {
        BetaState state(1);
        state.gamma[0] = g;
        state.delta[0] = d;
        std::vector<Real> samples(10000);
        for (auto& s : samples) s = beta_sample(state, rng)[0];
        const Real p = ks_pvalue(10000, ks_statistic(samples, [&](Real x) {
                                     return beta_cdf(g, d, x);
                                 }));
        min_p = std::min(min_p, p);
        ok = ok && p > 0.001;
    }
    struct GaussSetting {
        Real mean;
        int count;
        Real beta;
    };
    const std::vector<GaussSetting> gauss_params = {
        {0.0, 1, 2.0}, {0.5, 8, 2.0}, {0.3, 100, 2.0}, {-0.2, 5, 4.0}, {1.0, 50, 1.5}};
    for (const auto& s : gauss_params) {
        GaussianState state(1, s.beta);
        state.mean[0] = s.mean;
        state.count[0] = s.count;
        const Real sigma = std::sqrt(s.beta / (4.0 * s.count));
        std::vector<Real> samples(10000);
        for (auto& x : samples) x = gaussian_sample(state, rng)[0];
        const Real p = ks_pvalue(10000, ks_statistic(samples, [&](Real x) {
                                     return normal_cdf((x - s.mean) / sigma);
                                 }));
        min_p = std::min(min_p, p);
        ok = ok && p > 0.001;
    }

    GaussianState var_state(1, 2.0);
    var_state.mean[0] = 0.0;
    var_state.count[0] = 8;
    Real sum = 0.0, sum_sq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Real x = gaussian_sample(var_state, rng)[0];
        sum += x;
        sum_sq += x * x;
    }
    const Real mean = sum / n;
    const Real var = (sum_sq - n * mean * mean) / (n - 1);
    ok = ok && var >= 0.055 && var <= 0.070;

    std::ostringstream detail;
    detail << "10 KS tests, min p " << min_p << "; variance at (beta 2, N 8): " << var;
    report(7, "posterior sampling laws", ok, detail.str());
}

// -- criterion 8: regret growth shape on the fixed coverage fixture
void criterion_regret_shape() {
    const auto start = std::chrono::steady_clock::now();
    const ProblemInstance fixture = pmc_fixture_5x5();
    const BoundDiagnostics diag = bound_diagnostics(fixture);
    bool ok = diag.delta_min > 0.0;
    std::ostringstream detail;
    detail << "delta_min " << diag.delta_min;

    const int horizon = 20000;
    const std::vector<int> checkpoints = {1000, 10000, 20000};
    for (PolicyKind policy :
         {PolicyKind::CtsBeta, PolicyKind::CtsGaussian, PolicyKind::RandomAction}) {
        std::vector<RegretLedger> ledgers(20);
        parallel_for(8, 20, [&](int seed) {
            EpisodeConfig cfg;
            cfg.horizon = horizon;
            cfg.seed = seed;
            cfg.policy = policy;
            const EpisodeResult res = run_episode(fixture, cfg);
            ledgers[seed] = make_ledger(fixture, policy_name(policy), seed, res.records);
        });
        const ScalingFit fit = scaling_fit(ledgers, checkpoints);
        const Real ratio = fit.ratios[1];  // R(2e4) / R(1e4)
        detail << "; " << policy_name(policy) << " ratio " << ratio;
        if (policy == PolicyKind::RandomAction) {
            ok = ok && ratio >= 1.9;
        } else {
            detail << " r2 " << fit.log_fit_r2;
            ok = ok && ratio <= 1.6 && fit.log_fit_r2 >= 0.95;
        }
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    detail << "; " << secs.count() << " s";
    report(8, "regret growth shape (20 seeds, T = 2e4)", ok && secs.count() < 600.0, detail.str());
}

// -- criterion 9: byte-identical outputs from the batch driver
void criterion_determinism() {
    const char* bin = std::getenv("CTSIM_BIN");
    const char* fixtures = std::getenv("CTSIM_FIXTURES");
    if (!bin || !fixtures) {
        report(9, "batch driver determinism", false, "CTSIM_BIN / CTSIM_FIXTURES not set");
        return;
    }
    const std::string dir = (fs::temp_directory_path() / "ctsim_acceptance_det").string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string config = dir + "/config.json";
    {
        std::ofstream out(config);
        out << R"({"instances": [")" << fixtures << R"(/pmc_5x5.json", ")" << fixtures
            << R"(/oim_path.json"], "policies": [{"policy": "cts-beta"}, {"policy": "cts-gaussian"}],)"
            << R"("horizon": 200, "seeds": [0, 4], "trace_posteriors": false})";
    }
    auto run_once = [&](const std::string& out_dir, int jobs) {
        const std::string cmd = std::string(bin) + " run --config " + config + " --out " + out_dir +
                                " --jobs " + std::to_string(jobs) + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool ok = run_once(dir + "/a", 1) && run_once(dir + "/b", 1) && run_once(dir + "/c", 4) &&
              run_once(dir + "/d", 7);
    int compared = 0;
    for (const char* file : {"/ledger.csv", "/plot.csv", "/diagnostics.csv",
                             "/diagnostics_arms.csv"}) {
        const std::string base = slurp(dir + "/a" + file);
        ok = ok && !base.empty();
        for (const char* other : {"/b", "/c", "/d"}) {
            ok = ok && base == slurp(dir + other + file);
            ++compared;
        }
    }
    std::ostringstream detail;
    detail << compared << " file comparisons across reruns and jobs 1/4/7";
    report(9, "batch driver determinism", ok, detail.str());
}

}  // namespace

int main() {
    criterion_reduce2exact();
    criterion_smoothness();
    criterion_triggering();
    criterion_ratios();
    criterion_rounding_probability();
    criterion_sdp_accuracy();
    criterion_posteriors();
    criterion_regret_shape();
    criterion_determinism();
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures;
}
