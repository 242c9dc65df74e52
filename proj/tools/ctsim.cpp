// ctsim command line: batch experiment driver, instance generator, checker
// runner and standalone oracle solver.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctsim/environment.hpp"
#include "ctsim/instance_io.hpp"
#include "ctsim/oracles.hpp"
#include "ctsim/parallel.hpp"
#include "ctsim/policy.hpp"
#include "ctsim/regret.hpp"
#include "ctsim/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ctsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckerFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

struct PolicySetting {
    PolicyKind kind = PolicyKind::CtsBeta;
    Real beta = 2.0;
};

struct InstanceSource {
    std::string path;    // empty when generated
    GeneratorSpec spec;  // used when path is empty
};

struct RunSettings {
    std::vector<InstanceSource> instances;
    std::vector<PolicySetting> policies{{PolicyKind::CtsBeta, 2.0}};
    int horizon = 100;
    std::uint64_t seed_lo = 0;
    std::uint64_t seed_hi = 0;
    std::string out_dir = "out";
    bool checkers = false;
    bool trace_posteriors = false;
    int jobs = 1;
};

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    const auto pos = text.find("..");
    if (pos == std::string::npos) {
        const std::uint64_t s = std::stoull(text);
        return {s, s};
    }
    const std::uint64_t a = std::stoull(text.substr(0, pos));
    const std::uint64_t b = std::stoull(text.substr(pos + 2));
    if (b < a) throw std::invalid_argument("seed range must be a..b with a <= b");
    return {a, b};
}

RunSettings load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    static const std::set<std::string> known = {"instances", "policies", "horizon", "seeds",
                                                "out",       "checkers", "jobs",    "trace_posteriors"};
    for (const auto& [key, _] : doc.items())
        if (!known.count(key)) throw std::invalid_argument("config: unknown field " + key);

    RunSettings s;
    if (!doc.contains("instances") || !doc["instances"].is_array())
        throw std::invalid_argument("config: instances must be an array of paths or generator specs");
    for (const auto& entry : doc["instances"]) {
        InstanceSource source;
        if (entry.is_string()) {
            source.path = entry.get<std::string>();
        } else if (entry.is_object()) {
            static const std::set<std::string> gen_known = {"kind", "seed",    "vertices", "left",
                                                            "right", "k",      "mean_lo",  "mean_hi",
                                                            "density"};
            for (const auto& [key, _] : entry.items())
                if (!gen_known.count(key))
                    throw std::invalid_argument("config: unknown generator field " + key);
            source.spec.kind = kind_from_name(entry.at("kind").get<std::string>());
            source.spec.seed = entry.value("seed", 0);
            source.spec.num_vertices = entry.value("vertices", source.spec.num_vertices);
            source.spec.left_size = entry.value("left", source.spec.left_size);
            source.spec.right_size = entry.value("right", source.spec.right_size);
            source.spec.k = entry.value("k", source.spec.k);
            source.spec.mean_lo = entry.value("mean_lo", source.spec.mean_lo);
            source.spec.mean_hi = entry.value("mean_hi", source.spec.mean_hi);
            source.spec.edge_density = entry.value("density", source.spec.edge_density);
        } else {
            throw std::invalid_argument("config: instances entries are paths or generator specs");
        }
        s.instances.push_back(std::move(source));
    }
    if (doc.contains("policies")) {
        s.policies.clear();
        for (const auto& p : doc["policies"]) {
            PolicySetting ps;
            ps.kind = policy_from_name(p.at("policy").get<std::string>());
            ps.beta = p.value("beta", 2.0);
            s.policies.push_back(ps);
        }
    }
    s.horizon = doc.value("horizon", 100);
    if (doc.contains("seeds")) {
        const auto& sd = doc["seeds"];
        if (!sd.is_array() || sd.size() != 2)
            throw std::invalid_argument("config: seeds must be [first, last]");
        s.seed_lo = sd[0].get<std::uint64_t>();
        s.seed_hi = sd[1].get<std::uint64_t>();
        if (s.seed_hi < s.seed_lo) throw std::invalid_argument("config: empty seed range");
    }
    s.out_dir = doc.value("out", std::string("out"));
    s.checkers = doc.value("checkers", false);
    s.jobs = doc.value("jobs", 1);
    s.trace_posteriors = doc.value("trace_posteriors", false);
    if (s.horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
    return s;
}

std::string action_to_string(const ProblemInstance& inst, const Action& action) {
    std::ostringstream out;
    if (const auto* vs = std::get_if<VertexSet>(&action)) {
        out << "vertex-set {";
        for (size_t i = 0; i < vs->ids.size(); ++i) out << (i ? "," : "") << vs->ids[i];
        out << "}";
    } else if (const auto* c = std::get_if<Cover>(&action)) {
        out << "cover {";
        for (size_t i = 0; i < c->ids.size(); ++i) out << (i ? "," : "") << c->ids[i];
        out << "}";
    } else if (const auto* t = std::get_if<Tour>(&action)) {
        out << "tour ";
        for (size_t i = 0; i < t->order.size(); ++i) out << (i ? "-" : "") << t->order[i];
    } else if (const auto* d = std::get_if<CutDistribution>(&action)) {
        const auto sides = sampled_cut_sides(*d);
        out << "cut-distribution (sampled side {";
        bool first = true;
        for (int v = 0; v < inst.num_vertices; ++v)
            if (sides[v] > 0) {
                out << (first ? "" : ",") << v;
                first = false;
            }
        out << "})";
    }
    return out.str();
}

int cmd_run(const RunSettings& settings) {
    std::vector<ProblemInstance> instances;
    for (const auto& source : settings.instances) {
        if (source.path.empty()) {
            instances.push_back(generate(source.spec));
            continue;
        }
        LoadedInstance loaded = load_instance(source.path);
        for (const auto& w : loaded.warnings)
            std::cerr << "warning: " << source.path << ": " << w << "\n";
        instances.push_back(std::move(loaded.instance));
    }
    if (instances.empty()) throw std::invalid_argument("config: no instances");

    struct Job {
        int instance_idx;
        int policy_idx;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (int i = 0; i < static_cast<int>(instances.size()); ++i)
        for (int p = 0; p < static_cast<int>(settings.policies.size()); ++p)
            for (std::uint64_t s = settings.seed_lo; s <= settings.seed_hi; ++s)
                jobs.push_back({i, p, s});

    std::vector<RegretLedger> ledgers(jobs.size());
    std::vector<std::vector<PosteriorTraceRow>> traces(jobs.size());
    parallel_for(settings.jobs, static_cast<int>(jobs.size()), [&](int j) {
        const Job& job = jobs[j];
        EpisodeConfig cfg;
        cfg.horizon = settings.horizon;
        cfg.seed = job.seed;
        cfg.policy = settings.policies[job.policy_idx].kind;
        cfg.beta = settings.policies[job.policy_idx].beta;
        cfg.trace_posteriors = settings.trace_posteriors;
        const EpisodeResult result = run_episode(instances[job.instance_idx], cfg);
        ledgers[j] = make_ledger(instances[job.instance_idx], policy_name(cfg.policy), job.seed,
                                 result.records);
        traces[j] = result.posterior_trace;
    });

    std::error_code ec;
    fs::create_directories(settings.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + settings.out_dir);
    const std::string dir = settings.out_dir + "/";
    write_ledger_csv(dir + "ledger.csv", ledgers);
    write_plot_csv(dir + "plot.csv", ledgers, geometric_checkpoints(settings.horizon));
    std::vector<std::pair<std::string, BoundDiagnostics>> diags;
    for (const auto& inst : instances) {
        try {
            diags.emplace_back(inst.name, bound_diagnostics(inst));
        } catch (const TooLargeError& e) {
            std::cerr << "warning: diagnostics skipped for " << inst.name << ": " << e.what()
                      << "\n";
        }
    }
    write_diagnostics_csv(dir + "diagnostics.csv", dir + "diagnostics_arms.csv", diags);
    if (settings.trace_posteriors) {
        std::ofstream out(dir + "posteriors.csv");
        if (!out) throw std::runtime_error("cannot write posteriors.csv");
        out << "problem,policy,seed,t,arm,a,b\n";
        for (size_t j = 0; j < jobs.size(); ++j)
            for (const auto& row : traces[j])
                out << ledgers[j].instance_name << ',' << ledgers[j].policy << ','
                    << ledgers[j].seed << ',' << row.t << ',' << row.arm << ','
                    << format_real(row.a) << ',' << format_real(row.b) << '\n';
    }

    bool checkers_ok = true;
    if (settings.checkers) {
        std::ofstream out(dir + "checks.txt");
        if (!out) throw std::runtime_error("cannot write checks.txt");
        for (const auto& inst : instances) {
            const CheckReport report = run_verification(inst, VerifyOptions{});
            for (const auto& line : report.lines) {
                out << inst.name << ' ' << line.check << ' ' << line.passed << '/' << line.total
                    << (line.ok ? " PASS" : " FAIL " + line.detail) << '\n';
                std::cout << inst.name << ' ' << line.check << ' ' << line.passed << '/'
                          << line.total << (line.ok ? " PASS" : " FAIL " + line.detail) << '\n';
            }
            checkers_ok = checkers_ok && report.all_ok();
        }
    }
    std::cout << "wrote " << ledgers.size() << " ledgers to " << settings.out_dir << "\n";
    return checkers_ok ? kExitOk : kExitCheckerFailure;
}

int cmd_verify(const std::vector<std::string>& paths, const VerifyOptions& opts) {
    bool all_ok = true;
    for (const auto& path : paths) {
        LoadedInstance loaded = load_instance(path);
        for (const auto& w : loaded.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
        const CheckReport report = run_verification(loaded.instance, opts);
        for (const auto& line : report.lines)
            std::cout << loaded.instance.name << "  " << line.check << "  " << line.passed << '/'
                      << line.total << "  " << (line.ok ? "PASS" : "FAIL  " + line.detail) << "\n";
        all_ok = all_ok && report.all_ok();
    }
    return all_ok ? kExitOk : kExitCheckerFailure;
}

int cmd_solve(const std::string& instance_path, const std::string& mu_spec, std::uint64_t seed,
              int oim_samples) {
    LoadedInstance loaded = load_instance(instance_path);
    const ProblemInstance& inst = loaded.instance;
    Vector mu;
    if (mu_spec == "true")
        mu = inst.true_means;
    else
        mu = load_mean_vector(mu_spec, inst.arm_count());
    Rng rng = make_rng(seed);
    OracleOptions opts;
    opts.oim_spread_samples = oim_samples;
    const OracleResult res = solve_instance(inst, mu, rng, opts);
    std::cout << "instance: " << inst.name << " (" << kind_name(inst.kind) << ")\n";
    std::cout << "action: " << action_to_string(inst, res.action) << "\n";
    std::cout << "objective: " << format_real(reward(inst, res.action, mu)) << "\n";
    std::cout << "trace (" << res.trace.ell() << " sub-problems):\n";
    for (int j = 0; j < res.trace.ell(); ++j)
        std::cout << "  j=" << j + 1 << "  r_j=" << format_real(res.trace.subproblems[j].sub_reward)
                  << "  c_j=" << format_real(res.trace.subproblems[j].weight) << "\n";
    if (!res.start_edge_probs.empty()) {
        std::cout << "start-edge probabilities:\n";
        for (size_t e = 0; e < res.start_edge_probs.size(); ++e)
            std::cout << "  (" << res.multigraph_edges[e].first << ','
                      << res.multigraph_edges[e].second
                      << ") q=" << format_real(res.start_edge_probs[e]) << "\n";
    }
    if (inst.kind == ProblemKind::MaxCut || inst.kind == ProblemKind::TSP ||
        inst.kind == ProblemKind::OIM)
        std::cout << "seed: " << seed << "\n";
    return kExitOk;
}

int cmd_gen(const GeneratorSpec& spec, std::string out_path) {
    const ProblemInstance inst = generate(spec);
    if (out_path.empty()) out_path = inst.name + ".json";
    save_instance(inst, out_path);
    std::cout << "wrote " << out_path << " (" << inst.arm_count() << " arms)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial Thompson sampling simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run batch experiments from a config file");
    std::string config_path;
    std::string out_override, policy_override, seeds_override;
    int jobs_override = 0, horizon_override = 0;
    Real beta_flag = 2.0;
    bool trace_posteriors_flag = false;
    std::string checkers_override;
    run->add_option("--config", config_path, "run configuration file")->required();
    run->add_option("--out", out_override, "output directory override");
    run->add_option("--jobs", jobs_override, "worker threads");
    run->add_option("--policy", policy_override, "single policy override");
    run->add_option("--beta", beta_flag, "gaussian beta for --policy");
    run->add_option("--horizon", horizon_override, "round count override");
    run->add_option("--seeds", seeds_override, "seed range a..b");
    run->add_flag("--trace-posteriors", trace_posteriors_flag, "log posterior snapshots");
    run->add_option("--checkers", checkers_override, "on|off: run the checker corpus");

    // verify
    auto* verify = app.add_subcommand("verify", "run the checker corpus on instances");
    std::vector<std::string> verify_paths;
    VerifyOptions vopts;
    verify->add_option("instances", verify_paths, "instance files")->required();
    verify->add_option("--triples", vopts.smoothness_triples, "smoothness triples");
    verify->add_option("--eq4", vopts.reduce_checks, "reduction-inequality checks");
    verify->add_option("--steps", vopts.trigger_steps, "environment steps per trigger check");
    verify->add_option("--seed", vopts.seed, "checker seed");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    std::string gen_kind, gen_out;
    GeneratorSpec spec;
    gen->add_option("kind", gen_kind, "pmc|oim|kcenter|vertexcover|maxcut|tsp")->required();
    gen->add_option("--seed", spec.seed, "generator seed");
    gen->add_option("--vertices", spec.num_vertices, "vertex count");
    gen->add_option("--left", spec.left_size, "pmc left side size");
    gen->add_option("--right", spec.right_size, "pmc right side size");
    gen->add_option("--k", spec.k, "cardinality budget");
    gen->add_option("--mean-lo", spec.mean_lo, "mean range low");
    gen->add_option("--mean-hi", spec.mean_hi, "mean range high");
    gen->add_option("--density", spec.edge_density, "edge density");
    gen->add_option("--out", gen_out, "output file");

    // solve
    auto* solve = app.add_subcommand("solve", "run the oracle on one instance");
    std::string solve_instance_path, solve_mu = "true";
    std::uint64_t solve_seed = 0;
    int solve_samples = 1000;
    solve->add_option("instance", solve_instance_path, "instance file")->required();
    solve->add_option("--mu", solve_mu, "mean vector file, or 'true' for the true means");
    solve->add_option("--seed", solve_seed, "oracle seed");
    solve->add_option("--samples", solve_samples, "oim monte-carlo spread budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (run->parsed()) {
            RunSettings settings = load_run_config(config_path);
            if (!out_override.empty()) settings.out_dir = out_override;
            if (jobs_override > 0) settings.jobs = jobs_override;
            if (horizon_override > 0) settings.horizon = horizon_override;
            if (!policy_override.empty())
                settings.policies = {{policy_from_name(policy_override), beta_flag}};
            if (!seeds_override.empty()) {
                const auto [a, b] = parse_seed_range(seeds_override);
                settings.seed_lo = a;
                settings.seed_hi = b;
            }
            if (trace_posteriors_flag) settings.trace_posteriors = true;
            if (!checkers_override.empty()) {
                if (checkers_override != "on" && checkers_override != "off")
                    throw std::invalid_argument("--checkers takes on|off");
                settings.checkers = checkers_override == "on";
            }
            return cmd_run(settings);
        }
        if (verify->parsed()) return cmd_verify(verify_paths, vopts);
        if (gen->parsed()) {
            spec.kind = kind_from_name(gen_kind);
            return cmd_gen(spec, gen_out);
        }
        if (solve->parsed()) return cmd_solve(solve_instance_path, solve_mu, solve_seed, solve_samples);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    return kExitOk;
}
