#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nuelab/experiments.hpp"

namespace {

using nuelab::ExperimentConfig;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

ExperimentConfig resolve_config(const GlobalArgs& g) {
    ExperimentConfig cfg = nuelab::load_config(g.config_path);
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (g.seed_set) cfg.seed = g.seed;
    cfg.threads = g.threads;
    return cfg;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for random perturbations of non-uniformly expanding maps"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "experiment configuration file")->required();
    app.add_option("--out", g.out_dir, "output directory (overrides output.dir)");
    auto* seed_opt = app.add_option("--seed", g.seed, "override budgets.seed");
    app.add_option("--threads", g.threads, "worker thread count (0 = hardware)");

    auto* cmd_stability = app.add_subcommand("stability", "noise-level sweep of the stationary measure");
    auto* cmd_count = app.add_subcommand("count", "physical-measure count per noise level");
    auto* cmd_tail = app.add_subcommand("tail", "first-hyperbolic-time tail experiment");
    auto* cmd_viana = app.add_subcommand("viana-diag", "skew-product diagnostics (expansion, returns, foliation)");
    auto* cmd_orbit = app.add_subcommand("orbit", "dump one random orbit with per-step records");

    CLI11_PARSE(app, argc, argv);
    g.seed_set = seed_opt->count() > 0;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const ExperimentConfig cfg = resolve_config(g);
        std::vector<std::string> files;
        std::string command;
        bool inconsistent = false;

        if (cmd_stability->parsed()) {
            command = "stability";
            const auto rep = nuelab::run_stability_sweep(cfg);
            files = nuelab::emit_stability(rep, cfg);
            std::cout << "verdict: " << rep.verdict
                      << (rep.reference_is_proxy ? " (vs proxy reference)" : "") << "\n";
            inconsistent = rep.verdict == "inconsistent";
        } else if (cmd_count->parsed()) {
            command = "count";
            const auto rep = nuelab::run_physical_count(cfg);
            files = nuelab::emit_count(rep, cfg);
            for (const auto& r : rep.rows)
                std::cout << "epsilon " << nuelab::format_float(r.epsilon) << ": l = " << r.l << "\n";
            if (!rep.monotone) std::cout << "warning: l is not nonincreasing along the grid\n";
            if (!rep.l_within_srb_count) std::cout << "warning: l exceeds the known measure count\n";
            inconsistent = !rep.monotone || !rep.l_within_srb_count;
        } else if (cmd_tail->parsed()) {
            command = "tail";
            const auto rep = nuelab::run_tail_experiment(cfg);
            files = nuelab::emit_tail(rep, cfg);
            std::cout << "uniform tail statistic (N=" << cfg.tail_cutoff
                      << "): " << nuelab::format_float(rep.uniform_statistic) << "\n";
        } else if (cmd_viana->parsed()) {
            command = "viana-diag";
            const auto rep = nuelab::run_viana_diag(cfg);
            files = nuelab::emit_viana_diag(rep, cfg);
            std::cout << "expansion pass fraction: "
                      << nuelab::format_float(rep.expansion_pass_fraction)
                      << ", recurrence pass fraction: "
                      << nuelab::format_float(rep.recurrence_pass_fraction) << "\n";
            std::cout << "foliation: iterations " << rep.foliation.iterations << ", sup |xi| "
                      << nuelab::format_float(rep.foliation.field.sup_norm()) << ", lipschitz "
                      << nuelab::format_float(rep.foliation_lipschitz) << "\n";
        } else if (cmd_orbit->parsed()) {
            command = "orbit";
            const auto sys = cfg.make_system();
            const auto kernel = cfg.make_kernel(cfg.epsilons.front(), sys->domain().dim());
            nuelab::CounterRng rng(cfg.seed, 0x0A0Bull);
            nuelab::State x0 = sys->domain().sample_uniform(rng);
            while (sys->has_critical_set() &&
                   sys->critical_distance(x0).value_or(1.0) < 1e-9)
                x0 = sys->domain().sample_uniform(rng);
            const auto trace = nuelab::random_orbit(
                sys, kernel, x0, static_cast<int>(std::min<int64_t>(cfg.orbit_len, 1000000)),
                cfg.hyp_delta, cfg.seed, 0x0B0Cull);
            files = nuelab::emit_orbit(trace, cfg);
        }

        files.push_back(nuelab::write_manifest(cfg, command, seconds_since(t0)));
        for (const auto& f : files) std::cout << "wrote " << f << "\n";
        return inconsistent ? 4 : 0;
    } catch (const nuelab::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const nuelab::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
}
