#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nuelab/noise.hpp"

namespace nuelab {

// Flat key=value configuration with dotted sections. Unknown keys are
// rejected (fail-closed); '#' starts a comment.
//
//   system.name = doubling | fig1 | fig2 | viana | torus
//   system.<param> = <value>            forwarded to build_system
//   kernel.mode = additive | rotational
//   kernel.epsilons = 0.1, 0.05, 0.01   strictly decreasing
//   hyp.alpha, hyp.delta
//   thresholds.expansion_c, thresholds.recurrence_gamma,
//   thresholds.cluster_merge, thresholds.stability_tol
//   budgets.orbit_len, budgets.samples, budgets.starts, budgets.n_max,
//   budgets.seed, budgets.tail_cutoff, budgets.bins
//   output.dir
struct ExperimentConfig {
    std::string system_name;
    ParamMap system_params;

    NoiseKernel::Mode kernel_mode = NoiseKernel::Mode::Additive;
    std::vector<double> epsilons;

    double hyp_alpha = 0.5;
    double hyp_delta = 0.1;

    double expansion_c = 0.01;
    double recurrence_gamma = 0.05;
    double cluster_merge = 0.02;
    double stability_tol = 0.02;

    int64_t orbit_len = 200000;
    int64_t samples = 2000;
    int starts = 10;
    int n_max = 64;
    uint64_t seed = 1;
    int tail_cutoff = 3;
    int bins = 128;

    std::string out_dir = "out";
    int threads = 0; // 0 = hardware default

    void validate() const; // throws ValidationError listing violations

    SystemPtr make_system() const;
    NoiseKernel make_kernel(double epsilon, int domain_dim) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

} // namespace nuelab
