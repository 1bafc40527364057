#pragma once

#include <functional>
#include <optional>

#include "nuelab/noise.hpp"

namespace nuelab {

// One random (or deterministic) orbit with per-step expansion and, when a
// truncation radius delta was supplied, recurrence records:
//   states:          x_0 .. x_n
//   log_inv_norms:   log ||Df(x_j)^{-1}||          for j = 0 .. n-1
//   log_trunc_dists: log dist_delta(x_j, C)        for j = 0 .. n-1
struct OrbitTrace {
    std::vector<State> states;
    std::vector<double> log_inv_norms;
    std::vector<double> log_trunc_dists;
    std::optional<double> delta;
    NoiseSequence noise;
    int resample_count = 0;

    int steps() const { return static_cast<int>(log_inv_norms.size()); }
};

// Generate an orbit of n steps from x0. When a step lands within the
// critical floor the step's noise draw is redrawn (at most 100 times,
// then CriticalOrbitStuck); accepted draws are recorded in trace.noise.
OrbitTrace random_orbit(const SystemPtr& sys, const NoiseKernel& kernel, const State& x0,
                        int n, std::optional<double> delta, uint64_t seed, uint64_t stream);

// Deterministic replay along a fixed noise sequence (no redraws).
OrbitTrace orbit_with_noise(const SystemPtr& sys, const NoiseKernel& kernel, const State& x0,
                            const NoiseSequence& noise, std::optional<double> delta);

// Streaming variant for long runs: visit(j, x_j) is called for j = 0..n-1
// (the state before step j+1); no trace is stored. Redraw handling matches
// random_orbit.
void stream_orbit(const SystemPtr& sys, const NoiseKernel& kernel, const State& x0, int n,
                  uint64_t seed, uint64_t stream,
                  const std::function<void(int, const State&)>& visit);

// Finite-time Birkhoff averages over the recorded steps.
double expansion_average(const OrbitTrace& trace);
double recurrence_average(const OrbitTrace& trace);
double visit_frequency(const OrbitTrace& trace,
                       const std::function<bool(const State&)>& region);

} // namespace nuelab
