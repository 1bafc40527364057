#include "nuelab/orbit.hpp"

#include <cmath>

namespace nuelab {

namespace {

constexpr int kMaxRedraws = 100;

bool within_critical_floor(const MapSystem& sys, const State& x) {
    if (!sys.has_critical_set()) return false;
    const auto d = sys.critical_distance(x);
    return d.has_value() && *d < sys.critical_floor();
}

} // namespace

OrbitTrace random_orbit(const SystemPtr& sys, const NoiseKernel& kernel, const State& x0,
                        int n, std::optional<double> delta, uint64_t seed, uint64_t stream) {
    if (n < 0) throw InvalidParams("random_orbit: n must be nonnegative");
    validate_kernel(*sys, kernel);
    sys->check_in_domain(x0);
    if (within_critical_floor(*sys, x0))
        throw CriticalOrbitStuck("initial state on the critical set");

    OrbitTrace tr;
    tr.delta = delta;
    tr.noise.seed = seed;
    tr.noise.stream = stream;
    tr.states.reserve(static_cast<size_t>(n) + 1);
    tr.log_inv_norms.reserve(static_cast<size_t>(n));
    if (delta) tr.log_trunc_dists.reserve(static_cast<size_t>(n));

    CounterRng rng(seed, stream);
    State x = x0;
    tr.states.push_back(x);
    for (int j = 0; j < n; ++j) {
        tr.log_inv_norms.push_back(std::log(sys->inv_tangent_norm(x)));
        if (delta) tr.log_trunc_dists.push_back(std::log(sys->truncated_distance(x, *delta)));

        NoiseParam t = draw_noise(kernel, rng);
        State next = perturbed_step(*sys, kernel, t, x);
        int redraws = 0;
        while (within_critical_floor(*sys, next)) {
            if (++redraws > kMaxRedraws)
                throw CriticalOrbitStuck("redraw budget exhausted at step " + std::to_string(j));
            ++tr.resample_count;
            t = draw_noise(kernel, rng);
            next = perturbed_step(*sys, kernel, t, x);
        }
        tr.noise.entries.push_back(t);
        x = next;
        tr.states.push_back(x);
    }
    return tr;
}

OrbitTrace orbit_with_noise(const SystemPtr& sys, const NoiseKernel& kernel, const State& x0,
                            const NoiseSequence& noise, std::optional<double> delta) {
    validate_kernel(*sys, kernel);
    sys->check_in_domain(x0);

    OrbitTrace tr;
    tr.delta = delta;
    tr.noise = noise;
    tr.states.push_back(x0);
    State x = x0;
    for (const NoiseParam& t : noise.entries) {
        tr.log_inv_norms.push_back(std::log(sys->inv_tangent_norm(x)));
        if (delta) tr.log_trunc_dists.push_back(std::log(sys->truncated_distance(x, *delta)));
        x = perturbed_step(*sys, kernel, t, x);
        tr.states.push_back(x);
    }
    return tr;
}

void stream_orbit(const SystemPtr& sys, const NoiseKernel& kernel, const State& x0, int n,
                  uint64_t seed, uint64_t stream,
                  const std::function<void(int, const State&)>& visit) {
    validate_kernel(*sys, kernel);
    sys->check_in_domain(x0);
    if (within_critical_floor(*sys, x0))
        throw CriticalOrbitStuck("initial state on the critical set");

    CounterRng rng(seed, stream);
    State x = x0;
    for (int j = 0; j < n; ++j) {
        visit(j, x);
        NoiseParam t = draw_noise(kernel, rng);
        State next = perturbed_step(*sys, kernel, t, x);
        int redraws = 0;
        while (within_critical_floor(*sys, next)) {
            if (++redraws > kMaxRedraws)
                throw CriticalOrbitStuck("redraw budget exhausted at step " + std::to_string(j));
            t = draw_noise(kernel, rng);
            next = perturbed_step(*sys, kernel, t, x);
        }
        x = next;
    }
}

double expansion_average(const OrbitTrace& trace) {
    if (trace.log_inv_norms.empty())
        throw InvalidParams("expansion_average: empty trace");
    double s = 0.0;
    for (double v : trace.log_inv_norms) s += v;
    return s / static_cast<double>(trace.log_inv_norms.size());
}

double recurrence_average(const OrbitTrace& trace) {
    if (!trace.delta.has_value())
        throw DeltaMismatch("recurrence_average: trace has no recurrence records");
    if (trace.log_trunc_dists.empty())
        throw InvalidParams("recurrence_average: empty trace");
    double s = 0.0;
    for (double v : trace.log_trunc_dists) s -= v;
    return s / static_cast<double>(trace.log_trunc_dists.size());
}

double visit_frequency(const OrbitTrace& trace,
                       const std::function<bool(const State&)>& region) {
    const int n = trace.steps();
    if (n == 0) throw InvalidParams("visit_frequency: empty trace");
    int hits = 0;
    for (int j = 0; j < n; ++j)
        if (region(trace.states[static_cast<size_t>(j)])) ++hits;
    return static_cast<double>(hits) / n;
}

} // namespace nuelab
