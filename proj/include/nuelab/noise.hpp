#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nuelab/systems.hpp"

namespace nuelab {

// Perturbation family {Phi, (theta_eps)}: additive mode adds a vector drawn
// uniformly from the epsilon-ball after the map; rotational mode rotates the
// circle factor by a uniform angle in [-eps, eps]. Draws are produced as
// eps * (unit-ball draw), so the same (seed, stream) gives nested supports
// across noise levels.
struct NoiseKernel {
    enum class Mode { Additive, Rotational };

    Mode mode = Mode::Additive;
    double epsilon = 0.0;
    int dims = 1;

    static NoiseKernel additive(double eps, int dims);
    static NoiseKernel rotational(double eps);

    NoiseKernel with_epsilon(double eps) const {
        NoiseKernel k = *this;
        k.epsilon = eps;
        return k;
    }
};

using NoiseParam = std::array<double, 2>;

struct NoiseSequence {
    std::vector<NoiseParam> entries;
    uint64_t seed = 0;
    uint64_t stream = 0;
};

double noise_norm(const NoiseParam& t, int dims);

// n independent draws from theta_eps; deterministic in (seed, stream).
NoiseSequence sample_noise(const NoiseKernel& kernel, int n, uint64_t seed, uint64_t stream);

// Draw a single parameter from an already-positioned generator.
NoiseParam draw_noise(const NoiseKernel& kernel, CounterRng& rng);

// Checks kernel/system compatibility: dimensions, rotational needs a circle
// factor, additive on a bounded factor needs epsilon below the domain margin.
void validate_kernel(const MapSystem& sys, const NoiseKernel& kernel);

// f_t(x): eval followed by the noise action. Throws NoiseExceedsMargin when
// additive noise on a bounded factor could leave the domain.
State perturbed_step(const MapSystem& sys, const NoiseKernel& kernel, const NoiseParam& t,
                     const State& x);

} // namespace nuelab
