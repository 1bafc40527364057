#include "nuelab/noise.hpp"

#include <cmath>
#include <numbers>

namespace nuelab {

NoiseKernel NoiseKernel::additive(double eps, int dims) {
    if (eps < 0.0) throw InvalidParams("noise: epsilon must be nonnegative");
    if (dims != 1 && dims != 2) throw InvalidParams("noise: dims must be 1 or 2");
    return NoiseKernel{Mode::Additive, eps, dims};
}

NoiseKernel NoiseKernel::rotational(double eps) {
    if (eps < 0.0) throw InvalidParams("noise: epsilon must be nonnegative");
    return NoiseKernel{Mode::Rotational, eps, 1};
}

double noise_norm(const NoiseParam& t, int dims) {
    return dims == 2 ? std::hypot(t[0], t[1]) : std::abs(t[0]);
}

NoiseParam draw_noise(const NoiseKernel& kernel, CounterRng& rng) {
    if (kernel.dims == 1) return {kernel.epsilon * rng.next_sym(), 0.0};
    // uniform on the unit disk via the polar transform, then scaled
    const double r = std::sqrt(rng.next_unit());
    const double phi = 2.0 * std::numbers::pi * rng.next_unit();
    return {kernel.epsilon * r * std::cos(phi), kernel.epsilon * r * std::sin(phi)};
}

NoiseSequence sample_noise(const NoiseKernel& kernel, int n, uint64_t seed, uint64_t stream) {
    if (n < 1) throw InvalidParams("sample_noise: n must be at least 1");
    NoiseSequence seq;
    seq.seed = seed;
    seq.stream = stream;
    seq.entries.reserve(static_cast<size_t>(n));
    CounterRng rng(seed, stream);
    for (int i = 0; i < n; ++i) seq.entries.push_back(draw_noise(kernel, rng));
    return seq;
}

void validate_kernel(const MapSystem& sys, const NoiseKernel& kernel) {
    const Domain& dom = sys.domain();
    if (kernel.mode == NoiseKernel::Mode::Rotational) {
        if (!dom.has_circle_factor())
            throw InvalidParams("rotational noise requires a circle factor");
        return;
    }
    if (kernel.dims != dom.dim())
        throw InvalidParams("additive noise dimension does not match the domain");
    if (dom.has_interval_factor() && kernel.epsilon > 0.0 &&
        kernel.epsilon >= sys.domain_margin())
        throw NoiseExceedsMargin("epsilon >= domain margin on a bounded factor");
}

State perturbed_step(const MapSystem& sys, const NoiseKernel& kernel, const NoiseParam& t,
                     const State& x) {
    State y = sys.eval(x);
    const Domain& dom = sys.domain();
    if (kernel.epsilon == 0.0) return y;

    if (kernel.mode == NoiseKernel::Mode::Rotational) {
        y.coord[0] = dom.wrap_circle(y.coord[0] + t[0]);
        return y;
    }

    switch (dom.kind()) {
    case Domain::Kind::Circle:
        y.coord[0] = dom.wrap_circle(y.coord[0] + t[0]);
        return y;
    case Domain::Kind::Torus2:
        return dom.wrap(state2(y.coord[0] + t[0], y.coord[1] + t[1]));
    case Domain::Kind::Cylinder:
        if (kernel.epsilon >= sys.domain_margin())
            throw NoiseExceedsMargin("epsilon >= invariance margin of the cylinder");
        y.coord[0] = dom.wrap_circle(y.coord[0] + t[0]);
        y.coord[1] += t[1];
        return y;
    case Domain::Kind::Interval:
        if (kernel.epsilon >= sys.domain_margin())
            throw NoiseExceedsMargin("epsilon >= trapping margin of the interval");
        y.coord[0] += t[0];
        return y;
    }
    return y;
}

} // namespace nuelab
