#include "nuelab/viana.hpp"

#include <algorithm>
#include <cmath>

#include "nuelab/parallel.hpp"
#include "nuelab/systems.hpp"

namespace nuelab {

namespace {

double iterate_q(double a, int k) {
    double x = 0.0;
    for (int i = 0; i < k; ++i) x = a - x * x;
    return x;
}

// the repelling fixed point inside the invariant core [a - a^2, a]
double reachable_fixed_point(double a) { return (-1.0 + std::sqrt(1.0 + 4.0 * a)) / 2.0; }

} // namespace

MisiurewiczResult find_misiurewicz_a0(int k_max, double tol) {
    if (k_max < 2) throw InvalidParams("find_misiurewicz_a0: k_max must be >= 2");
    if (tol <= 0.0) throw InvalidParams("find_misiurewicz_a0: tol must be positive");

    const double lo_bound = 1.0 + 1e-6, hi_bound = 2.0 - 1e-6;
    const int grid = 256;
    for (int k = 2; k <= k_max; ++k) {
        auto g = [&](double a) { return iterate_q(a, k) - reachable_fixed_point(a); };
        double prev_a = lo_bound, prev_g = g(lo_bound);
        for (int i = 1; i <= grid; ++i) {
            const double a = lo_bound + (hi_bound - lo_bound) * i / grid;
            const double ga = g(a);
            if ((prev_g <= 0.0 && ga >= 0.0) || (prev_g >= 0.0 && ga <= 0.0)) {
                double lo = prev_a, hi = a, glo = prev_g;
                while (hi - lo > tol) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = g(mid);
                    if ((glo <= 0.0) == (gm <= 0.0)) {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                // secant polish pushes the function residual to rounding level
                double a0 = 0.5 * (lo + hi), a1 = a0 + 10.0 * tol;
                double f0 = g(a0), f1 = g(a1);
                for (int it = 0; it < 64 && f0 != 0.0; ++it) {
                    if (f1 == f0) break;
                    const double a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
                    if (!(a2 > lo_bound && a2 < hi_bound)) break;
                    a0 = a1;
                    f0 = f1;
                    a1 = a2;
                    f1 = g(a2);
                    if (std::abs(f1) >= std::abs(f0)) break;
                }
                const double root = std::abs(f1) < std::abs(f0) ? a1 : a0;
                return {root, k, std::abs(g(root))};
            }
            prev_a = a;
            prev_g = ga;
        }
    }
    throw NoRootFound("find_misiurewicz_a0: no sign change for k <= " + std::to_string(k_max));
}

ReturnDepthTrace return_depths(const OrbitTrace& trace, double alpha_skew, double eta_exponent) {
    if (alpha_skew <= 0.0 || alpha_skew >= 1.0)
        throw InvalidParams("return_depths: alpha_skew must lie in (0, 1)");
    const double sqrt_alpha = std::sqrt(alpha_skew);
    const double g_threshold = (0.5 - 2.0 * eta_exponent) * std::log(1.0 / alpha_skew);

    ReturnDepthTrace out;
    const int n = trace.steps();
    out.depths.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const State& z = trace.states[static_cast<size_t>(j)];
        if (z.dim != 2) throw InvalidParams("return_depths: trace is not on a cylinder");
        const double ax = std::abs(z.y());
        int r = 0;
        if (ax < sqrt_alpha)
            r = std::max(0, static_cast<int>(std::ceil(-std::log(ax))));
        out.depths.push_back(r);
        if (r >= g_threshold) {
            out.g_set.push_back(j);
            out.g_sum += r;
        }
    }
    return out;
}

double central_expansion_average(const OrbitTrace& trace) {
    if (trace.states.empty() || trace.states[0].dim != 2)
        throw InvalidParams("central_expansion_average: trace is not on a cylinder");
    return expansion_average(trace);
}

namespace {

// shared sampling core for the two B-set fraction estimates
template <typename PerSample>
double sampled_fraction(const SystemPtr& sys, const NoiseKernel& kernel,
                        int64_t sample_size, uint64_t seed, int threads, PerSample&& per) {
    if (sample_size < 1) throw InvalidParams("fraction estimate: sample_size must be >= 1");
    validate_kernel(*sys, kernel);
    std::vector<char> flags(static_cast<size_t>(sample_size), 0);
    parallel_for(0, sample_size, threads, [&](int64_t i) {
        CounterRng start_rng(seed, derive_stream(static_cast<uint64_t>(i), 0x5EEDull));
        State x = sys->domain().sample_uniform(start_rng);
        while (sys->critical_distance(x).value_or(1.0) < sys->critical_floor())
            x = sys->domain().sample_uniform(start_rng);
        flags[static_cast<size_t>(i)] =
            per(x, derive_stream(static_cast<uint64_t>(i), 0x0B17ull)) ? 1 : 0;
    });
    int64_t hits = 0;
    for (char f : flags) hits += f;
    return static_cast<double>(hits) / static_cast<double>(sample_size);
}

} // namespace

double deep_return_fraction(const SystemPtr& sys, const NoiseKernel& kernel, int n,
                            int64_t sample_size, uint64_t seed, int threads) {
    if (n < 4) throw InvalidParams("deep_return_fraction: n must be >= 4");
    const double radius = std::exp(-std::floor(std::sqrt(static_cast<double>(n))));
    return sampled_fraction(
        sys, kernel, sample_size, seed, threads, [&](const State& x0, uint64_t stream) {
            bool entered = false;
            stream_orbit(sys, kernel, x0, n, seed, stream, [&](int j, const State& z) {
                if (j >= 1 && std::abs(z.y()) < radius) entered = true;
            });
            return entered;
        });
}

double expansion_deficit_fraction(const SystemPtr& sys, const NoiseKernel& kernel, int n,
                                  double gamma, int64_t sample_size, uint64_t seed,
                                  int threads) {
    if (gamma <= 0.0) throw InvalidParams("expansion_deficit_fraction: gamma must be positive");
    if (n < 4) throw InvalidParams("expansion_deficit_fraction: n must be >= 4");
    const VianaInfo& info = viana_info(*sys);
    const double sqrt_alpha = std::sqrt(info.alpha_skew);
    const double g_threshold = (0.5 - 2.0 * info.eta_exponent) * std::log(1.0 / info.alpha_skew);
    const double deep_radius = std::exp(-std::floor(std::sqrt(static_cast<double>(n))));

    return sampled_fraction(
        sys, kernel, sample_size, seed, threads, [&](const State& x0, uint64_t stream) {
            bool deep = false;
            int64_t g_sum = 0;
            stream_orbit(sys, kernel, x0, n, seed, stream, [&](int j, const State& z) {
                const double ax = std::abs(z.y());
                if (j >= 1 && ax < deep_radius) deep = true;
                if (ax < sqrt_alpha) {
                    const int r = std::max(0, static_cast<int>(std::ceil(-std::log(ax))));
                    if (r >= g_threshold) g_sum += r;
                }
            });
            return !deep && static_cast<double>(g_sum) >= gamma * n;
        });
}

// --- foliation ------------------------------------------------------------

FoliationField FoliationField::zeros(int ns, int nx) {
    FoliationField f;
    f.ns = ns;
    f.nx = nx;
    f.values.assign(static_cast<size_t>(ns) * nx, 0.0);
    return f;
}

double FoliationField::sup_norm() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

double sup_diff(const FoliationField& a, const FoliationField& b) {
    if (a.ns != b.ns || a.nx != b.nx)
        throw DomainMismatch("sup_diff: field grids differ");
    double s = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
        s = std::max(s, std::abs(a.values[i] - b.values[i]));
    return s;
}

namespace {

// bilinear read of the field at a cylinder point (s wraps, x clamps)
double interp_field(const FoliationField& f, const Domain& dom, const State& z) {
    const double L = dom.circle_length();
    const double lo = dom.interval_lo(), hi = dom.interval_hi();
    double fs = (z.x() - dom.circle_origin()) / L * f.ns - 0.5;
    double fx = (z.y() - lo) / (hi - lo) * f.nx - 0.5;
    fx = std::clamp(fx, 0.0, static_cast<double>(f.nx - 1));
    const int is0 = static_cast<int>(std::floor(fs));
    const int ix0 = static_cast<int>(std::floor(fx));
    const double ws = fs - is0;
    const double wx = fx - ix0;
    auto sidx = [&](int i) {
        int m = i % f.ns;
        if (m < 0) m += f.ns;
        return m;
    };
    const int ix1 = std::min(ix0 + 1, f.nx - 1);
    const double v00 = f.at(sidx(is0), ix0), v01 = f.at(sidx(is0), ix1);
    const double v10 = f.at(sidx(is0 + 1), ix0), v11 = f.at(sidx(is0 + 1), ix1);
    return (1.0 - ws) * ((1.0 - wx) * v00 + wx * v01) + ws * ((1.0 - wx) * v10 + wx * v11);
}

State grid_center(const Domain& dom, int ns, int nx, int is, int ix) {
    const double s = dom.circle_origin() + dom.circle_length() * (is + 0.5) / ns;
    const double x =
        dom.interval_lo() + (dom.interval_hi() - dom.interval_lo()) * (ix + 0.5) / nx;
    return state2(s, x);
}

} // namespace

FoliationField foliation_apply(const FoliationField& field, const SystemPtr& sys,
                               const std::vector<NoiseParam>& noise_path,
                               const NoiseKernel* kernel, int threads) {
    const Domain& dom = sys->domain();
    if (dom.kind() != Domain::Kind::Cylinder)
        throw InvalidParams("foliation_apply: system is not a cylinder skew product");
    if (field.ns < 2 || field.nx < 2)
        throw InvalidParams("foliation_apply: field grid too coarse");

    const NoiseParam t = noise_path.empty() ? NoiseParam{0.0, 0.0} : noise_path.front();
    const NoiseKernel unperturbed = NoiseKernel::additive(0.0, 2);
    const NoiseKernel& k = (kernel && !noise_path.empty()) ? *kernel : unperturbed;

    FoliationField out = FoliationField::zeros(field.ns, field.nx);
    out.horizon = field.horizon;
    parallel_for(0, static_cast<int64_t>(field.ns) * field.nx, threads, [&](int64_t cell) {
        const int is = static_cast<int>(cell) / field.nx;
        const int ix = static_cast<int>(cell) % field.nx;
        const State z = grid_center(dom, field.ns, field.nx, is, ix);
        const State image = perturbed_step(*sys, k, t, z);
        const double xi_f = interp_field(field, dom, image);
        const auto tg = sys->tangent(z); // [d_s g, d_x g; d_s q, d_x q]
        const double num = tg[3] * xi_f - tg[1];
        const double den = -tg[2] * xi_f + tg[0];
        double v = num / den;
        if (std::abs(v) > 1.0) {
            if (std::abs(v) > 1.0 + 1e-9)
                throw ContractionViolated("foliation_apply: |A xi| = " + std::to_string(v));
            v = std::clamp(v, -1.0, 1.0);
        }
        out.values[static_cast<size_t>(cell)] = v;
    });
    return out;
}

FoliationResult foliation_fixed_point(const SystemPtr& sys, int ns, int nx, double tol,
                                      int max_iters, const std::optional<FoliationField>& start,
                                      const NoiseKernel* kernel, int mc, int horizon,
                                      uint64_t seed, int threads) {
    if (tol <= 0.0) throw InvalidParams("foliation_fixed_point: tol must be positive");
    FoliationResult res;
    FoliationField xi = start ? *start : FoliationField::zeros(ns, nx);
    if (start && (xi.ns != ns || xi.nx != nx))
        throw DomainMismatch("foliation_fixed_point: start grid differs");
    xi.horizon = (kernel && mc > 0) ? horizon : 0;

    const bool random_case = kernel && mc > 0;
    CounterRng rng(seed, 0xF01Dull);

    auto apply = [&](const FoliationField& f) {
        if (!random_case) return foliation_apply(f, sys, {}, nullptr, threads);
        FoliationField acc = FoliationField::zeros(f.ns, f.nx);
        acc.horizon = f.horizon;
        for (int m = 0; m < mc; ++m) {
            const NoiseParam t = draw_noise(*kernel, rng);
            const FoliationField one = foliation_apply(f, sys, {t}, kernel, threads);
            for (size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += one.values[i];
        }
        for (double& v : acc.values) v /= mc;
        return acc;
    };

    for (int it = 1; it <= max_iters; ++it) {
        FoliationField next = apply(xi);
        const double change = sup_diff(next, xi);
        res.step_changes.push_back(change);
        xi = std::move(next);
        res.iterations = it;
        if (change < tol) {
            res.final_change = change;
            FoliationField probe = apply(xi);
            res.residual = sup_diff(probe, xi);
            res.field = std::move(xi);
            return res;
        }
    }
    throw MaxItersExceeded("foliation_fixed_point: no convergence in " +
                           std::to_string(max_iters) + " iterations");
}

} // namespace nuelab
