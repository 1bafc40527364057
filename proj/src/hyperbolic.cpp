#include "nuelab/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

#include "nuelab/parallel.hpp"

namespace nuelab {

PlissParams::PlissParams(double c1_, double c2_, double H_) : c1(c1_), c2(c2_), H(H_) {
    if (!(H >= c2 && c2 > c1 && c1 > 0.0))
        throw InvalidParams("PlissParams: need H >= c2 > c1 > 0");
}

std::vector<int> pliss_select(std::span<const double> a, const PlissParams& p,
                              bool allow_unguaranteed) {
    const int n = static_cast<int>(a.size());
    if (!allow_unguaranteed) {
        double total = 0.0;
        bool bounded = true;
        for (double v : a) {
            total += v;
            if (v > p.H) bounded = false;
        }
        if (total < p.c2 * n)
            throw HypothesisViolated("pliss_select: sum below c2 N");
        if (!bounded)
            throw HypothesisViolated("pliss_select: an entry exceeds H");
    }
    std::vector<int> out;
    double prefix = 0.0;  // sum of (a_j - c1) up to the current index
    double run_max = 0.0; // max over earlier prefixes, including the empty one
    for (int i = 1; i <= n; ++i) {
        prefix += a[static_cast<size_t>(i - 1)] - p.c1;
        if (prefix >= run_max) out.push_back(i);
        run_max = std::max(run_max, prefix);
    }
    return out;
}

HypParams::HypParams(double alpha, double delta_, double b)
    : alpha_hyp(alpha), delta(delta_), b_exponent(b) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidParams("HypParams: alpha_hyp must lie in (0, 1)");
    if (!(delta > 0.0)) throw InvalidParams("HypParams: delta must be positive");
    if (!(b > 0.0)) throw InvalidParams("HypParams: b_exponent must be positive");
}

namespace {

// Online detector over both window conditions. Feeding the records of step
// j (log ||Df(x_j)^{-1}|| and, in the critical case, log dist_delta(x_j))
// advances the time to n = j + 1 and reports whether n is hyperbolic.
//
// Expansion: n hyperbolic iff S_n = sum (-log_inv - c1) is a running max,
// c1 = -log(alpha). Recurrence: the condition d_{n-k} >= b k log(alpha) for
// all k is min_{j<n} (d_j + b log(alpha) j) >= b log(alpha) n, a running min.
class OnlineDetector {
public:
    OnlineDetector(double alpha, std::optional<double> b)
        : c1_(-std::log(alpha)), b_log_alpha_(b ? *b * std::log(alpha) : 0.0),
          critical_(b.has_value()) {}

    bool feed(double log_inv_norm, double log_trunc_dist) {
        const int j = n_;
        prefix_ += (-log_inv_norm) - c1_;
        if (critical_) rec_min_ = std::min(rec_min_, log_trunc_dist + b_log_alpha_ * j);
        ++n_;
        bool hyp = prefix_ >= run_max_;
        if (critical_) hyp = hyp && rec_min_ >= b_log_alpha_ * n_;
        run_max_ = std::max(run_max_, prefix_);
        return hyp;
    }

private:
    double c1_;
    double b_log_alpha_;
    bool critical_;
    int n_ = 0;
    double prefix_ = 0.0;
    double run_max_ = 0.0;
    double rec_min_ = 1e300;
};

HyperbolicRecord detect(const OrbitTrace& trace, double alpha, std::optional<double> b) {
    HyperbolicRecord rec;
    OnlineDetector det(alpha, b);
    const int n = trace.steps();
    for (int j = 0; j < n; ++j) {
        const double li = trace.log_inv_norms[static_cast<size_t>(j)];
        const double ld = b ? trace.log_trunc_dists[static_cast<size_t>(j)] : 0.0;
        if (det.feed(li, ld)) rec.times.push_back(j + 1);
    }
    if (!rec.times.empty()) rec.first = rec.times.front();
    return rec;
}

} // namespace

HyperbolicRecord hyperbolic_times_diffeo(const OrbitTrace& trace, double alpha_hyp) {
    if (!(alpha_hyp > 0.0 && alpha_hyp < 1.0))
        throw InvalidParams("hyperbolic_times_diffeo: alpha_hyp must lie in (0, 1)");
    return detect(trace, alpha_hyp, std::nullopt);
}

HyperbolicRecord hyperbolic_times_critical(const OrbitTrace& trace, const HypParams& hp) {
    if (!trace.delta.has_value() || *trace.delta != hp.delta)
        throw DeltaMismatch("hyperbolic_times_critical: trace delta differs from hp.delta");
    return detect(trace, hp.alpha_hyp, hp.b_exponent);
}

std::optional<int> first_hyperbolic_time(const OrbitTrace& trace, const HypParams& hp,
                                         bool critical) {
    const HyperbolicRecord rec =
        critical ? hyperbolic_times_critical(trace, hp) : hyperbolic_times_diffeo(trace, hp.alpha_hyp);
    return rec.first;
}

double TailProfile::survival(int k) const {
    int64_t above = censored;
    for (int j = k + 1; j <= n_max; ++j) above += counts[static_cast<size_t>(j)];
    return static_cast<double>(above) / static_cast<double>(sample_size);
}

TailProfile tail_profile(const SystemPtr& sys, const NoiseKernel& kernel, const HypParams& hp,
                         int64_t sample_size, int n_max, uint64_t seed, int threads) {
    if (sample_size < 1) throw InvalidParams("tail_profile: sample_size must be >= 1");
    if (n_max < 1) throw InvalidParams("tail_profile: n_max must be >= 1");
    validate_kernel(*sys, kernel);

    const bool critical = sys->has_critical_set();
    std::vector<int> firsts(static_cast<size_t>(sample_size), 0);

    parallel_for(0, sample_size, threads, [&](int64_t i) {
        CounterRng start_rng(seed, derive_stream(static_cast<uint64_t>(i), 0xA11CE5ull));
        State x = sys->domain().sample_uniform(start_rng);
        // atypical starts exactly on the critical set are resampled
        while (critical && sys->critical_distance(x).value_or(1.0) < sys->critical_floor())
            x = sys->domain().sample_uniform(start_rng);

        CounterRng noise_rng(seed, derive_stream(static_cast<uint64_t>(i), 0x0B17ull));
        OnlineDetector det(hp.alpha_hyp,
                           critical ? std::optional<double>(hp.b_exponent) : std::nullopt);
        int h = 0;
        for (int j = 0; j < n_max; ++j) {
            const double li = std::log(sys->inv_tangent_norm(x));
            const double ld =
                critical ? std::log(sys->truncated_distance(x, hp.delta)) : 0.0;
            if (det.feed(li, ld)) {
                h = j + 1;
                break;
            }
            NoiseParam t = draw_noise(kernel, noise_rng);
            State next = perturbed_step(*sys, kernel, t, x);
            int redraws = 0;
            while (critical &&
                   sys->critical_distance(next).value_or(1.0) < sys->critical_floor()) {
                if (++redraws > 100)
                    throw CriticalOrbitStuck("tail_profile: redraw budget exhausted");
                t = draw_noise(kernel, noise_rng);
                next = perturbed_step(*sys, kernel, t, x);
            }
            x = next;
        }
        firsts[static_cast<size_t>(i)] = h; // 0 marks censored
    });

    TailProfile prof;
    prof.epsilon = kernel.epsilon;
    prof.sample_size = sample_size;
    prof.n_max = n_max;
    prof.counts.assign(static_cast<size_t>(n_max) + 1, 0);
    for (int h : firsts) {
        if (h == 0)
            ++prof.censored;
        else
            ++prof.counts[static_cast<size_t>(h)];
    }
    return prof;
}

double tail_statistic(const TailProfile& profile, int N) {
    if (N > profile.n_max)
        throw InsufficientHorizon("tail_statistic: N exceeds the profile horizon");
    double s = 0.0;
    for (int k = std::max(N, 1); k <= profile.n_max; ++k)
        s += static_cast<double>(k) * profile.p_at(k);
    s += static_cast<double>(profile.n_max) *
         (static_cast<double>(profile.censored) / static_cast<double>(profile.sample_size));
    return s;
}

double uniform_tail_statistic(const std::vector<TailProfile>& profiles, int N) {
    if (profiles.empty()) throw InvalidParams("uniform_tail_statistic: no profiles");
    double worst = 0.0;
    for (const auto& p : profiles) worst = std::max(worst, tail_statistic(p, N));
    return worst;
}

double fit_geometric_tail(const TailProfile& profile) {
    // regress log survival on k over the strictly positive part
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = 0; k <= profile.n_max; ++k) {
        const double s = profile.survival(k);
        if (s <= 0.0) break;
        const double y = std::log(s);
        sx += k;
        sy += y;
        sxx += static_cast<double>(k) * k;
        sxy += k * y;
        ++m;
    }
    if (m < 2) return std::numeric_limits<double>::quiet_NaN();
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return std::exp(slope);
}

} // namespace nuelab
