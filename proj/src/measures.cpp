#include "nuelab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nuelab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kMassTol = 1e-12;
} // namespace

// --- HistogramMeasure ---------------------------------------------------

HistogramMeasure::HistogramMeasure(const Domain& domain, std::array<int, 2> bins)
    : domain_(domain), bins_(bins) {
    if (domain.dim() == 1) bins_[1] = 1;
    if (bins_[0] < 1 || bins_[1] < 1)
        throw InvalidParams("HistogramMeasure: bins must be positive");
    mass_.assign(static_cast<size_t>(cell_count()), 0.0);
}

HistogramMeasure HistogramMeasure::uniform(const Domain& domain, std::array<int, 2> bins) {
    HistogramMeasure h(domain, bins);
    const double w = 1.0 / h.cell_count();
    std::fill(h.mass_.begin(), h.mass_.end(), w);
    return h;
}

double HistogramMeasure::cell_width(int coordinate) const {
    switch (domain_.kind()) {
    case Domain::Kind::Circle:
        return domain_.circle_length() / bins_[0];
    case Domain::Kind::Interval:
        return (domain_.interval_hi() - domain_.interval_lo()) / bins_[0];
    case Domain::Kind::Cylinder:
        return coordinate == 0 ? domain_.circle_length() / bins_[0]
                               : (domain_.interval_hi() - domain_.interval_lo()) / bins_[1];
    case Domain::Kind::Torus2:
        return domain_.circle_length() / bins_[static_cast<size_t>(coordinate)];
    }
    return 0.0;
}

namespace {
int axis_bin(double v, double lo, double width, int n) {
    int b = static_cast<int>(std::floor((v - lo) / width));
    return std::clamp(b, 0, n - 1);
}
} // namespace

int HistogramMeasure::cell_of(const State& x) const {
    const State w = domain_.wrap(x);
    switch (domain_.kind()) {
    case Domain::Kind::Circle:
        return axis_bin(w.x(), domain_.circle_origin(), cell_width(0), bins_[0]);
    case Domain::Kind::Interval:
        return axis_bin(w.x(), domain_.interval_lo(), cell_width(0), bins_[0]);
    case Domain::Kind::Cylinder:
        return axis_bin(w.x(), domain_.circle_origin(), cell_width(0), bins_[0]) * bins_[1] +
               axis_bin(w.y(), domain_.interval_lo(), cell_width(1), bins_[1]);
    case Domain::Kind::Torus2:
        return axis_bin(w.x(), 0.0, cell_width(0), bins_[0]) * bins_[1] +
               axis_bin(w.y(), 0.0, cell_width(1), bins_[1]);
    }
    return 0;
}

State HistogramMeasure::cell_center(int idx) const {
    const int i0 = idx / bins_[1];
    const int i1 = idx % bins_[1];
    switch (domain_.kind()) {
    case Domain::Kind::Circle:
        return state1(domain_.circle_origin() + (i0 + 0.5) * cell_width(0));
    case Domain::Kind::Interval:
        return state1(domain_.interval_lo() + (i0 + 0.5) * cell_width(0));
    case Domain::Kind::Cylinder:
        return state2(domain_.circle_origin() + (i0 + 0.5) * cell_width(0),
                      domain_.interval_lo() + (i1 + 0.5) * cell_width(1));
    case Domain::Kind::Torus2:
        return state2((i0 + 0.5) * cell_width(0), (i1 + 0.5) * cell_width(1));
    }
    return state1(0.0);
}

std::pair<double, double> HistogramMeasure::cell_edges(int idx, int coordinate) const {
    const int i0 = idx / bins_[1];
    const int i1 = idx % bins_[1];
    const int i = coordinate == 0 ? i0 : i1;
    double origin = 0.0;
    switch (domain_.kind()) {
    case Domain::Kind::Circle:
        origin = domain_.circle_origin();
        break;
    case Domain::Kind::Interval:
        origin = domain_.interval_lo();
        break;
    case Domain::Kind::Cylinder:
        origin = coordinate == 0 ? domain_.circle_origin() : domain_.interval_lo();
        break;
    case Domain::Kind::Torus2:
        origin = 0.0;
        break;
    }
    const double w = cell_width(coordinate);
    return {origin + i * w, origin + (i + 1) * w};
}

void HistogramMeasure::deposit(const State& x, double weight) {
    mass_[static_cast<size_t>(cell_of(x))] += weight;
}

double HistogramMeasure::total_mass() const {
    double s = 0.0;
    for (double m : mass_) s += m;
    return s;
}

void HistogramMeasure::normalize() {
    const double s = total_mass();
    if (s <= 0.0) throw InvalidParams("HistogramMeasure: cannot normalize zero mass");
    for (double& m : mass_) m /= s;
}

double HistogramMeasure::l1_distance(const HistogramMeasure& o) const {
    if (!same_grid(o)) throw DomainMismatch("l1_distance: grids differ");
    double s = 0.0;
    for (size_t i = 0; i < mass_.size(); ++i) s += std::abs(mass_[i] - o.mass_[i]);
    return s;
}

// --- TestFunctionFamily --------------------------------------------------

TestFunctionFamily::TestFunctionFamily(const Domain& domain, std::array<int, 2> bins, int K)
    : domain_(domain), bins_(bins), K_(K) {
    if (K < 1) throw InvalidParams("TestFunctionFamily: K must be >= 1");
    if (domain.dim() == 1) bins_[1] = 1;

    // per-factor basis sizes: circle factor has 1 + 2K members, interval K + 1
    auto factor_size = [&](int coordinate) {
        const bool circle = (domain.kind() == Domain::Kind::Circle) ||
                            (domain.kind() == Domain::Kind::Torus2) ||
                            (domain.kind() == Domain::Kind::Cylinder && coordinate == 0);
        return circle ? 1 + 2 * K_ : K_ + 1;
    };

    if (domain.dim() == 1) {
        const int m = factor_size(0);
        members_.reserve(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) members_.push_back({i, 0});
    } else {
        const int m0 = factor_size(0);
        const int m1 = factor_size(1);
        // diagonal order: total index first, then the first factor's index
        for (int s = 0; s <= m0 + m1 - 2; ++s)
            for (int i = 0; i <= s; ++i) {
                const int j = s - i;
                if (i < m0 && j < m1) members_.push_back({i, j});
            }
    }

    // cache factor values at cell centers
    HistogramMeasure probe(domain_, bins_);
    for (int coordinate = 0; coordinate < domain.dim(); ++coordinate) {
        const int nb = bins_[static_cast<size_t>(coordinate)];
        const int fs = factor_size(coordinate);
        values_[static_cast<size_t>(coordinate)].assign(static_cast<size_t>(fs),
                                                        std::vector<double>());
        for (int b = 0; b < fs; ++b) {
            auto& row = values_[static_cast<size_t>(coordinate)][static_cast<size_t>(b)];
            row.resize(static_cast<size_t>(nb));
            for (int c = 0; c < nb; ++c) {
                // a center along this axis (other coordinate arbitrary)
                const int idx = coordinate == 0 ? c * bins_[1] : c;
                const State center = probe.cell_center(idx);
                row[static_cast<size_t>(c)] =
                    eval_factor(coordinate, b, center.coord[static_cast<size_t>(coordinate)]);
            }
        }
    }

    // separation check: a handful of cell deltas must be distinguishable
    // from the uniform measure
    const HistogramMeasure unif = HistogramMeasure::uniform(domain_, bins_);
    const auto iu = integrals(unif);
    const int cells = unif.cell_count();
    for (int probe_cell : {0, cells / 3, cells / 2, (2 * cells) / 3, cells - 1}) {
        HistogramMeasure delta(domain_, bins_);
        delta.add_mass(probe_cell, 1.0);
        if (distance_from_integrals(integrals(delta), iu) <= 0.0)
            throw InvalidParams("TestFunctionFamily: family fails to separate a cell delta "
                                "from uniform at this resolution");
    }
}

double TestFunctionFamily::weight(int n) const { return std::pow(0.5, n + 1); }

double TestFunctionFamily::eval_factor(int coordinate, int basis_index, double v) const {
    const bool circle = (domain_.kind() == Domain::Kind::Circle) ||
                        (domain_.kind() == Domain::Kind::Torus2) ||
                        (domain_.kind() == Domain::Kind::Cylinder && coordinate == 0);
    if (circle) {
        if (basis_index == 0) return 1.0;
        const int m = (basis_index + 1) / 2;
        const double L = domain_.circle_length();
        const double origin = domain_.kind() == Domain::Kind::Circle ? domain_.circle_origin() : 0.0;
        const double phase = 2.0 * kPi * m * (v - origin) / L;
        return (basis_index % 2 == 1) ? std::cos(phase) : std::sin(phase);
    }
    // Chebyshev T_k on [lo, hi]
    const double lo = domain_.interval_lo(), hi = domain_.interval_hi();
    double tau = (2.0 * v - lo - hi) / (hi - lo);
    tau = std::clamp(tau, -1.0, 1.0);
    if (basis_index == 0) return 1.0;
    if (basis_index == 1) return tau;
    double tk_2 = 1.0, tk_1 = tau, tk = tau;
    for (int k = 2; k <= basis_index; ++k) {
        tk = 2.0 * tau * tk_1 - tk_2;
        tk_2 = tk_1;
        tk_1 = tk;
    }
    return tk;
}

double TestFunctionFamily::evaluate(int n, const State& x) const {
    const State w = domain_.wrap(x);
    const Member& m = members_[static_cast<size_t>(n)];
    double v = eval_factor(0, m.f0, w.coord[0]);
    if (domain_.dim() == 2) v *= eval_factor(1, m.f1, w.coord[1]);
    return v;
}

double TestFunctionFamily::integrate(int n, const HistogramMeasure& mu) const {
    if (!mu.domain().same_as(domain_) || mu.bins() != bins_)
        throw DomainMismatch("TestFunctionFamily: histogram grid differs from the family grid");
    const Member& m = members_[static_cast<size_t>(n)];
    const auto& v0 = values_[0][static_cast<size_t>(m.f0)];
    const auto& masses = mu.masses();
    double acc = 0.0;
    if (domain_.dim() == 1) {
        for (int c = 0; c < bins_[0]; ++c)
            acc += masses[static_cast<size_t>(c)] * v0[static_cast<size_t>(c)];
    } else {
        const auto& v1 = values_[1][static_cast<size_t>(m.f1)];
        for (int i = 0; i < bins_[0]; ++i) {
            const double a = v0[static_cast<size_t>(i)];
            const size_t row = static_cast<size_t>(i) * bins_[1];
            for (int j = 0; j < bins_[1]; ++j)
                acc += masses[row + static_cast<size_t>(j)] * a * v1[static_cast<size_t>(j)];
        }
    }
    return acc;
}

std::vector<double> TestFunctionFamily::integrals(const HistogramMeasure& mu) const {
    std::vector<double> out(static_cast<size_t>(size()));
    for (int n = 0; n < size(); ++n) out[static_cast<size_t>(n)] = integrate(n, mu);
    return out;
}

double TestFunctionFamily::distance_from_integrals(const std::vector<double>& iu,
                                                   const std::vector<double>& iv) const {
    double s = 0.0;
    for (int n = 0; n < size(); ++n)
        s += weight(n) * std::abs(iu[static_cast<size_t>(n)] - iv[static_cast<size_t>(n)]);
    return s;
}

double TestFunctionFamily::distance(const HistogramMeasure& mu,
                                    const HistogramMeasure& nu) const {
    if (!mu.same_grid(nu)) throw DomainMismatch("weak_star_distance: grids differ");
    return distance_from_integrals(integrals(mu), integrals(nu));
}

double weak_star_distance(const HistogramMeasure& mu, const HistogramMeasure& nu,
                          const TestFunctionFamily& family) {
    return family.distance(mu, nu);
}

// --- wasserstein ---------------------------------------------------------

double wasserstein_1d(const HistogramMeasure& mu, const HistogramMeasure& nu) {
    if (!mu.same_grid(nu)) throw DomainMismatch("wasserstein_1d: grids differ");
    if (mu.domain().dim() != 1)
        throw NotOneDimensional("wasserstein_1d: needs a 1-D domain");
    const int n = mu.cell_count();
    const double w = mu.cell_width(0);
    std::vector<double> diff(static_cast<size_t>(n));
    double run = 0.0;
    for (int i = 0; i < n; ++i) {
        run += mu.masses()[static_cast<size_t>(i)] - nu.masses()[static_cast<size_t>(i)];
        diff[static_cast<size_t>(i)] = run;
    }
    if (mu.domain().kind() == Domain::Kind::Interval) {
        double s = 0.0;
        for (double d : diff) s += std::abs(d);
        return s * w;
    }
    // circle: optimal constant shift of the cdf is the median of the
    // cumulative differences
    std::vector<double> sorted = diff;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted[static_cast<size_t>((n - 1) / 2)];
    double s = 0.0;
    for (double d : diff) s += std::abs(d - med);
    return s * w;
}

// --- estimators ----------------------------------------------------------

HistogramMeasure birkhoff_histogram(const SystemPtr& sys, const State& x0, int64_t n,
                                    std::array<int, 2> bins) {
    if (n < 1) throw InvalidParams("birkhoff_histogram: n must be >= 1");
    HistogramMeasure h(sys->domain(), bins);
    State x = x0;
    sys->check_in_domain(x);
    for (int64_t j = 0; j < n; ++j) {
        h.deposit(x, 1.0);
        x = sys->eval(x);
    }
    h.normalize();
    return h;
}

HistogramMeasure random_birkhoff_histogram(const SystemPtr& sys, const NoiseKernel& kernel,
                                           const State& x0, int64_t n, std::array<int, 2> bins,
                                           uint64_t seed, uint64_t stream) {
    if (n < 1) throw InvalidParams("random_birkhoff_histogram: n must be >= 1");
    HistogramMeasure h(sys->domain(), bins);
    stream_orbit(sys, kernel, x0, static_cast<int>(n), seed, stream,
                 [&](int, const State& x) { h.deposit(x, 1.0); });
    h.normalize();
    return h;
}

HistogramMeasure pushforward_average(const SystemPtr& sys, const NoiseKernel& kernel,
                                     const State& x0, int n_time, int n_samples,
                                     std::array<int, 2> bins, uint64_t seed) {
    if (n_time < 1 || n_samples < 1)
        throw InvalidParams("pushforward_average: n_time and n_samples must be >= 1");
    HistogramMeasure h(sys->domain(), bins);
    const double w = 1.0 / (static_cast<double>(n_time) * n_samples);
    for (int s = 0; s < n_samples; ++s) {
        stream_orbit(sys, kernel, x0, n_time, seed,
                     derive_stream(static_cast<uint64_t>(s), 0xF0F0ull),
                     [&](int, const State& x) { h.deposit(x, w); });
    }
    h.normalize();
    return h;
}

double stationarity_residual(const HistogramMeasure& mu, const SystemPtr& sys,
                             const NoiseKernel& kernel, const TestFunctionFamily& family,
                             int mc_samples, uint64_t seed) {
    if (!mu.domain().same_as(sys->domain()))
        throw DomainMismatch("stationarity_residual: measure domain differs from the system");
    if (mc_samples < 1) throw InvalidParams("stationarity_residual: mc_samples must be >= 1");
    validate_kernel(*sys, kernel);

    const int F = family.size();
    const int cells = mu.cell_count();
    std::vector<double> lhs(static_cast<size_t>(F));
    for (int n = 0; n < F; ++n) lhs[static_cast<size_t>(n)] = family.integrate(n, mu);

    std::vector<double> rhs(static_cast<size_t>(F), 0.0);
    CounterRng rng(seed, 0x57A7ull);
    for (int s = 0; s < mc_samples; ++s) {
        const NoiseParam t = draw_noise(kernel, rng);
        for (int c = 0; c < cells; ++c) {
            const double m = mu.masses()[static_cast<size_t>(c)];
            if (m == 0.0) continue;
            const State y = perturbed_step(*sys, kernel, t, mu.cell_center(c));
            for (int n = 0; n < F; ++n)
                rhs[static_cast<size_t>(n)] += m * family.evaluate(n, y);
        }
    }
    double worst = 0.0;
    for (int n = 0; n < F; ++n)
        worst = std::max(worst,
                         std::abs(lhs[static_cast<size_t>(n)] -
                                  rhs[static_cast<size_t>(n)] / mc_samples));
    return worst;
}

// --- clustering ----------------------------------------------------------

MeasureCluster cluster_measures(const std::vector<HistogramMeasure>& samples,
                                const TestFunctionFamily& family, double threshold) {
    if (samples.empty()) throw InvalidParams("cluster_measures: no samples");
    const int n = static_cast<int>(samples.size());
    for (const auto& s : samples)
        if (!s.same_grid(samples[0])) throw DomainMismatch("cluster_measures: grids differ");

    std::vector<std::vector<double>> ints(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ints[static_cast<size_t>(i)] = family.integrals(samples[static_cast<size_t>(i)]);

    std::vector<int> label(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) label[static_cast<size_t>(i)] = i;

    // single linkage: repeatedly merge the closest pair of clusters while
    // the minimum pairwise sample distance is within the threshold
    std::vector<std::vector<double>> dist(static_cast<size_t>(n),
                                          std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dist[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                dist[static_cast<size_t>(j)][static_cast<size_t>(i)] =
                    family.distance_from_integrals(ints[static_cast<size_t>(i)],
                                                   ints[static_cast<size_t>(j)]);
    bool merged = true;
    while (merged) {
        merged = false;
        double best = threshold;
        int bi = -1, bj = -1;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (label[static_cast<size_t>(i)] == label[static_cast<size_t>(j)]) continue;
                const double d = dist[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (d <= best) {
                    best = d;
                    bi = label[static_cast<size_t>(i)];
                    bj = label[static_cast<size_t>(j)];
                }
            }
        if (bi >= 0) {
            const int keep = std::min(bi, bj), drop = std::max(bi, bj);
            for (int i = 0; i < n; ++i)
                if (label[static_cast<size_t>(i)] == drop) label[static_cast<size_t>(i)] = keep;
            merged = true;
        }
    }

    // compact labels in order of first appearance
    MeasureCluster out;
    std::vector<int> order;
    out.assignments.assign(static_cast<size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        const int lab = label[static_cast<size_t>(i)];
        auto it = std::find(order.begin(), order.end(), lab);
        int idx;
        if (it == order.end()) {
            idx = static_cast<int>(order.size());
            order.push_back(lab);
        } else {
            idx = static_cast<int>(it - order.begin());
        }
        out.assignments[static_cast<size_t>(i)] = idx;
    }
    out.l = static_cast<int>(order.size());
    for (int c = 0; c < out.l; ++c) {
        HistogramMeasure rep(samples[0].domain(), samples[0].bins());
        for (int i = 0; i < n; ++i)
            if (out.assignments[static_cast<size_t>(i)] == c)
                for (int b = 0; b < rep.cell_count(); ++b)
                    rep.add_mass(b, samples[static_cast<size_t>(i)].masses()[static_cast<size_t>(b)]);
        rep.normalize();
        out.representatives.push_back(std::move(rep));
    }
    return out;
}

// --- convex fit ----------------------------------------------------------

namespace {

// solve the small SPD system (G + ridge I) x = b in place, Gaussian elimination
std::vector<double> solve_spd(std::vector<std::vector<double>> G, std::vector<double> b) {
    const int m = static_cast<int>(b.size());
    for (int k = 0; k < m; ++k) {
        int piv = k;
        for (int i = k + 1; i < m; ++i)
            if (std::abs(G[static_cast<size_t>(i)][static_cast<size_t>(k)]) >
                std::abs(G[static_cast<size_t>(piv)][static_cast<size_t>(k)]))
                piv = i;
        std::swap(G[static_cast<size_t>(k)], G[static_cast<size_t>(piv)]);
        std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(piv)]);
        const double d = G[static_cast<size_t>(k)][static_cast<size_t>(k)];
        if (std::abs(d) < 1e-300) throw InvalidParams("convex_fit: singular basis");
        for (int i = k + 1; i < m; ++i) {
            const double f = G[static_cast<size_t>(i)][static_cast<size_t>(k)] / d;
            for (int j = k; j < m; ++j)
                G[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
                    f * G[static_cast<size_t>(k)][static_cast<size_t>(j)];
            b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(k)];
        }
    }
    std::vector<double> x(static_cast<size_t>(m), 0.0);
    for (int i = m - 1; i >= 0; --i) {
        double s = b[static_cast<size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            s -= G[static_cast<size_t>(i)][static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] = s / G[static_cast<size_t>(i)][static_cast<size_t>(i)];
    }
    return x;
}

} // namespace

ConvexFit convex_fit(const HistogramMeasure& mu, const std::vector<HistogramMeasure>& basis) {
    if (basis.empty()) throw InvalidParams("convex_fit: empty basis");
    for (const auto& b : basis)
        if (!b.same_grid(mu)) throw DomainMismatch("convex_fit: grids differ");

    const int p = static_cast<int>(basis.size());
    const int cells = mu.cell_count();

    // Lawson-Hanson NNLS on min ||B w - mu||, then renormalize to the simplex
    auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    std::vector<std::vector<double>> G(static_cast<size_t>(p),
                                       std::vector<double>(static_cast<size_t>(p)));
    std::vector<double> c(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) {
        c[static_cast<size_t>(i)] = dot(basis[static_cast<size_t>(i)].masses(), mu.masses());
        for (int j = 0; j < p; ++j)
            G[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                dot(basis[static_cast<size_t>(i)].masses(), basis[static_cast<size_t>(j)].masses());
    }

    std::vector<bool> active(static_cast<size_t>(p), false);
    std::vector<double> w(static_cast<size_t>(p), 0.0);
    for (int outer = 0; outer < 4 * p + 8; ++outer) {
        // gradient of 0.5||Bw - mu||^2 is Gw - c
        int best = -1;
        double best_g = 1e-12;
        for (int i = 0; i < p; ++i) {
            if (active[static_cast<size_t>(i)]) continue;
            double g = c[static_cast<size_t>(i)];
            for (int j = 0; j < p; ++j)
                g -= G[static_cast<size_t>(i)][static_cast<size_t>(j)] * w[static_cast<size_t>(j)];
            if (g > best_g) {
                best_g = g;
                best = i;
                break; // lowest index wins ties by scanning in order
            }
        }
        if (best < 0) break;
        active[static_cast<size_t>(best)] = true;

        for (int inner = 0; inner < 4 * p + 8; ++inner) {
            // least squares on the active set
            std::vector<int> idx;
            for (int i = 0; i < p; ++i)
                if (active[static_cast<size_t>(i)]) idx.push_back(i);
            const int m = static_cast<int>(idx.size());
            std::vector<std::vector<double>> Ga(static_cast<size_t>(m),
                                                std::vector<double>(static_cast<size_t>(m)));
            std::vector<double> ca(static_cast<size_t>(m));
            for (int i = 0; i < m; ++i) {
                ca[static_cast<size_t>(i)] = c[static_cast<size_t>(idx[static_cast<size_t>(i)])];
                for (int j = 0; j < m; ++j)
                    Ga[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                        G[static_cast<size_t>(idx[static_cast<size_t>(i)])]
                         [static_cast<size_t>(idx[static_cast<size_t>(j)])];
                Ga[static_cast<size_t>(i)][static_cast<size_t>(i)] += 1e-13;
            }
            const std::vector<double> z = solve_spd(Ga, ca);
            bool feasible = true;
            for (double v : z)
                if (v <= 0.0) feasible = false;
            if (feasible) {
                std::fill(w.begin(), w.end(), 0.0);
                for (int i = 0; i < m; ++i)
                    w[static_cast<size_t>(idx[static_cast<size_t>(i)])] = z[static_cast<size_t>(i)];
                break;
            }
            // step toward z until the first coordinate hits zero, drop it
            double alpha = 1.0;
            int drop = -1;
            for (int i = 0; i < m; ++i) {
                const double wi = w[static_cast<size_t>(idx[static_cast<size_t>(i)])];
                const double zi = z[static_cast<size_t>(i)];
                if (zi <= 0.0) {
                    const double a = wi / (wi - zi);
                    if (a < alpha) {
                        alpha = a;
                        drop = idx[static_cast<size_t>(i)];
                    }
                }
            }
            for (int i = 0; i < m; ++i) {
                const int k = idx[static_cast<size_t>(i)];
                w[static_cast<size_t>(k)] =
                    w[static_cast<size_t>(k)] +
                    alpha * (z[static_cast<size_t>(i)] - w[static_cast<size_t>(k)]);
            }
            if (drop >= 0) {
                active[static_cast<size_t>(drop)] = false;
                w[static_cast<size_t>(drop)] = 0.0;
            }
        }
    }

    double total = 0.0;
    for (double v : w) total += v;
    ConvexFit fit;
    if (total <= 0.0) {
        // degenerate input; fall back to the first vertex
        w.assign(static_cast<size_t>(p), 0.0);
        w[0] = 1.0;
        total = 1.0;
    }
    fit.weights.resize(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) fit.weights[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] / total;

    double res2 = 0.0;
    for (int b = 0; b < cells; ++b) {
        double r = -mu.masses()[static_cast<size_t>(b)];
        for (int i = 0; i < p; ++i)
            r += fit.weights[static_cast<size_t>(i)] *
                 basis[static_cast<size_t>(i)].masses()[static_cast<size_t>(b)];
        res2 += r * r;
    }
    fit.residual = std::sqrt(res2);
    return fit;
}

// --- distortion diagnostic ------------------------------------------------

namespace {

// Evaluate the 1-D map with noise at an unwrapped local coordinate.
double step_value(const MapSystem& sys, const NoiseKernel& kernel, const NoiseParam& t,
                  double z) {
    const State y = perturbed_step(sys, kernel, t, sys.domain().wrap(state1(z)));
    return y.x();
}

} // namespace

DistortionDiagnostic distortion_diagnostic(const SystemPtr& sys, const NoiseKernel& kernel,
                                           const HypParams& hp, const OrbitTrace& trace,
                                           int hyp_time, int pair_count, uint64_t seed) {
    if (sys->domain().dim() != 1)
        throw NotOneDimensional("distortion_diagnostic: needs a 1-D system");
    const int n = hyp_time;
    if (n < 1 || n > trace.steps())
        throw NotHyperbolicTime("distortion_diagnostic: time outside the trace");
    const HyperbolicRecord rec = sys->has_critical_set()
                                     ? hyperbolic_times_critical(trace, hp)
                                     : hyperbolic_times_diffeo(trace, hp.alpha_hyp);
    if (!std::binary_search(rec.times.begin(), rec.times.end(), n))
        throw NotHyperbolicTime("distortion_diagnostic: n is not hyperbolic for this trace");

    const double alpha = hp.alpha_hyp;
    const double beta = sys->constants().beta;
    DistortionDiagnostic diag;
    diag.delta1 =
        0.99 * std::min(hp.delta, std::pow(hp.delta, beta) * std::abs(std::log(alpha))) / 4.0;
    diag.c1_bound = std::exp(2.0 * sys->constants().B *
                             std::pow(alpha, 0.5 - hp.b_exponent * beta) /
                             (1.0 - std::pow(alpha, 0.5 - hp.b_exponent * beta)));

    const Domain& dom = sys->domain();
    const bool circle = dom.kind() == Domain::Kind::Circle;

    // target interval around the n-th state, in unwrapped coordinates
    const double xn = trace.states[static_cast<size_t>(n)].x();
    double lo = xn - diag.delta1;
    double hi = xn + diag.delta1;

    // pull the interval back one step at a time through the monotone branch
    // around the recorded orbit point; the bracket never reaches the critical
    // set, so the map is monotone on it and no fold can occur
    for (int j = 1; j <= n; ++j) {
        const double anchor = trace.states[static_cast<size_t>(n - j)].x();
        const NoiseParam t = trace.noise.entries[static_cast<size_t>(n - j)];
        const double radius0 = 2.0 * diag.delta1 * std::pow(alpha, 0.5 * j);
        const double to_critical =
            sys->critical_distance(dom.wrap(state1(anchor))).value_or(0.25);
        const double cap = 0.9 * to_critical;

        auto invert = [&](double target) {
            double radius = std::min(radius0, cap);
            for (int attempt = 0; attempt < 6; ++attempt) {
                double a = anchor - radius, b = anchor + radius;
                auto g = [&](double z) {
                    const double v = step_value(*sys, kernel, t, z);
                    return circle ? dom.circle_diff(v, target) : v - target;
                };
                double ga = g(a), gb = g(b);
                if ((ga <= 0.0 && gb >= 0.0) || (ga >= 0.0 && gb <= 0.0)) {
                    for (int it = 0; it < 200; ++it) {
                        const double mid = 0.5 * (a + b);
                        const double gm = g(mid);
                        if ((ga <= 0.0) == (gm <= 0.0)) {
                            a = mid;
                            ga = gm;
                        } else {
                            b = mid;
                        }
                        if (b - a < 1e-15 * std::max(1.0, std::abs(a))) break;
                    }
                    return 0.5 * (a + b);
                }
                if (radius >= cap) break;
                radius = std::min(1.5 * radius, cap);
            }
            throw BranchNotFound("distortion_diagnostic: inverse branch bisection failed at step " +
                                 std::to_string(n - j));
        };

        const double pa = invert(lo);
        const double pb = invert(hi);
        lo = std::min(pa, pb);
        hi = std::max(pa, pb);
    }
    diag.preimage_interval = {lo, hi};
    // branch contraction can push V_n below double resolution; pairs
    // sampled in such an interval would measure rounding noise only
    if (hi - lo < 1e4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo)))
        throw BranchNotFound(
            "distortion_diagnostic: preimage interval below floating-point resolution");

    // sample points in V_n, iterate them forward along the recorded noise,
    // and compare determinant products and backward contraction
    const int points = std::max(2, pair_count);
    CounterRng rng(seed, 0xD157ull);
    std::vector<std::vector<double>> paths;
    std::vector<double> logdets;
    paths.reserve(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) {
        double z = lo + (hi - lo) * rng.next_unit();
        std::vector<double> path;
        path.reserve(static_cast<size_t>(n) + 1);
        double logdet = 0.0;
        for (int j = 0; j < n; ++j) {
            path.push_back(z);
            logdet += std::log(std::abs(sys->tangent(dom.wrap(state1(z)))[0]));
            z = step_value(*sys, kernel, trace.noise.entries[static_cast<size_t>(j)], z);
        }
        path.push_back(z);
        paths.push_back(std::move(path));
        logdets.push_back(logdet);
    }

    const auto [mn, mx] = std::minmax_element(logdets.begin(), logdets.end());
    diag.observed_max_ratio = std::exp(*mx - *mn);

    double worst = 0.0;
    auto pdist = [&](double a, double b) {
        return circle ? std::abs(dom.circle_diff(dom.wrap_circle(a), dom.wrap_circle(b)))
                      : std::abs(a - b);
    };
    for (int i = 0; i + 1 < points; i += 2) {
        const auto& py = paths[static_cast<size_t>(i)];
        const auto& pz = paths[static_cast<size_t>(i + 1)];
        const double end = pdist(py[static_cast<size_t>(n)], pz[static_cast<size_t>(n)]);
        if (end <= 1e-13) continue; // below rounding resolution of the paths
        for (int k = 1; k <= n; ++k) {
            const double dk = pdist(py[static_cast<size_t>(n - k)], pz[static_cast<size_t>(n - k)]);
            worst = std::max(worst, dk / (std::pow(alpha, 0.5 * k) * end));
        }
    }
    diag.max_backward_ratio = worst;
    return diag;
}

} // namespace nuelab
