#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "nuelab/hyperbolic.hpp"

namespace nuelab {

// Normalized piecewise-constant probability measure on a gridded domain.
// Cells are indexed row-major: idx = i0 * bins[1] + i1 (bins[1] = 1 in 1-D).
class HistogramMeasure {
public:
    HistogramMeasure() = default;
    HistogramMeasure(const Domain& domain, std::array<int, 2> bins);

    static HistogramMeasure uniform(const Domain& domain, std::array<int, 2> bins);

    const Domain& domain() const { return domain_; }
    const std::array<int, 2>& bins() const { return bins_; }
    int cell_count() const { return bins_[0] * bins_[1]; }
    const std::vector<double>& masses() const { return mass_; }
    std::vector<double>& masses() { return mass_; }

    bool same_grid(const HistogramMeasure& o) const {
        return domain_.same_as(o.domain_) && bins_ == o.bins_;
    }

    int cell_of(const State& x) const;
    State cell_center(int idx) const;
    // lo/hi bounds of the cell along the given coordinate
    std::pair<double, double> cell_edges(int idx, int coordinate) const;
    double cell_width(int coordinate) const;

    void deposit(const State& x, double weight);
    void add_mass(int idx, double weight) { mass_[static_cast<size_t>(idx)] += weight; }
    // Scale to total mass one; throws on a zero histogram.
    void normalize();
    double total_mass() const;

    double l1_distance(const HistogramMeasure& o) const;

private:
    Domain domain_ = Domain::interval(0.0, 1.0);
    std::array<int, 2> bins_{1, 1};
    std::vector<double> mass_;
};

// Separating family for the weak* metric d_P: Fourier modes (constant,
// cos, sin up to K) on circle factors, Chebyshev polynomials T_0..T_K on
// interval factors, diagonal-ordered products on the cylinder and torus.
// Member n carries weight 2^{-(n+1)} (constant first). Integrals against
// histograms evaluate members at cell centers.
class TestFunctionFamily {
public:
    TestFunctionFamily(const Domain& domain, std::array<int, 2> bins, int K = 16);

    const Domain& domain() const { return domain_; }
    const std::array<int, 2>& bins() const { return bins_; }
    int size() const { return static_cast<int>(members_.size()); }
    double weight(int n) const; // 2^{-(n+1)}

    double evaluate(int n, const State& x) const;
    double integrate(int n, const HistogramMeasure& mu) const;
    // all member integrals at once (the per-histogram cache for d_P)
    std::vector<double> integrals(const HistogramMeasure& mu) const;

    double distance(const HistogramMeasure& mu, const HistogramMeasure& nu) const;
    double distance_from_integrals(const std::vector<double>& iu,
                                   const std::vector<double>& iv) const;

private:
    struct Member {
        // per-factor basis indices; factor 1 unused in 1-D
        int f0 = 0;
        int f1 = 0;
    };
    double eval_factor(int coordinate, int basis_index, double v) const;

    Domain domain_ = Domain::interval(0.0, 1.0);
    std::array<int, 2> bins_{1, 1};
    int K_ = 16;
    std::vector<Member> members_;
    // precomputed factor values at cell centers: values_[coord][basis][cell]
    std::array<std::vector<std::vector<double>>, 2> values_;
};

double weak_star_distance(const HistogramMeasure& mu, const HistogramMeasure& nu,
                          const TestFunctionFamily& family);

// Transport distance at grid resolution for 1-D domains; cyclic-optimal on
// circle domains (cdf shift by the median).
double wasserstein_1d(const HistogramMeasure& mu, const HistogramMeasure& nu);

// --- estimators --------------------------------------------------------

HistogramMeasure birkhoff_histogram(const SystemPtr& sys, const State& x0, int64_t n,
                                    std::array<int, 2> bins);

HistogramMeasure random_birkhoff_histogram(const SystemPtr& sys, const NoiseKernel& kernel,
                                           const State& x0, int64_t n, std::array<int, 2> bins,
                                           uint64_t seed, uint64_t stream);

// Push-forward average (1/n) sum_{j=0..n-1} (f^j_x)_* theta^N, Monte Carlo
// over n_samples noise sequences; the j = 0 term is the point mass at x0.
HistogramMeasure pushforward_average(const SystemPtr& sys, const NoiseKernel& kernel,
                                     const State& x0, int n_time, int n_samples,
                                     std::array<int, 2> bins, uint64_t seed);

// Max over the family of |int phi dmu - MC estimate of int int phi(f_t x) dmu dtheta|.
double stationarity_residual(const HistogramMeasure& mu, const SystemPtr& sys,
                             const NoiseKernel& kernel, const TestFunctionFamily& family,
                             int mc_samples, uint64_t seed);

// --- clustering and decomposition --------------------------------------

struct MeasureCluster {
    std::vector<HistogramMeasure> representatives; // cluster averages, renormalized
    std::vector<int> assignments;                  // sample -> cluster
    int l = 0;
};

// Single-linkage agglomeration under d_P with the given merge threshold.
MeasureCluster cluster_measures(const std::vector<HistogramMeasure>& samples,
                                const TestFunctionFamily& family, double threshold);

struct ConvexFit {
    std::vector<double> weights; // nonnegative, sum to one
    double residual = 0.0;       // L2 norm of bin-mass residual after renormalization
};

// Nonnegative least squares onto the given basis followed by renormalization
// to the simplex; deterministic active-set updates with lowest-index ties.
ConvexFit convex_fit(const HistogramMeasure& mu, const std::vector<HistogramMeasure>& basis);

// --- distortion diagnostics (1-D) ---------------------------------------

struct DistortionDiagnostic {
    double c1_bound = 0.0;           // exp(2 B r / (1 - r)), r = alpha^(1/2 - b beta)
    double observed_max_ratio = 0.0; // max |det Df^n(y)| / |det Df^n(z)| over pairs
    double max_backward_ratio = 0.0; // max_k dist_{n-k}(pair) / (alpha^{k/2} dist_n(pair))
    double delta1 = 0.0;
    std::array<double, 2> preimage_interval{0.0, 0.0};
};

// Builds the inverse-branch preimage V_n of the delta1-ball around the n-th
// state along the trace's noise, samples point pairs in it, and compares the
// observed determinant ratios and backward contraction against the analytic
// bounds. Requires a 1-D system and a verified hyperbolic time n.
DistortionDiagnostic distortion_diagnostic(const SystemPtr& sys, const NoiseKernel& kernel,
                                           const HypParams& hp, const OrbitTrace& trace,
                                           int hyp_time, int pair_count, uint64_t seed);

} // namespace nuelab
