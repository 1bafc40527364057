#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nuelab/orbit.hpp"

namespace nuelab {

// Constants of the Pliss selection lemma. For a sequence a_1..a_N with
// sum >= c2 N and a_j <= H, more than zeta N indices i satisfy
// sum_{j=n+1..i} a_j >= c1 (i - n) for every 0 <= n < i.
struct PlissParams {
    double c1;
    double c2;
    double H;

    PlissParams(double c1_, double c2_, double H_);
    double zeta() const { return (c2 - c1) / (H - c1); }
};

/// The maximal Pliss set of a sequence (1-based indices), computed by a
/// single scan over prefix sums of (a_j - c1): index i is selected exactly
/// when its prefix sum is a running maximum.
///
/// Throws HypothesisViolated when the lemma's hypothesis fails, unless
/// allow_unguaranteed is set, in which case the maximal set is returned
/// without the size guarantee.
std::vector<int> pliss_select(std::span<const double> a, const PlissParams& p,
                              bool allow_unguaranteed = false);

// (alpha, delta)-hyperbolic time parameters.
struct HypParams {
    double alpha_hyp;  // in (0, 1)
    double delta;      // > 0
    double b_exponent; // from the system's smoothness constants

    HypParams(double alpha, double delta_, double b);
};

struct HyperbolicRecord {
    std::vector<int> times; // sorted, 1-based (a time counts completed steps)
    std::optional<int> first;
};

/// Hyperbolic times of a diffeomorphism-case trace: n is listed when
/// every backward window satisfies prod ||Df^{-1}|| <= alpha^k, i.e. the
/// Pliss condition on -log_inv_norms with c1 = -log(alpha).
HyperbolicRecord hyperbolic_times_diffeo(const OrbitTrace& trace, double alpha_hyp);

/// Hyperbolic times of a critical-set trace: additionally every window must
/// satisfy dist_delta(x_{n-k}, C) >= alpha^{b k}. The trace must carry
/// recurrence records at the same delta (DeltaMismatch otherwise).
HyperbolicRecord hyperbolic_times_critical(const OrbitTrace& trace, const HypParams& hp);

// Smallest hyperbolic time, or nullopt when censored at the trace length.
std::optional<int> first_hyperbolic_time(const OrbitTrace& trace, const HypParams& hp,
                                         bool critical);

// Empirical distribution of the first hyperbolic time h over Monte Carlo
// samples (t-sequence, uniform start) at one noise level.
struct TailProfile {
    double epsilon = 0.0;
    std::vector<int64_t> counts; // counts[k] = #samples with h = k, k = 0..n_max
    int64_t censored = 0;        // samples with h > n_max
    int64_t sample_size = 0;
    int n_max = 0;

    double p_at(int k) const {
        return static_cast<double>(counts[static_cast<size_t>(k)]) /
               static_cast<double>(sample_size);
    }
    double survival(int k) const; // P(h > k)
};

TailProfile tail_profile(const SystemPtr& sys, const NoiseKernel& kernel, const HypParams& hp,
                         int64_t sample_size, int n_max, uint64_t seed, int threads = 1);

// Truncated L1-tail of one profile: sum_{k >= N} k P(h = k) plus the
// censored mass weighted pessimistically at n_max.
double tail_statistic(const TailProfile& profile, int N);

// Max of tail_statistic over an epsilon grid of profiles sharing n_max >= N.
double uniform_tail_statistic(const std::vector<TailProfile>& profiles, int N);

// Least-squares slope fit of log P(h > k) against k over the positive part
// of the survival curve; returns tau = exp(slope).
double fit_geometric_tail(const TailProfile& profile);

} // namespace nuelab
