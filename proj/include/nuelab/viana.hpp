#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nuelab/orbit.hpp"

namespace nuelab {

struct MisiurewiczResult {
    double a0 = 0.0;
    int k = 0;        // iterates from the critical point to the fixed point
    double residual = 0.0;
};

// Parameter a0 in (1, 2) at which the critical point 0 of Q(x) = a - x^2 is
// pre-periodic: the smallest k <= k_max with a sign change of
// Q_a^k(0) - p(a) is bisected and polished, p being the repelling fixed
// point (1 + sqrt(1+4a))/2 - 1 that the critical orbit can reach.
MisiurewiczResult find_misiurewicz_a0(int k_max, double tol);

// Return-depth bookkeeping for viana traces: r_j = 0 when |x_j| >= sqrt(alpha),
// otherwise the smallest integer r with |x_j| >= e^{-r}.
struct ReturnDepthTrace {
    std::vector<int> depths;
    std::vector<int> g_set; // indices with r_j >= (1/2 - 2 eta) log(1/alpha)
    int64_t g_sum = 0;      // sum of depths over g_set
};

ReturnDepthTrace return_depths(const OrbitTrace& trace, double alpha_skew, double eta_exponent);

// (1/n) sum log ||Df||^{-1} along a cylinder trace; equals
// -(1/n) sum log |2 x_j| under the max-entry norm.
double central_expansion_average(const OrbitTrace& trace);

// Fraction of uniformly sampled (noise, start) pairs whose first n iterates
// enter J(floor(sqrt(n))) = {|x| < e^{-floor(sqrt(n))}}.
double deep_return_fraction(const SystemPtr& sys, const NoiseKernel& kernel, int n,
                            int64_t sample_size, uint64_t seed, int threads = 1);

// Fraction of samples outside the deep-return event with g_sum >= gamma n.
double expansion_deficit_fraction(const SystemPtr& sys, const NoiseKernel& kernel, int n,
                                  double gamma, int64_t sample_size, uint64_t seed,
                                  int threads = 1);

// Central-direction field xi on a cylinder grid, values in [-1, 1]. The
// graph field (xi, 1) integrates to the invariant central foliation.
struct FoliationField {
    int ns = 0, nx = 0;
    std::vector<double> values; // row-major, index = is * nx + ix
    int horizon = 0;            // noise-truncation depth used to build it

    double& at(int is, int ix) { return values[static_cast<size_t>(is) * nx + ix]; }
    double at(int is, int ix) const { return values[static_cast<size_t>(is) * nx + ix]; }
    double sup_norm() const;

    static FoliationField zeros(int ns, int nx);
};

double sup_diff(const FoliationField& a, const FoliationField& b);

// One application of the graph transform
//   A xi(z) = (d_x q(z) xi(f_t(z)) - d_x g(z)) / (-d_s q(z) xi(f_t(z)) + d_s g(z))
// with xi(f_t(z)) read by bilinear interpolation. noise_path supplies t (the
// first entry); empty path means the unperturbed map. Values may only leave
// [-1, 1] by < 1e-9 (clamped), else ContractionViolated.
FoliationField foliation_apply(const FoliationField& field, const SystemPtr& sys,
                               const std::vector<NoiseParam>& noise_path,
                               const NoiseKernel* kernel = nullptr, int threads = 1);

struct FoliationResult {
    FoliationField field;
    int iterations = 0;
    double final_change = 0.0;
    double residual = 0.0;              // sup |A xi - xi| at the returned field
    std::vector<double> step_changes;   // sup-change per iteration
};

// Iterate foliation_apply to the fixed point, starting from the given field
// (xi = 0 when absent). For the random case a kernel and mc count average A
// over mc noise draws per step, at the stated truncation horizon.
FoliationResult foliation_fixed_point(const SystemPtr& sys, int ns, int nx, double tol,
                                      int max_iters,
                                      const std::optional<FoliationField>& start = std::nullopt,
                                      const NoiseKernel* kernel = nullptr, int mc = 0,
                                      int horizon = 20, uint64_t seed = 0, int threads = 1);

} // namespace nuelab
