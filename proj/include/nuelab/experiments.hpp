#pragma once

#include <optional>
#include <string>

#include "nuelab/config.hpp"
#include "nuelab/measures.hpp"
#include "nuelab/viana.hpp"

namespace nuelab {

// Reference measures the noise level sweeps are compared against: the known
// invariant densities where a closed form exists (doubling, fig1), long
// unperturbed Birkhoff histograms otherwise (flagged as proxies).
struct SrbReference {
    std::vector<HistogramMeasure> components;
    bool proxy = false;
};
SrbReference srb_reference(const SystemPtr& sys, int bins, int64_t proxy_budget, uint64_t seed);

// Closed-form histograms of the two fig1 invariant densities (the arcsine
// density on [-1,1] and its mirror on [-3,-1]).
std::pair<HistogramMeasure, HistogramMeasure> fig1_srb_histograms(const Domain& domain, int bins);

struct StabilityRow {
    double epsilon = 0.0;
    double d_weakstar = 0.0;
    double d_wasserstein = 0.0;
    int l_clusters = 0;
    std::vector<double> weights;
    double fit_residual = 0.0;
    double stationarity_residual = 0.0;
    std::string verdict_row;
    double mc_slack = 0.0; // replicate-pair d_P, the monotonicity slack
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    std::vector<HistogramMeasure> pooled; // per-level pooled estimate of mu^eps
    std::string verdict; // stable-consistent | inconclusive | inconsistent
    bool reference_is_proxy = false;
};

// Pure verdict logic, unit-testable without simulation.
std::string stability_verdict(const std::vector<double>& d_column,
                              const std::vector<double>& slacks, double stability_tol);

StabilityReport run_stability_sweep(const ExperimentConfig& cfg);

struct CountReport {
    struct Row {
        double epsilon = 0.0;
        int l = 0;
    };
    std::vector<Row> rows;
    bool monotone = true;                  // l nonincreasing as epsilon decreases
    std::optional<int> srb_count;          // p, where known
    bool l_within_srb_count = true;        // l <= p at every level
};

CountReport run_physical_count(const ExperimentConfig& cfg);

struct TailReport {
    std::vector<TailProfile> profiles;
    std::vector<double> taus;       // geometric fit per level
    std::vector<double> statistics; // truncated L1 tail per level
    double uniform_statistic = 0.0;
};

TailReport run_tail_experiment(const ExperimentConfig& cfg);

struct VianaDiagReport {
    std::vector<double> expansion_averages;  // one per seeded orbit
    std::vector<double> recurrence_averages; // at delta = alpha^(1/2 - 2 eta)
    double delta_used = 0.0;
    double expansion_pass_fraction = 0.0;    // <= -expansion_c
    double recurrence_pass_fraction = 0.0;   // <= recurrence_gamma
    // per-sample depth statistics at horizon n_max
    struct DepthRow {
        int64_t sample = 0;
        int n = 0;
        int64_t g_sum = 0;
        bool deep_return = false;
    };
    std::vector<DepthRow> depth_rows;
    FoliationResult foliation;
    double foliation_lipschitz = 0.0; // measured on random field pairs
};

VianaDiagReport run_viana_diag(const ExperimentConfig& cfg);

// --- output emission ----------------------------------------------------

// All floats printed with 12 significant digits; reruns with the same
// config produce byte-identical files.
std::string format_float(double v);

// Histogram CSV: bin_index, coord1_lo, coord1_hi, [coord2_lo, coord2_hi,]
// mass; header row, rows ordered by bin_index.
void write_histogram_csv(const HistogramMeasure& hist, const std::string& path);

std::vector<std::string> emit_stability(const StabilityReport& rep, const ExperimentConfig& cfg);
std::vector<std::string> emit_count(const CountReport& rep, const ExperimentConfig& cfg);
std::vector<std::string> emit_tail(const TailReport& rep, const ExperimentConfig& cfg);
std::vector<std::string> emit_viana_diag(const VianaDiagReport& rep, const ExperimentConfig& cfg);
std::vector<std::string> emit_orbit(const OrbitTrace& trace, const ExperimentConfig& cfg);

// manifest.txt: config echo, seeds, version, wall time (not a CSV)
std::string write_manifest(const ExperimentConfig& cfg, const std::string& command,
                           double wall_seconds);

} // namespace nuelab
