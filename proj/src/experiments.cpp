#include "nuelab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "nuelab/parallel.hpp"

namespace nuelab {

namespace fs = std::filesystem;

namespace {

uint64_t stream_id(uint64_t purpose, uint64_t a, uint64_t b) {
    return derive_stream(derive_stream(purpose, a), b);
}

std::array<int, 2> grid_of(const SystemPtr& sys, int bins) {
    return sys->domain().dim() == 1 ? std::array<int, 2>{bins, 1}
                                    : std::array<int, 2>{bins, bins};
}

} // namespace

std::pair<HistogramMeasure, HistogramMeasure> fig1_srb_histograms(const Domain& domain,
                                                                  int bins) {
    HistogramMeasure left(domain, {bins, 1});  // support [-3, -1]
    HistogramMeasure right(domain, {bins, 1}); // support [-1, 1]
    auto arcsine_cdf = [](double u) { // cdf of 1/(pi sqrt(1-u^2)) on [-1, 1]
        return 0.5 + std::asin(std::clamp(u, -1.0, 1.0)) / std::numbers::pi;
    };
    for (int b = 0; b < bins; ++b) {
        const auto [lo, hi] = left.cell_edges(b, 0);
        // mirror chart: y = x + 2 maps [-3,-1] onto [-1,1]
        const double ml = std::clamp(lo + 2.0, -1.0, 1.0);
        const double mh = std::clamp(hi + 2.0, -1.0, 1.0);
        left.add_mass(b, arcsine_cdf(mh) - arcsine_cdf(ml));
        const double rl = std::clamp(lo, -1.0, 1.0);
        const double rh = std::clamp(hi, -1.0, 1.0);
        right.add_mass(b, arcsine_cdf(rh) - arcsine_cdf(rl));
    }
    left.normalize();
    right.normalize();
    return {std::move(left), std::move(right)};
}

SrbReference srb_reference(const SystemPtr& sys, int bins, int64_t proxy_budget, uint64_t seed) {
    SrbReference ref;
    if (sys->name() == "doubling") {
        ref.components.push_back(HistogramMeasure::uniform(sys->domain(), {bins, 1}));
        ref.proxy = false;
        return ref;
    }
    if (sys->name() == "fig1") {
        auto [left, right] = fig1_srb_histograms(sys->domain(), bins);
        ref.components.push_back(std::move(left));
        ref.components.push_back(std::move(right));
        ref.proxy = false;
        return ref;
    }
    ref.proxy = true;
    if (sys->name() == "fig2") {
        // one long unperturbed orbit per trapping region
        for (const TrappingRegion& t : fig2_trapping_regions(*sys)) {
            const State x0 = state1(0.5 * (t.lo + t.hi) + 0.1 * (t.hi - t.lo));
            ref.components.push_back(birkhoff_histogram(sys, x0, proxy_budget, {bins, 1}));
        }
        return ref;
    }
    // generic proxy: a long unperturbed orbit from a generic start
    CounterRng rng(seed, 0x5EB0ull);
    State x0 = sys->domain().sample_uniform(rng);
    while (sys->has_critical_set() &&
           sys->critical_distance(x0).value_or(1.0) < 1e-6)
        x0 = sys->domain().sample_uniform(rng);
    ref.components.push_back(birkhoff_histogram(sys, x0, proxy_budget, grid_of(sys, bins)));
    return ref;
}

std::string stability_verdict(const std::vector<double>& d_column,
                              const std::vector<double>& slacks, double stability_tol) {
    if (d_column.empty()) return "inconclusive";
    bool nonincreasing = true;
    bool nondecreasing = true;
    for (size_t i = 0; i + 1 < d_column.size(); ++i) {
        const double slack = std::max(slacks[i], slacks[i + 1]);
        if (d_column[i + 1] > d_column[i] + slack) nonincreasing = false;
        if (d_column[i + 1] < d_column[i] - slack) nondecreasing = false;
    }
    const double final_d = d_column.back();
    if (nonincreasing && final_d < stability_tol) return "stable-consistent";
    if (final_d >= stability_tol && nondecreasing && d_column.back() > d_column.front())
        return "inconsistent";
    return "inconclusive";
}

StabilityReport run_stability_sweep(const ExperimentConfig& cfg) {
    const SystemPtr sys = cfg.make_system();
    const auto bins = grid_of(sys, cfg.bins);
    const TestFunctionFamily family(sys->domain(), bins);
    const SrbReference ref = srb_reference(sys, cfg.bins, 10 * cfg.orbit_len, cfg.seed);

    StabilityReport rep;
    rep.reference_is_proxy = ref.proxy;

    for (size_t ei = 0; ei < cfg.epsilons.size(); ++ei) {
        const double eps = cfg.epsilons[ei];
        const NoiseKernel kernel = cfg.make_kernel(eps, sys->domain().dim());

        // per-start random Birkhoff estimates, plus a replicate at start 0
        std::vector<HistogramMeasure> hists(static_cast<size_t>(cfg.starts),
                                            HistogramMeasure(sys->domain(), bins));
        HistogramMeasure replicate(sys->domain(), bins);
        parallel_for(0, cfg.starts + 1, cfg.threads, [&](int64_t s) {
            const bool is_replicate = (s == cfg.starts);
            const int start = is_replicate ? 0 : static_cast<int>(s);
            const int rep_idx = is_replicate ? 1 : 0;
            CounterRng rng(cfg.seed, stream_id(0xA0ull, ei, static_cast<uint64_t>(start)));
            State x0 = sys->domain().sample_uniform(rng);
            while (sys->has_critical_set() &&
                   sys->critical_distance(x0).value_or(1.0) < 1e-9)
                x0 = sys->domain().sample_uniform(rng);
            auto h = random_birkhoff_histogram(
                sys, kernel, x0, cfg.orbit_len, bins, cfg.seed,
                stream_id(0xB0ull + rep_idx, ei, static_cast<uint64_t>(start)));
            if (is_replicate)
                replicate = std::move(h);
            else
                hists[static_cast<size_t>(start)] = std::move(h);
        });

        StabilityRow row;
        row.epsilon = eps;
        row.mc_slack = family.distance(hists[0], replicate);

        const MeasureCluster clusters = cluster_measures(hists, family, cfg.cluster_merge);
        row.l_clusters = clusters.l;

        // distance of every cluster to its best convex reconstruction from
        // the reference components
        double worst_d = 0.0, worst_w = 0.0;
        for (const auto& rep_hist : clusters.representatives) {
            const ConvexFit f = convex_fit(rep_hist, ref.components);
            HistogramMeasure recon(sys->domain(), bins);
            for (size_t i = 0; i < ref.components.size(); ++i)
                for (int b = 0; b < recon.cell_count(); ++b)
                    recon.add_mass(b, f.weights[i] * ref.components[i].masses()[static_cast<size_t>(b)]);
            recon.normalize();
            worst_d = std::max(worst_d, family.distance(rep_hist, recon));
            if (sys->domain().dim() == 1)
                worst_w = std::max(worst_w, wasserstein_1d(rep_hist, recon));
            else
                worst_w = std::numeric_limits<double>::quiet_NaN();
        }
        row.d_weakstar = worst_d;
        row.d_wasserstein = worst_w;

        // pooled estimate across starts: convex weights and stationarity
        HistogramMeasure pooled(sys->domain(), bins);
        for (const auto& h : hists)
            for (int b = 0; b < pooled.cell_count(); ++b)
                pooled.add_mass(b, h.masses()[static_cast<size_t>(b)]);
        pooled.normalize();
        const ConvexFit pooled_fit = convex_fit(pooled, ref.components);
        row.weights = pooled_fit.weights;
        row.fit_residual = pooled_fit.residual;
        row.stationarity_residual = stationarity_residual(
            pooled, sys, kernel, family, static_cast<int>(std::min<int64_t>(cfg.samples, 100000)),
            derive_stream(cfg.seed, 0xE5ull + ei));

        row.verdict_row = row.d_weakstar < cfg.stability_tol ? "below_tol" : "above_tol";
        rep.rows.push_back(std::move(row));
        rep.pooled.push_back(std::move(pooled));
    }

    std::vector<double> ds, slacks;
    for (const auto& r : rep.rows) {
        ds.push_back(r.d_weakstar);
        slacks.push_back(r.mc_slack);
    }
    rep.verdict = stability_verdict(ds, slacks, cfg.stability_tol);
    return rep;
}

CountReport run_physical_count(const ExperimentConfig& cfg) {
    const SystemPtr sys = cfg.make_system();
    const auto bins = grid_of(sys, cfg.bins);
    const TestFunctionFamily family(sys->domain(), bins);

    CountReport rep;
    if (sys->name() == "doubling") rep.srb_count = 1;
    if (sys->name() == "fig1" || sys->name() == "fig2") rep.srb_count = 2;

    for (size_t ei = 0; ei < cfg.epsilons.size(); ++ei) {
        const double eps = cfg.epsilons[ei];
        const NoiseKernel kernel = cfg.make_kernel(eps, sys->domain().dim());
        std::vector<HistogramMeasure> hists(static_cast<size_t>(cfg.starts),
                                            HistogramMeasure(sys->domain(), bins));
        parallel_for(0, cfg.starts, cfg.threads, [&](int64_t s) {
            CounterRng rng(cfg.seed, stream_id(0xC0ull, ei, static_cast<uint64_t>(s)));
            State x0 = sys->domain().sample_uniform(rng);
            while (sys->has_critical_set() &&
                   sys->critical_distance(x0).value_or(1.0) < 1e-9)
                x0 = sys->domain().sample_uniform(rng);
            hists[static_cast<size_t>(s)] = random_birkhoff_histogram(
                sys, kernel, x0, cfg.orbit_len, bins, cfg.seed,
                stream_id(0xD0ull, ei, static_cast<uint64_t>(s)));
        });
        const MeasureCluster clusters = cluster_measures(hists, family, cfg.cluster_merge);
        rep.rows.push_back({eps, clusters.l});
    }

    for (size_t i = 0; i + 1 < rep.rows.size(); ++i)
        if (rep.rows[i + 1].l > rep.rows[i].l) rep.monotone = false;
    if (rep.srb_count)
        for (const auto& r : rep.rows)
            if (r.l > *rep.srb_count) rep.l_within_srb_count = false;
    return rep;
}

TailReport run_tail_experiment(const ExperimentConfig& cfg) {
    const SystemPtr sys = cfg.make_system();
    const HypParams hp(cfg.hyp_alpha, cfg.hyp_delta, sys->constants().b_exponent);

    TailReport rep;
    for (size_t ei = 0; ei < cfg.epsilons.size(); ++ei) {
        const NoiseKernel kernel = cfg.make_kernel(cfg.epsilons[ei], sys->domain().dim());
        TailProfile prof = tail_profile(sys, kernel, hp, cfg.samples, cfg.n_max,
                                        derive_stream(cfg.seed, 0x7A11ull + ei), cfg.threads);
        rep.taus.push_back(fit_geometric_tail(prof));
        rep.statistics.push_back(tail_statistic(prof, cfg.tail_cutoff));
        rep.profiles.push_back(std::move(prof));
    }
    rep.uniform_statistic = uniform_tail_statistic(rep.profiles, cfg.tail_cutoff);
    return rep;
}

VianaDiagReport run_viana_diag(const ExperimentConfig& cfg) {
    const SystemPtr sys = cfg.make_system();
    const VianaInfo& info = viana_info(*sys);
    const double eps = cfg.epsilons.front();
    const NoiseKernel kernel = cfg.make_kernel(eps, 2);

    VianaDiagReport rep;
    rep.delta_used = std::pow(info.alpha_skew, 0.5 - 2.0 * info.eta_exponent);

    const int seeds = cfg.starts;
    rep.expansion_averages.assign(static_cast<size_t>(seeds), 0.0);
    rep.recurrence_averages.assign(static_cast<size_t>(seeds), 0.0);
    parallel_for(0, seeds, cfg.threads, [&](int64_t s) {
        CounterRng rng(cfg.seed, stream_id(0xE0ull, 0, static_cast<uint64_t>(s)));
        State x0 = sys->domain().sample_uniform(rng);
        while (sys->critical_distance(x0).value_or(1.0) < 1e-9)
            x0 = sys->domain().sample_uniform(rng);
        double sum_exp = 0.0, sum_rec = 0.0;
        const int64_t n = cfg.orbit_len;
        stream_orbit(sys, kernel, x0, static_cast<int>(n), cfg.seed,
                     stream_id(0xE1ull, 0, static_cast<uint64_t>(s)), [&](int, const State& z) {
                         sum_exp += std::log(sys->inv_tangent_norm(z));
                         sum_rec -= std::log(sys->truncated_distance(z, rep.delta_used));
                     });
        rep.expansion_averages[static_cast<size_t>(s)] = sum_exp / static_cast<double>(n);
        rep.recurrence_averages[static_cast<size_t>(s)] = sum_rec / static_cast<double>(n);
    });
    int pass_e = 0, pass_r = 0;
    for (int s = 0; s < seeds; ++s) {
        if (rep.expansion_averages[static_cast<size_t>(s)] <= -cfg.expansion_c) ++pass_e;
        if (rep.recurrence_averages[static_cast<size_t>(s)] <= cfg.recurrence_gamma) ++pass_r;
    }
    rep.expansion_pass_fraction = static_cast<double>(pass_e) / seeds;
    rep.recurrence_pass_fraction = static_cast<double>(pass_r) / seeds;

    // depth statistics at horizon n_max
    const double deep_radius = std::exp(-std::floor(std::sqrt(static_cast<double>(cfg.n_max))));
    const double sqrt_alpha = std::sqrt(info.alpha_skew);
    const double g_threshold = (0.5 - 2.0 * info.eta_exponent) * std::log(1.0 / info.alpha_skew);
    rep.depth_rows.assign(static_cast<size_t>(cfg.samples), {});
    parallel_for(0, cfg.samples, cfg.threads, [&](int64_t i) {
        CounterRng rng(cfg.seed, stream_id(0xE2ull, 1, static_cast<uint64_t>(i)));
        State x0 = sys->domain().sample_uniform(rng);
        while (sys->critical_distance(x0).value_or(1.0) < 1e-9)
            x0 = sys->domain().sample_uniform(rng);
        VianaDiagReport::DepthRow row;
        row.sample = i;
        row.n = cfg.n_max;
        stream_orbit(sys, kernel, x0, cfg.n_max, cfg.seed,
                     stream_id(0xE3ull, 1, static_cast<uint64_t>(i)), [&](int j, const State& z) {
                         const double ax = std::abs(z.y());
                         if (j >= 1 && ax < deep_radius) row.deep_return = true;
                         if (ax < sqrt_alpha) {
                             const int r =
                                 std::min(200, std::max(0, static_cast<int>(std::ceil(-std::log(ax)))));
                             if (r >= g_threshold) row.g_sum += r;
                         }
                     });
        rep.depth_rows[static_cast<size_t>(i)] = row;
    });

    // central foliation: fixed point from zero plus a Lipschitz measurement
    rep.foliation = foliation_fixed_point(sys, 256, 128, 1e-10, 64, std::nullopt, nullptr, 0, 0,
                                          cfg.seed, cfg.threads);
    CounterRng rng(cfg.seed, 0xF1E1Dull);
    double lip = 0.0;
    for (int pair = 0; pair < 10; ++pair) {
        FoliationField a = FoliationField::zeros(64, 32);
        FoliationField b = FoliationField::zeros(64, 32);
        for (size_t i = 0; i < a.values.size(); ++i) {
            a.values[i] = rng.next_sym();
            b.values[i] = rng.next_sym();
        }
        const double before = sup_diff(a, b);
        if (before == 0.0) continue;
        const double after =
            sup_diff(foliation_apply(a, sys, {}), foliation_apply(b, sys, {}));
        lip = std::max(lip, after / before);
    }
    rep.foliation_lipschitz = lip;
    return rep;
}

// --- output emission ------------------------------------------------------

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

std::ofstream open_out(const fs::path& p) {
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary); // binary keeps line endings stable
    if (!f) throw IoError("cannot open output file " + p.string());
    return f;
}

} // namespace

void write_histogram_csv(const HistogramMeasure& hist, const std::string& path) {
    auto f = open_out(fs::path(path));
    const bool twod = hist.domain().dim() == 2;
    f << (twod ? "bin_index,coord1_lo,coord1_hi,coord2_lo,coord2_hi,mass\n"
               : "bin_index,coord1_lo,coord1_hi,mass\n");
    for (int b = 0; b < hist.cell_count(); ++b) {
        const auto [lo0, hi0] = hist.cell_edges(b, 0);
        f << b << ',' << format_float(lo0) << ',' << format_float(hi0);
        if (twod) {
            const auto [lo1, hi1] = hist.cell_edges(b, 1);
            f << ',' << format_float(lo1) << ',' << format_float(hi1);
        }
        f << ',' << format_float(hist.masses()[static_cast<size_t>(b)]) << '\n';
    }
}

std::vector<std::string> emit_stability(const StabilityReport& rep, const ExperimentConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::vector<std::string> written;

    const size_t p = rep.rows.empty() ? 1 : rep.rows.front().weights.size();
    {
        auto f = open_out(dir / "stability.csv");
        f << "epsilon,d_weakstar,d_wasserstein,l_clusters";
        for (size_t i = 1; i <= p; ++i) f << ",w" << i;
        f << ",fit_residual,stationarity_residual,verdict_row\n";
        for (const auto& r : rep.rows) {
            f << format_float(r.epsilon) << ',' << format_float(r.d_weakstar) << ','
              << format_float(r.d_wasserstein) << ',' << r.l_clusters;
            for (size_t i = 0; i < p; ++i)
                f << ',' << format_float(i < r.weights.size() ? r.weights[i] : 0.0);
            f << ',' << format_float(r.fit_residual) << ','
              << format_float(r.stationarity_residual) << ',' << r.verdict_row << '\n';
        }
        written.push_back((dir / "stability.csv").string());
    }
    {
        auto f = open_out(dir / "stability_dp.dat");
        for (const auto& r : rep.rows)
            f << format_float(r.epsilon) << ' ' << format_float(r.d_weakstar) << '\n';
        written.push_back((dir / "stability_dp.dat").string());
    }
    {
        auto f = open_out(dir / "verdict.txt");
        f << rep.verdict << '\n';
        written.push_back((dir / "verdict.txt").string());
    }
    for (size_t i = 0; i < rep.pooled.size(); ++i) {
        const std::string p = (dir / ("measure_" + std::to_string(i) + ".csv")).string();
        write_histogram_csv(rep.pooled[i], p);
        written.push_back(p);
    }
    return written;
}

std::vector<std::string> emit_count(const CountReport& rep, const ExperimentConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::vector<std::string> written;
    {
        auto f = open_out(dir / "count.csv");
        f << "epsilon,l\n";
        for (const auto& r : rep.rows)
            f << format_float(r.epsilon) << ',' << r.l << '\n';
        written.push_back((dir / "count.csv").string());
    }
    {
        auto f = open_out(dir / "count_l.dat");
        for (const auto& r : rep.rows)
            f << format_float(r.epsilon) << ' ' << r.l << '\n';
        written.push_back((dir / "count_l.dat").string());
    }
    return written;
}

std::vector<std::string> emit_tail(const TailReport& rep, const ExperimentConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::vector<std::string> written;
    {
        auto f = open_out(dir / "tail.csv");
        f << "epsilon,k,count,p_gt_k\n";
        for (const auto& prof : rep.profiles)
            for (int k = 1; k <= prof.n_max; ++k)
                f << format_float(prof.epsilon) << ',' << k << ','
                  << prof.counts[static_cast<size_t>(k)] << ','
                  << format_float(prof.survival(k)) << '\n';
        written.push_back((dir / "tail.csv").string());
    }
    for (size_t i = 0; i < rep.profiles.size(); ++i) {
        const auto& prof = rep.profiles[i];
        const fs::path p = dir / ("tail_survival_" + std::to_string(i) + ".dat");
        auto f = open_out(p);
        for (int k = 0; k <= prof.n_max; ++k)
            f << k << ' ' << format_float(prof.survival(k)) << '\n';
        written.push_back(p.string());
    }
    {
        auto f = open_out(dir / "tail_summary.csv");
        f << "epsilon,tau_fit,tail_statistic\n";
        for (size_t i = 0; i < rep.profiles.size(); ++i)
            f << format_float(rep.profiles[i].epsilon) << ',' << format_float(rep.taus[i]) << ','
              << format_float(rep.statistics[i]) << '\n';
        written.push_back((dir / "tail_summary.csv").string());
    }
    return written;
}

std::vector<std::string> emit_viana_diag(const VianaDiagReport& rep,
                                         const ExperimentConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::vector<std::string> written;
    {
        auto f = open_out(dir / "depth_stats.csv");
        f << "sample,n,g_sum,deep_return_flag\n";
        for (const auto& r : rep.depth_rows)
            f << r.sample << ',' << r.n << ',' << r.g_sum << ',' << (r.deep_return ? 1 : 0)
              << '\n';
        written.push_back((dir / "depth_stats.csv").string());
    }
    {
        auto f = open_out(dir / "foliation.csv");
        f << "s_index,x_index,xi_value\n";
        const auto& field = rep.foliation.field;
        for (int is = 0; is < field.ns; ++is)
            for (int ix = 0; ix < field.nx; ++ix)
                f << is << ',' << ix << ',' << format_float(field.at(is, ix)) << '\n';
        written.push_back((dir / "foliation.csv").string());
    }
    {
        auto f = open_out(dir / "diag_summary.csv");
        f << "seed_index,expansion_average,recurrence_average\n";
        for (size_t s = 0; s < rep.expansion_averages.size(); ++s)
            f << s << ',' << format_float(rep.expansion_averages[s]) << ','
              << format_float(rep.recurrence_averages[s]) << '\n';
        written.push_back((dir / "diag_summary.csv").string());
    }
    return written;
}

std::vector<std::string> emit_orbit(const OrbitTrace& trace, const ExperimentConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::vector<std::string> written;
    auto f = open_out(dir / "orbit.csv");
    const bool twod = !trace.states.empty() && trace.states[0].dim == 2;
    f << (twod ? "step,coord1,coord2,log_inv_norm,log_trunc_dist\n"
               : "step,coord1,log_inv_norm,log_trunc_dist\n");
    for (int j = 0; j < trace.steps(); ++j) {
        const State& z = trace.states[static_cast<size_t>(j)];
        f << j << ',' << format_float(z.x());
        if (twod) f << ',' << format_float(z.y());
        f << ',' << format_float(trace.log_inv_norms[static_cast<size_t>(j)]);
        f << ','
          << (trace.delta ? format_float(trace.log_trunc_dists[static_cast<size_t>(j)])
                          : std::string("nan"));
        f << '\n';
    }
    written.push_back((dir / "orbit.csv").string());
    return written;
}

std::string write_manifest(const ExperimentConfig& cfg, const std::string& command,
                           double wall_seconds) {
    const fs::path dir(cfg.out_dir);
    auto f = open_out(dir / "manifest.txt");
    f << "command: " << command << '\n';
    f << "version: nuelab 0.1.0\n";
    f << "seed: " << cfg.seed << " (all worker streams derive deterministically from it)\n";
    f << "system.name: " << cfg.system_name << '\n';
    for (const auto& [k, v] : cfg.system_params)
        f << "system." << k << ": " << format_float(v) << '\n';
    f << "kernel.mode: "
      << (cfg.kernel_mode == NoiseKernel::Mode::Additive ? "additive" : "rotational") << '\n';
    f << "kernel.epsilons:";
    for (double e : cfg.epsilons) f << ' ' << format_float(e);
    f << '\n';
    f << "hyp.alpha: " << format_float(cfg.hyp_alpha) << '\n';
    f << "hyp.delta: " << format_float(cfg.hyp_delta) << '\n';
    f << "thresholds: c=" << format_float(cfg.expansion_c)
      << " gamma=" << format_float(cfg.recurrence_gamma)
      << " merge=" << format_float(cfg.cluster_merge)
      << " stability=" << format_float(cfg.stability_tol) << '\n';
    f << "budgets: orbit_len=" << cfg.orbit_len << " samples=" << cfg.samples
      << " starts=" << cfg.starts << " n_max=" << cfg.n_max << " bins=" << cfg.bins
      << " tail_cutoff=" << cfg.tail_cutoff << '\n';
    f << "wall_seconds: " << format_float(wall_seconds) << '\n';
    return (dir / "manifest.txt").string();
}

} // namespace nuelab
