#include <doctest.h>

#include <cmath>
#include <vector>

#include "nuelab/hyperbolic.hpp"

using namespace nuelab;

namespace {

// O(N^2) oracle straight from the partial-sum definition
std::vector<int> pliss_brute(const std::vector<double>& a, double c1) {
    std::vector<int> out;
    const int n = static_cast<int>(a.size());
    for (int i = 1; i <= n; ++i) {
        bool ok = true;
        for (int lo = 0; lo < i && ok; ++lo) {
            double s = 0.0;
            for (int j = lo + 1; j <= i; ++j) s += a[static_cast<size_t>(j - 1)];
            if (s < c1 * (i - lo)) ok = false;
        }
        if (ok) out.push_back(i);
    }
    return out;
}

// double-loop oracle for the (alpha, delta)-hyperbolic-time conditions
std::vector<int> hyp_brute(const OrbitTrace& tr, double alpha, std::optional<double> b) {
    std::vector<int> out;
    const int n = tr.steps();
    const double la = std::log(alpha);
    for (int t = 1; t <= n; ++t) {
        bool ok = true;
        for (int k = 1; k <= t && ok; ++k) {
            double s = 0.0;
            for (int j = t - k; j <= t - 1; ++j) s += tr.log_inv_norms[static_cast<size_t>(j)];
            if (s > k * la) ok = false;
            if (ok && b && tr.log_trunc_dists[static_cast<size_t>(t - k)] < *b * k * la)
                ok = false;
        }
        if (ok) out.push_back(t);
    }
    return out;
}

OrbitTrace trace_from_logs(const std::vector<double>& log_inv,
                           const std::vector<double>& log_dist = {}) {
    OrbitTrace tr;
    tr.log_inv_norms = log_inv;
    tr.log_trunc_dists = log_dist;
    if (!log_dist.empty()) tr.delta = 0.1;
    tr.states.assign(log_inv.size() + 1, state1(0.0));
    return tr;
}

} // namespace

TEST_SUITE("hyperbolic_times") {

TEST_CASE("pliss examples from first principles") {
    const PlissParams p(0.5, 1.0, 2.0);
    CHECK(p.zeta() == doctest::Approx(1.0 / 3.0));

    const std::vector<double> ones{1.0, 1.0, 1.0, 1.0};
    CHECK(pliss_select(ones, p) == std::vector<int>{1, 2, 3, 4});

    const std::vector<double> alt{2.0, 0.0, 2.0, 0.0, 2.0, 0.0};
    CHECK(pliss_select(alt, p) == std::vector<int>{1, 3, 5});
    CHECK(pliss_select(alt, p) == pliss_brute(alt, 0.5));

    const std::vector<double> zeros{0.0, 0.0, 0.0};
    CHECK_THROWS_AS(pliss_select(zeros, p), HypothesisViolated);
    CHECK(pliss_select(zeros, p, true).empty());

    const std::vector<double> too_big{3.0, 1.0, 1.0};
    CHECK_THROWS_AS(pliss_select(too_big, p), HypothesisViolated);

    CHECK_THROWS_AS(PlissParams(1.0, 0.5, 2.0), InvalidParams);
    CHECK_THROWS_AS(PlissParams(-0.5, 1.0, 2.0), InvalidParams);
}

TEST_CASE("pliss scan matches the quadratic oracle on random hypotheses") {
    CounterRng rng(4242, 0);
    int done = 0;
    while (done < 1000) {
        const int n = 2 + static_cast<int>(rng.next_unit() * 49);
        const double H = 2.0;
        const double c2 = 0.4 + rng.next_unit();       // in [0.4, 1.4]
        const double c1 = 0.05 + rng.next_unit() * (c2 - 0.1); // below c2
        if (!(H >= c2 && c2 > c1 && c1 > 0)) continue;
        std::vector<double> a(static_cast<size_t>(n));
        const double lo = 2.0 * c2 - H; // mean c2 keeps acceptance likely
        double sum = 0.0;
        for (auto& v : a) {
            v = lo + (H - lo) * rng.next_unit();
            sum += v;
        }
        if (sum < c2 * n) continue;

        const PlissParams p(c1, c2, H);
        const auto fast = pliss_select(a, p);
        CHECK(fast == pliss_brute(a, c1));
        CHECK(static_cast<double>(fast.size()) > p.zeta() * n);
        ++done;
    }
}

TEST_CASE("doubling traces are hyperbolic at every time for alpha above 1/2") {
    auto sys = build_system("doubling");
    const auto tr = random_orbit(sys, NoiseKernel::additive(0.0, 1), state1(0.3), 40,
                                 std::nullopt, 1, 0);
    const auto rec6 = hyperbolic_times_diffeo(tr, 0.6);
    REQUIRE(rec6.first.has_value());
    CHECK(*rec6.first == 1);
    CHECK(rec6.times.size() == 40);

    const auto rec4 = hyperbolic_times_diffeo(tr, 0.4);
    CHECK(rec4.times.empty());
    CHECK_FALSE(rec4.first.has_value());
}

TEST_CASE("alternating norms match the double-loop oracle") {
    std::vector<double> logs;
    for (int i = 0; i < 30; ++i) logs.push_back(i % 2 == 0 ? std::log(0.5) : std::log(2.0));
    const auto tr = trace_from_logs(logs);
    const auto rec = hyperbolic_times_diffeo(tr, 0.95);
    CHECK(rec.times == hyp_brute(tr, 0.95, std::nullopt));
    // only odd times survive: every even time has a bad k = 1 window
    for (int t : rec.times) CHECK(t % 2 == 1);
    CHECK(!rec.times.empty());
}

TEST_CASE("diffeo detector equals pliss selection on negated logs") {
    CounterRng rng(99, 1);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 5 + static_cast<int>(rng.next_unit() * 40);
        std::vector<double> logs(static_cast<size_t>(n));
        for (auto& v : logs) v = -1.5 + 3.0 * rng.next_unit();
        const double alpha = 0.3 + 0.6 * rng.next_unit();
        const auto tr = trace_from_logs(logs);
        const auto rec = hyperbolic_times_diffeo(tr, alpha);

        std::vector<double> negated(logs.size());
        for (size_t i = 0; i < logs.size(); ++i) negated[i] = -logs[i];
        const double c1 = -std::log(alpha);
        const auto plissed = pliss_select(negated, PlissParams(c1, c1 + 1.0, 1e9), true);
        CHECK(rec.times == plissed);
    }
}

TEST_CASE("critical detector enforces the recurrence condition") {
    // all states far from C reduces to the diffeo condition
    std::vector<double> logs(20, std::log(0.5));
    std::vector<double> dists(20, 0.0); // log dist_delta = 0, i.e. dist >= delta
    auto tr = trace_from_logs(logs, dists);
    const HypParams hp(0.6, 0.1, 0.25);
    const auto rec = hyperbolic_times_critical(tr, hp);
    CHECK(rec.times == hyperbolic_times_diffeo(tr, 0.6).times);

    // a state too close to C at index n-1 kills time n via the k = 1 window
    auto tr2 = trace_from_logs(logs, dists);
    tr2.log_trunc_dists[9] = 2.0 * hp.b_exponent * std::log(hp.alpha_hyp); // alpha^{2b} < alpha^{b}
    const auto rec2 = hyperbolic_times_critical(tr2, hp);
    for (int t : rec2.times) CHECK(t != 10);
    CHECK(rec2.times == hyp_brute(tr2, 0.6, hp.b_exponent));

    // delta mismatch is rejected
    tr2.delta = 0.2;
    CHECK_THROWS_AS(hyperbolic_times_critical(tr2, hp), DeltaMismatch);
}

TEST_CASE("critical detector matches the oracle on random viana traces") {
    auto sys = build_system("viana");
    const HypParams hp(0.7, 0.25, sys->constants().b_exponent);
    const auto kernel = NoiseKernel::additive(1e-3, 2);
    for (int rep = 0; rep < 20; ++rep) {
        CounterRng rng(17, static_cast<uint64_t>(rep));
        State x0 = sys->domain().sample_uniform(rng);
        while (sys->critical_distance(x0).value_or(1.0) < 1e-9)
            x0 = sys->domain().sample_uniform(rng);
        const auto tr = random_orbit(sys, kernel, x0, 300, hp.delta, 23,
                                     static_cast<uint64_t>(rep));
        const auto rec = hyperbolic_times_critical(tr, hp);
        CHECK(rec.times == hyp_brute(tr, hp.alpha_hyp, hp.b_exponent));
        if (!rec.times.empty()) {
            REQUIRE(rec.first.has_value());
            CHECK(*rec.first == rec.times.front());
            CHECK(*first_hyperbolic_time(tr, hp, true) == *rec.first);
        }
    }
}

TEST_CASE("hyperbolic sets grow with alpha") {
    CounterRng rng(7, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 10 + static_cast<int>(rng.next_unit() * 30);
        std::vector<double> logs(static_cast<size_t>(n));
        for (auto& v : logs) v = -1.0 + 2.0 * rng.next_unit();
        const auto tr = trace_from_logs(logs);
        const auto small = hyperbolic_times_diffeo(tr, 0.5).times;
        const auto big = hyperbolic_times_diffeo(tr, 0.8).times;
        for (int t : small) CHECK(std::find(big.begin(), big.end(), t) != big.end());
    }
}

TEST_CASE("tail profile of the doubling map concentrates at one") {
    auto sys = build_system("doubling");
    const HypParams hp(0.6, 0.1, 0.25);
    const auto prof = tail_profile(sys, NoiseKernel::additive(0.05, 1), hp, 2000, 10, 31);
    CHECK(prof.counts[1] == 2000);
    CHECK(prof.censored == 0);
    CHECK(prof.survival(0) == 1.0);
    CHECK(prof.survival(1) == 0.0);
    CHECK(tail_statistic(prof, 2) == 0.0);
    CHECK(uniform_tail_statistic({prof}, 2) == 0.0);
}

TEST_CASE("tail profile epsilon zero equals the deterministic tail") {
    auto sys = build_system("torus");
    const HypParams hp(0.5, 0.1, 0.25);
    const auto a = tail_profile(sys, NoiseKernel::additive(0.0, 2), hp, 500, 30, 12);
    const auto b = tail_profile(sys, NoiseKernel::additive(0.0, 2), hp, 500, 30, 12);
    CHECK(a.counts == b.counts); // deterministic given the seed
    int64_t total = a.censored;
    for (auto c : a.counts) total += c;
    CHECK(total == a.sample_size);
}

TEST_CASE("censoring consistency under a longer horizon") {
    auto sys = build_system("torus");
    const HypParams hp(0.45, 0.1, 0.25);
    const auto kernel = NoiseKernel::additive(0.005, 2);
    const auto short_prof = tail_profile(sys, kernel, hp, 1500, 20, 77);
    const auto long_prof = tail_profile(sys, kernel, hp, 1500, 40, 77);
    // same seeds: P(h <= k) can only grow when the horizon grows
    for (int k = 1; k <= 20; ++k) {
        double ps = 0, pl = 0;
        for (int j = 1; j <= k; ++j) {
            ps += short_prof.p_at(j);
            pl += long_prof.p_at(j);
        }
        CHECK(pl >= ps - 1e-12);
    }
}

TEST_CASE("uniform tail statistic of a synthetic geometric profile") {
    // counts 2^{20-k} for k = 1..20 leave exactly one censored sample, so
    // P(h = k) = 2^{-k} and the censored fraction is 2^{-20}
    TailProfile prof;
    prof.epsilon = 0.1;
    prof.n_max = 20;
    prof.sample_size = 1 << 20;
    prof.counts.assign(21, 0);
    for (int k = 1; k <= 20; ++k) prof.counts[static_cast<size_t>(k)] = 1ll << (20 - k);
    int64_t assigned = 0;
    for (auto c : prof.counts) assigned += c;
    prof.censored = prof.sample_size - assigned;
    CHECK(prof.censored == 1);

    double expected = 0.0;
    for (int k = 3; k <= 20; ++k) expected += k * std::pow(2.0, -k);
    expected += 20.0 * std::pow(2.0, -20);
    CHECK(tail_statistic(prof, 3) == doctest::Approx(expected).epsilon(1e-15));
    CHECK_THROWS_AS(tail_statistic(prof, 21), InsufficientHorizon);

    const double tau = fit_geometric_tail(prof);
    CHECK(tau == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("torus tails decay geometrically") {
    auto sys = build_system("torus");
    const HypParams hp(0.5, 0.1, 0.25);
    const auto prof = tail_profile(sys, NoiseKernel::additive(0.01, 2), hp, 4000, 60, 5);
    const double tau = fit_geometric_tail(prof);
    CHECK(tau < 1.0);
    CHECK(tau > 0.0);
    CHECK(static_cast<double>(prof.censored) / prof.sample_size < 0.01);
}

TEST_CASE("torus orbits spend a positive fraction outside the bump") {
    auto sys = build_system("torus");
    const auto kernel = NoiseKernel::additive(0.005, 2);
    int good = 0;
    const int orbits = 200;
    for (int s = 0; s < orbits; ++s) {
        CounterRng rng(900, static_cast<uint64_t>(s));
        const auto tr = random_orbit(sys, kernel, sys->domain().sample_uniform(rng), 10000,
                                     std::nullopt, 900, static_cast<uint64_t>(s));
        const double freq =
            visit_frequency(tr, [&](const State& z) { return !torus_in_bump(*sys, z); });
        if (freq > 0.5) ++good;
    }
    CHECK(good >= orbits * 99 / 100);
}

} // TEST_SUITE
