#include <doctest.h>

#include <cmath>

#include "nuelab/viana.hpp"

using namespace nuelab;

namespace {

double q_iter(double a, int k) {
    double x = 0.0;
    for (int i = 0; i < k; ++i) x = a - x * x;
    return x;
}

} // namespace

TEST_SUITE("viana_lab") {

TEST_CASE("boundary anchor of the fixed-point equation at a = 2") {
    // Q_2(0) = 2, Q_2^2(0) = -2, and the negative fixed point at a = 2 is
    // (-1 - sqrt(9))/2 = -2; the boundary case is excluded from the open
    // interval, and for a < 2 the critical orbit stays inside [a - a^2, a],
    // strictly above that fixed point.
    CHECK(q_iter(2.0, 1) == 2.0);
    CHECK(q_iter(2.0, 2) == -2.0);
    CHECK((-1.0 - std::sqrt(1.0 + 4.0 * 2.0)) / 2.0 == -2.0);
    for (double a : {1.2, 1.5, 1.8, 1.99}) {
        const double pm = (-1.0 - std::sqrt(1.0 + 4.0 * a)) / 2.0;
        CHECK(a - a * a > pm); // the orbit's floor is above the negative fixed point
    }
}

TEST_CASE("misiurewicz parameter search lands on a pre-periodic orbit") {
    const double tol = 1e-12;
    const auto res = find_misiurewicz_a0(8, tol);
    CHECK(res.a0 > 1.0);
    CHECK(res.a0 < 2.0);
    CHECK(res.k == 3);

    const double p_plus = (-1.0 + std::sqrt(1.0 + 4.0 * res.a0)) / 2.0;
    CHECK(std::abs(q_iter(res.a0, res.k) - p_plus) < tol);
    // the critical orbit then stays numerically on the fixed point
    for (int m = 1; m <= 5; ++m)
        CHECK(std::abs(q_iter(res.a0, res.k + m) - p_plus) < 10.0 * tol);

    CHECK_THROWS_AS(find_misiurewicz_a0(1, tol), InvalidParams);
}

TEST_CASE("central expansion averages of constant-|x| traces") {
    OrbitTrace tr;
    tr.states.assign(11, state2(0.0, 0.5));
    tr.log_inv_norms.assign(10, std::log(1.0 / (2.0 * 0.5)));
    CHECK(central_expansion_average(tr) == doctest::Approx(0.0));
    tr.log_inv_norms.assign(10, std::log(1.0 / 2.0));
    CHECK(central_expansion_average(tr) == doctest::Approx(-std::log(2.0)));
}

TEST_CASE("return depths follow the annulus convention") {
    const double alpha = 0.01;
    OrbitTrace tr;
    auto push = [&](double x) {
        tr.states.push_back(state2(0.0, x));
        tr.log_inv_norms.push_back(0.0);
    };
    push(std::exp(-3.5)); // depth 4
    push(0.25);           // above sqrt(alpha) = 0.1: depth 0
    push(0.05);           // -log = 3.0 exactly: depth 3
    tr.states.push_back(state2(0.0, 0.5));

    const auto rd = return_depths(tr, alpha, 0.1);
    REQUIRE(rd.depths.size() == 3);
    CHECK(rd.depths[0] == 4);
    CHECK(rd.depths[1] == 0);
    CHECK(rd.depths[2] == 3);
    // threshold (1/2 - 0.2) log(100) = 1.38: both returns are in G
    CHECK(rd.g_set == std::vector<int>{0, 2});
    CHECK(rd.g_sum == 7);
}

TEST_CASE("return depths match an exhaustive annulus scan") {
    const double alpha = 0.01;
    const double sqrt_alpha = std::sqrt(alpha);
    CounterRng rng(77, 0);
    OrbitTrace tr;
    for (int i = 0; i < 10000; ++i) {
        const double x = -1.8 + 3.6 * rng.next_unit();
        tr.states.push_back(state2(0.0, x));
        tr.log_inv_norms.push_back(0.0);
    }
    tr.states.push_back(state2(0.0, 0.5));
    const auto rd = return_depths(tr, alpha, 0.1);
    for (int j = 0; j < 10000; ++j) {
        const double ax = std::abs(tr.states[static_cast<size_t>(j)].y());
        int expected = 0;
        if (ax < sqrt_alpha) {
            // scan for the smallest annulus index r with |x| >= e^{-r}
            int r = 0;
            while (r <= 200 && ax < std::exp(-static_cast<double>(r))) ++r;
            expected = r;
        }
        CHECK(rd.depths[static_cast<size_t>(j)] == expected);
    }
}

TEST_CASE("g set is empty when the orbit stays away from the critical strip") {
    OrbitTrace tr;
    for (int i = 0; i < 50; ++i) {
        tr.states.push_back(state2(0.1 * i, 0.5 + 0.001 * i));
        tr.log_inv_norms.push_back(0.0);
    }
    tr.states.push_back(state2(0.0, 0.5));
    const auto rd = return_depths(tr, 0.01, 0.1);
    CHECK(rd.g_set.empty());
    CHECK(rd.g_sum == 0);
    for (int d : rd.depths) CHECK(d == 0);
}

TEST_CASE("deep return fraction is zero for unreachable depths and decays in n") {
    auto sys = build_system("viana");
    const auto kernel = NoiseKernel::additive(1e-3, 2);
    // e^{-31} is far below any state the sampler can produce in 1000 steps
    const double f = deep_return_fraction(sys, kernel, 1000, 500, 3);
    CHECK(f == 0.0);

    std::vector<double> meds;
    for (int n : {100, 400, 900}) {
        std::vector<double> fs;
        for (uint64_t s = 1; s <= 3; ++s)
            fs.push_back(deep_return_fraction(sys, kernel, n, 1500, s));
        std::sort(fs.begin(), fs.end());
        meds.push_back(fs[1]);
    }
    CHECK(meds[0] >= meds[1]);
    CHECK(meds[1] >= meds[2]);
}

TEST_CASE("expansion deficit fraction vanishes for huge gamma") {
    auto sys = build_system("viana");
    const auto& info = viana_info(*sys);
    const auto kernel = NoiseKernel::additive(1e-3, 2);
    const double huge = 10.0 * std::log(1.0 / info.alpha_skew);
    CHECK(expansion_deficit_fraction(sys, kernel, 200, huge, 400, 5) == 0.0);
    CHECK_THROWS_AS(expansion_deficit_fraction(sys, kernel, 200, -1.0, 10, 5), InvalidParams);
}

TEST_CASE("expansion deficit fraction decays with n") {
    auto sys = build_system("viana");
    const auto kernel = NoiseKernel::additive(1e-3, 2);
    // gamma above the long-run mean of g_sum / n puts the event in the
    // large-deviation regime where its probability falls with n
    const double gamma = 0.35;
    std::vector<double> fs;
    for (int n : {200, 400, 800})
        fs.push_back(expansion_deficit_fraction(sys, kernel, n, gamma, 2000, 9));
    CHECK(fs[0] >= fs[1]);
    CHECK(fs[1] >= fs[2]);
    // continuity in epsilon at fixed n
    const double f0 = expansion_deficit_fraction(sys, NoiseKernel::additive(0.0, 2), 200,
                                                 gamma, 2000, 9);
    const double f1 = expansion_deficit_fraction(sys, NoiseKernel::additive(1e-4, 2), 200,
                                                 gamma, 2000, 9);
    CHECK(std::abs(f0 - f1) < 0.05);
}

TEST_CASE("foliation transform stays inside the unit band and contracts") {
    auto sys = build_system("viana");
    FoliationField zero = FoliationField::zeros(64, 32);
    const auto once = foliation_apply(zero, sys, {});
    CHECK(once.sup_norm() == 0.0); // skew products have vertical fibers

    // the graph transform stays strictly inside the unit band:
    // |A xi| <= (|d_x q| + ...)/(d - ...) < 1 on all cells
    CounterRng rng(15, 0);
    for (int rep = 0; rep < 20; ++rep) {
        FoliationField f = FoliationField::zeros(64, 32);
        for (auto& v : f.values) v = rng.next_sym();
        const auto g = foliation_apply(f, sys, {});
        CHECK(g.sup_norm() < 1.0);
        CHECK(g.sup_norm() < (4.0 + 0.02) / (16.0 - 0.1));
    }

    // measured Lipschitz constant under 0.5 + 0.05 slack
    double lip = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        FoliationField a = FoliationField::zeros(64, 32);
        FoliationField b = FoliationField::zeros(64, 32);
        for (size_t i = 0; i < a.values.size(); ++i) {
            a.values[i] = rng.next_sym();
            b.values[i] = rng.next_sym();
        }
        const double before = sup_diff(a, b);
        const double after = sup_diff(foliation_apply(a, sys, {}), foliation_apply(b, sys, {}));
        if (before > 0) lip = std::max(lip, after / before);
    }
    CHECK(lip < 0.55);
}

TEST_CASE("foliation fixed point converges quickly to the vertical field") {
    auto sys = build_system("viana");
    const double tol = 1e-10;
    const auto res = foliation_fixed_point(sys, 128, 64, tol, 64);
    CHECK(res.iterations <= static_cast<int>(std::ceil(std::log(1.0 / tol) / std::log(2.0))) + 2);
    const auto& info = viana_info(*sys);
    CHECK(res.field.sup_norm() <= 10.0 * info.alpha_skew);
    CHECK(res.residual < 2.0 * tol);

    // starting from a random field also converges, at a measured rate
    CounterRng rng(8, 0);
    FoliationField start = FoliationField::zeros(128, 64);
    for (auto& v : start.values) v = rng.next_sym();
    const auto res2 = foliation_fixed_point(sys, 128, 64, tol, 64, start);
    CHECK(res2.field.sup_norm() <= 10.0 * info.alpha_skew);
    for (size_t i = 1; i < res2.step_changes.size(); ++i)
        if (res2.step_changes[i - 1] > 1e-12)
            CHECK(res2.step_changes[i] / res2.step_changes[i - 1] < 0.55);

    // noise-averaged version stays near the deterministic fixed point
    const auto kernel = NoiseKernel::additive(1e-3, 2);
    const auto res3 = foliation_fixed_point(sys, 64, 32, 1e-8, 64, std::nullopt, &kernel, 4,
                                            20, 99);
    CHECK(res3.field.sup_norm() <= 10.0 * info.alpha_skew);
    CHECK(res3.field.horizon == 20);

    CHECK_THROWS_AS(foliation_fixed_point(sys, 64, 32, 1e-10, 0), MaxItersExceeded);
}

TEST_CASE("slow recurrence and central expansion on random viana orbits") {
    auto sys = build_system("viana");
    const auto& info = viana_info(*sys);
    const auto kernel = NoiseKernel::additive(1e-3, 2);
    const double delta = std::pow(info.alpha_skew, 0.5 - 2.0 * info.eta_exponent);

    int expansion_ok = 0;
    const int orbits = 40;
    for (uint64_t s = 0; s < orbits; ++s) {
        CounterRng rng(1000 + s, 0);
        State x0 = sys->domain().sample_uniform(rng);
        while (sys->critical_distance(x0).value_or(1.0) < 1e-9)
            x0 = sys->domain().sample_uniform(rng);
        double sum_exp = 0.0;
        const int n = 20000;
        stream_orbit(sys, kernel, x0, n, 1000 + s, 1, [&](int, const State& z) {
            sum_exp += std::log(sys->inv_tangent_norm(z));
        });
        if (sum_exp / n <= -0.01) ++expansion_ok;
    }
    // non-uniform expansion is comfortably visible at this horizon
    CHECK(expansion_ok >= orbits * 95 / 100);

    // the recurrence average concentrates near its ergodic mean
    double sum_rec = 0.0;
    const int n = 100000;
    stream_orbit(sys, kernel, state2(0.37, 0.21), n, 5, 2, [&](int, const State& z) {
        sum_rec -= std::log(sys->truncated_distance(z, delta));
    });
    const double rec = sum_rec / n;
    CHECK(rec > 0.0);
    CHECK(rec < 1.0);
}

} // TEST_SUITE
