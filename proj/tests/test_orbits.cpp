#include <doctest.h>

#include <cmath>

#include "nuelab/orbit.hpp"

using namespace nuelab;

TEST_SUITE("random_orbits") {

TEST_CASE("zero noise reproduces the deterministic orbit") {
    auto sys = build_system("doubling");
    const auto kernel = NoiseKernel::additive(0.0, 1);
    const auto seq = sample_noise(kernel, 5, 9, 2);
    for (const auto& e : seq.entries) CHECK(e[0] == 0.0);

    const auto tr = random_orbit(sys, kernel, state1(0.3), 3, std::nullopt, 1, 0);
    REQUIRE(tr.states.size() == 4);
    CHECK(tr.states[0].x() == doctest::Approx(0.3));
    CHECK(tr.states[1].x() == doctest::Approx(0.6));
    CHECK(tr.states[2].x() == doctest::Approx(0.2));
    CHECK(tr.states[3].x() == doctest::Approx(0.4));
    for (double v : tr.log_inv_norms) CHECK(v == doctest::Approx(std::log(0.5)));
}

TEST_CASE("n = 0 gives a single state and empty records") {
    auto sys = build_system("doubling");
    const auto tr = random_orbit(sys, NoiseKernel::additive(0.01, 1), state1(0.5), 0,
                                 std::nullopt, 1, 0);
    CHECK(tr.states.size() == 1);
    CHECK(tr.log_inv_norms.empty());
}

TEST_CASE("noise sequences are reproducible and bounded") {
    const auto kernel = NoiseKernel::additive(0.1, 1);
    const auto a = sample_noise(kernel, 1000, 42, 7);
    const auto b = sample_noise(kernel, 1000, 42, 7);
    REQUIRE(a.entries.size() == b.entries.size());
    for (size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i][0] == b.entries[i][0]);
    const auto c = sample_noise(kernel, 1000, 42, 8);
    int differing = 0;
    for (size_t i = 0; i < c.entries.size(); ++i)
        if (c.entries[i][0] != a.entries[i][0]) ++differing;
    CHECK(differing > 990);
    for (const auto& e : a.entries) CHECK(std::abs(e[0]) <= 0.1);
}

TEST_CASE("uniform draws have the right mean at Monte Carlo accuracy") {
    const auto kernel = NoiseKernel::additive(0.1, 1);
    const int n = 100000;
    const auto seq = sample_noise(kernel, n, 2024, 0);
    double mean = 0.0;
    for (const auto& e : seq.entries) mean += e[0];
    mean /= n;
    // uniform on [-eps, eps]: sd of the mean is eps / sqrt(3 n)
    CHECK(std::abs(mean) < 3.0 * 0.1 / std::sqrt(3.0 * n));
}

TEST_CASE("support nesting: scaling epsilon scales the draws exactly") {
    const auto k1 = NoiseKernel::additive(0.1, 1);
    const auto k2 = NoiseKernel::additive(0.05, 1);
    const auto a = sample_noise(k1, 200, 5, 1);
    const auto b = sample_noise(k2, 200, 5, 1);
    for (size_t i = 0; i < a.entries.size(); ++i)
        CHECK(b.entries[i][0] == doctest::Approx(0.5 * a.entries[i][0]).epsilon(1e-15));
}

TEST_CASE("two dimensional draws stay in the disk") {
    const auto kernel = NoiseKernel::additive(0.02, 2);
    const auto seq = sample_noise(kernel, 5000, 11, 3);
    double max_norm = 0.0;
    for (const auto& e : seq.entries) max_norm = std::max(max_norm, std::hypot(e[0], e[1]));
    CHECK(max_norm <= 0.02);
    CHECK(max_norm > 0.015); // the ball is actually filled
}

TEST_CASE("rotational step on fig1 wraps through the glue point") {
    auto sys = build_system("fig1");
    const auto kernel = NoiseKernel::rotational(0.2);
    // eval(0) = 1 which is the glue point -3; rotating by 0.1 lands at -2.9
    const State y = perturbed_step(*sys, kernel, {0.1, 0.0}, state1(0.0));
    CHECK(y.x() == doctest::Approx(-2.9));
    const State z = perturbed_step(*sys, kernel, {0.0, 0.0}, state1(0.25));
    CHECK(z.x() == doctest::Approx(sys->eval(state1(0.25)).x()));
}

TEST_CASE("additive noise on an interval requires a margin") {
    auto sys = build_system("fig2");
    const auto big = NoiseKernel::additive(1.0, 1); // margin is ~0.456
    CHECK_THROWS_AS(perturbed_step(*sys, big, {0.9, 0.0}, state1(0.1)), NoiseExceedsMargin);
    CHECK_THROWS_AS(random_orbit(sys, big, state1(0.1), 10, std::nullopt, 1, 0),
                    NoiseExceedsMargin);
    const auto ok = NoiseKernel::additive(0.01, 1);
    CHECK_NOTHROW(random_orbit(sys, ok, state1(0.1), 1000, std::nullopt, 1, 0));
    // rotational mode needs a circle factor
    CHECK_THROWS_AS(random_orbit(sys, NoiseKernel::rotational(0.01), state1(0.1), 5,
                                 std::nullopt, 1, 0),
                    InvalidParams);
}

TEST_CASE("orbits are reproducible and concatenate through the noise shift") {
    auto sys = build_system("fig1");
    const auto kernel = NoiseKernel::rotational(0.05);
    const auto a = random_orbit(sys, kernel, state1(0.3), 50, 0.05, 77, 4);
    const auto b = random_orbit(sys, kernel, state1(0.3), 50, 0.05, 77, 4);
    REQUIRE(a.states.size() == b.states.size());
    for (size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i].x() == b.states[i].x());

    // replaying the first 20 noise entries, then the remaining 30 from the
    // 20th state, reproduces the full orbit
    NoiseSequence front{std::vector<NoiseParam>(a.noise.entries.begin(),
                                                a.noise.entries.begin() + 20),
                        a.noise.seed, a.noise.stream};
    NoiseSequence back{std::vector<NoiseParam>(a.noise.entries.begin() + 20,
                                               a.noise.entries.end()),
                       a.noise.seed, a.noise.stream};
    const auto first = orbit_with_noise(sys, kernel, state1(0.3), front, 0.05);
    const auto second = orbit_with_noise(sys, kernel, first.states.back(), back, 0.05);
    CHECK(first.states[20].x() == a.states[20].x());
    CHECK(second.states[30].x() == a.states[50].x());
}

TEST_CASE("viana random orbits stay in the invariant cylinder for 1e6 steps") {
    auto sys = build_system("viana");
    const auto kernel = NoiseKernel::additive(1e-3, 2);
    int64_t inside = 0;
    const int64_t n = 1000000;
    stream_orbit(sys, kernel, state2(0.37, 0.21), static_cast<int>(n), 5, 1,
                 [&](int, const State& z) {
                     if (sys->domain().contains(z)) ++inside;
                 });
    CHECK(inside == n);
}

TEST_CASE("zero noise through an exact critical point gets stuck") {
    auto sys = build_system("fig1");
    const auto kernel = NoiseKernel::rotational(0.0);
    // the deterministic fig1 orbit of 0 passes through the critical point 0
    CHECK_THROWS_AS(random_orbit(sys, kernel, state1(0.0), 5, std::nullopt, 1, 0),
                    CriticalOrbitStuck);
    // with noise the draw is resampled instead
    const auto noisy = NoiseKernel::rotational(0.05);
    CHECK_NOTHROW(random_orbit(sys, noisy, state1(0.2), 2000, std::nullopt, 1, 0));
}

TEST_CASE("birkhoff averages of recorded traces") {
    auto sys = build_system("doubling");
    const auto tr = random_orbit(sys, NoiseKernel::additive(0.0, 1), state1(0.3), 100,
                                 std::nullopt, 1, 0);
    CHECK(expansion_average(tr) == doctest::Approx(std::log(0.5)));
    CHECK_THROWS_AS(recurrence_average(tr), DeltaMismatch);
    CHECK(visit_frequency(tr, [](const State&) { return true; }) == 1.0);

    auto fig1 = build_system("fig1");
    const auto tr2 = random_orbit(fig1, NoiseKernel::rotational(0.03), state1(0.3), 500, 0.05,
                                  3, 1);
    // states never within delta of C contribute log 1 = 0
    double manual = 0.0;
    for (int j = 0; j < tr2.steps(); ++j)
        manual -= std::log(fig1->truncated_distance(tr2.states[static_cast<size_t>(j)], 0.05));
    CHECK(recurrence_average(tr2) == doctest::Approx(manual / tr2.steps()));
}

} // TEST_SUITE
