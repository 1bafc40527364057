#include <doctest.h>

#include <cmath>

#include "nuelab/systems.hpp"

using namespace nuelab;

namespace {

// wrap-aware central difference of eval along one input coordinate
std::array<double, 2> central_diff(const MapSystem& sys, const State& x, int coord, double h) {
    State xp = x, xm = x;
    xp.coord[static_cast<size_t>(coord)] += h;
    xm.coord[static_cast<size_t>(coord)] -= h;
    const State fp = sys.eval(sys.domain().wrap(xp));
    const State fm = sys.eval(sys.domain().wrap(xm));
    std::array<double, 2> d{0.0, 0.0};
    for (int o = 0; o < sys.domain().dim(); ++o) {
        double diff;
        const bool wraps = sys.domain().has_circle_factor() &&
                           (o == 0 || sys.domain().kind() == Domain::Kind::Torus2);
        if (wraps)
            diff = sys.domain().circle_diff(fp.coord[static_cast<size_t>(o)],
                                            fm.coord[static_cast<size_t>(o)]);
        else
            diff = fp.coord[static_cast<size_t>(o)] - fm.coord[static_cast<size_t>(o)];
        d[static_cast<size_t>(o)] = diff / (2.0 * h);
    }
    return d;
}

} // namespace

TEST_SUITE("map_catalog") {

TEST_CASE("doubling evaluates 2s mod 1") {
    auto sys = build_system("doubling", {{"factor", 2.0}});
    CHECK(sys->eval(state1(0.3)).x() == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(sys->inv_tangent_norm(state1(0.42)) == doctest::Approx(0.5));
    CHECK(sys->jac_det(state1(0.1)) == doctest::Approx(2.0));
    CHECK_FALSE(sys->critical_distance(state1(0.2)).has_value());
    CHECK(sys->truncated_distance(state1(0.2), 0.1) == 1.0);
}

TEST_CASE("unknown catalog id and bad params are rejected") {
    CHECK_THROWS_AS(build_system("sextupling"), UnknownCatalogId);
    CHECK_THROWS_AS(build_system("doubling", {{"factor", 1.0}}), InvalidParams);
    CHECK_THROWS_AS(build_system("doubling", {{"factorr", 2.0}}), InvalidParams);
    CHECK_THROWS_AS(build_system("viana", {{"d", 8.0}}), InvalidParams);
    CHECK_THROWS_AS(build_system("viana", {{"alpha_skew", -0.1}}), InvalidParams);
}

TEST_CASE("fig1 values from the two arcs") {
    auto sys = build_system("fig1");
    // eval(0) = 1 is the glue point, stored as -3 in the chart [-3, 1)
    CHECK(sys->domain().dist(sys->eval(state1(0.0)), state1(1.0)) < 1e-14);
    CHECK(sys->eval(state1(-2.0)).x() == doctest::Approx(-3.0).epsilon(1e-14));
    // 1 - 2 x^2 at x = 1 gives -1
    CHECK(sys->eval(state1(0.999999999)).x() == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(sys->jac_det(state1(0.0)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(sys->inv_tangent_norm(state1(0.0)), CriticalPoint);
    CHECK(*sys->critical_distance(state1(0.2)) == doctest::Approx(0.2));
    CHECK(*sys->critical_distance(state1(-2.5)) == doctest::Approx(0.5));
}

TEST_CASE("fig1 truncated distance branches") {
    auto sys = build_system("fig1");
    CHECK(sys->truncated_distance(state1(0.5), 0.1) == 1.0);
    CHECK(sys->truncated_distance(state1(0.05), 0.1) == doctest::Approx(0.05));
    // boundary dist = delta falls in the ">= delta" branch
    CHECK(sys->truncated_distance(state1(0.1), 0.1) == 1.0);
}

TEST_CASE("fig1 is continuous and C1 across the glue point -3 == 1") {
    auto sys = build_system("fig1");
    // evaluate both branch formulas at the glue point
    const double from_right = 1.0 - 2.0 * 1.0 * 1.0;        // x -> 1^-
    const double from_left = 2.0 * (-3.0 + 2.0) * (-3.0 + 2.0) - 3.0; // x -> -3^+
    CHECK(std::abs(from_right - from_left) < 1e-10);
    const double d_right = -4.0 * 1.0;
    const double d_left = 4.0 * (-3.0 + 2.0);
    CHECK(std::abs(d_right - d_left) < 1e-10);
    // one-sided evaluations approach the same circle point
    const double h = 1e-7;
    const double a = sys->eval(state1(1.0 - h)).x();
    const double b = sys->eval(state1(-3.0 + h)).x();
    CHECK(std::abs(sys->domain().circle_diff(a, b)) < 1e-5);
}

TEST_CASE("fig2 maps the interval into its interior with a positive margin") {
    auto sys = build_system("fig2");
    CHECK(sys->domain_margin() > 0.3);
    CounterRng rng(7, 0);
    for (int i = 0; i < 20000; ++i) {
        const State x = sys->domain().sample_uniform(rng);
        const State y = sys->eval(x);
        const double to_boundary = std::min(y.x() - (-7.0), 2.0 - y.x());
        CHECK(to_boundary >= sys->domain_margin() - 1e-9);
    }
}

TEST_CASE("fig2 quadratic branch values and critical points") {
    const double a = 1.7;
    auto sys = build_system("fig2", {{"a", a}});
    CHECK(sys->eval(state1(0.0)).x() == doctest::Approx(a));
    CHECK(sys->eval(state1(-5.0)).x() == doctest::Approx(-5.0 - a));
    CHECK(sys->eval(state1(1.0)).x() == doctest::Approx(a - 1.0));
    CHECK_THROWS_AS(sys->inv_tangent_norm(state1(0.0)), CriticalPoint);
    CHECK_THROWS_AS(sys->inv_tangent_norm(state1(-5.0)), CriticalPoint);
    CHECK(*sys->critical_distance(state1(-4.0)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(build_system("fig2", {{"a", 1.02}}), InvalidParams);
    CHECK_THROWS_AS(build_system("fig2", {{"a", 1.97}}), InvalidParams);
}

TEST_CASE("fig2 glue hands its orbits to the parabola pieces") {
    auto sys = build_system("fig2");
    // the junction values -1-a and a-4 lie inside (-3, -2), so the glue has
    // a diagonal crossing; it must repel and orbits must leave the strip
    int stuck = 0;
    for (int i = 0; i < 500; ++i) {
        double x = -3.0 + (i + 0.5) / 500.0;
        bool escaped = false;
        for (int it = 0; it < 300 && !escaped; ++it) {
            x = sys->eval(state1(x)).x();
            escaped = x <= -3.0 || x >= -2.0;
        }
        if (!escaped) ++stuck;
    }
    CHECK(stuck <= 2);
    // C^1 at both junctions
    CHECK(sys->tangent(state1(-3.0 + 1e-9))[0] == doctest::Approx(4.0).epsilon(1e-5));
    CHECK(sys->tangent(state1(-2.0 - 1e-9))[0] == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("fig2 trapping regions are mapped into themselves") {
    auto sys = build_system("fig2");
    const auto regions = fig2_trapping_regions(*sys);
    REQUIRE(regions.size() == 2);
    for (const auto& t : regions) {
        CHECK(t.margin > 0.01);
        for (int i = 0; i <= 5000; ++i) {
            const double x = t.lo + (t.hi - t.lo) * i / 5000.0;
            const double y = sys->eval(state1(x)).x();
            CHECK(y >= t.lo + t.margin - 1e-9);
            CHECK(y <= t.hi - t.margin + 1e-9);
        }
    }
}

TEST_CASE("viana evaluates the skew product") {
    auto sys = build_system("viana", {{"d", 16.0}, {"alpha_skew", 0.01}});
    const auto& info = viana_info(*sys);
    // b(0) = 0, so the image of (0, 0) is (0, a0)
    const State y = sys->eval(state2(0.0, 0.0));
    CHECK(y.x() == doctest::Approx(0.0));
    CHECK(y.y() == doctest::Approx(info.a0));
    // 16 * 0.25 mod 1 = 0
    CHECK(sys->eval(state2(0.25, 0.1)).x() == doctest::Approx(0.0));
    CHECK(sys->inv_tangent_norm(state2(0.3, 0.25)) == doctest::Approx(2.0));
    CHECK(sys->jac_det(state2(0.3, 0.25)) == doctest::Approx(16.0 * 2.0 * 0.25));
    CHECK(*sys->critical_distance(state2(0.7, 0.3)) == doctest::Approx(0.3));
    CHECK_THROWS_AS(sys->inv_tangent_norm(state2(0.1, 0.0)), CriticalPoint);
}

TEST_CASE("viana inverse norm identity 1/|2x|") {
    auto sys = build_system("viana");
    CounterRng rng(11, 0);
    for (int i = 0; i < 3000; ++i) {
        State z = sys->domain().sample_uniform(rng);
        if (std::abs(z.y()) <= 1e-3) continue;
        const double expected = 1.0 / std::abs(2.0 * z.y());
        CHECK(std::abs(sys->inv_tangent_norm(z) - expected) / expected < 1e-12);
    }
}

TEST_CASE("torus bump keeps volume expansion and bounded contraction") {
    auto sys = build_system("torus");
    const auto& info = torus_info(*sys);
    CounterRng rng(3, 0);
    for (int i = 0; i < 20000; ++i) {
        const State z = sys->domain().sample_uniform(rng);
        CHECK(sys->jac_det(z) >= info.sigma - 1e-12);
        if (torus_in_bump(*sys, z))
            CHECK(sys->inv_tangent_norm(z) <= 1.0 + info.eta + 1e-12);
        else
            CHECK(sys->inv_tangent_norm(z) == doctest::Approx(1.0 / 3.0));
    }
    CHECK_THROWS_AS(build_system("torus", {{"amplitude", 0.9}}), InvalidParams);
}

TEST_CASE("forward invariance over random points") {
    for (const char* name : {"doubling", "fig1", "fig2", "viana", "torus"}) {
        auto sys = build_system(name);
        CounterRng rng(101, 5);
        for (int i = 0; i < 100000; ++i) {
            const State x = sys->domain().sample_uniform(rng);
            const State y = sys->eval(x);
            CHECK(sys->domain().contains(y));
        }
    }
}

TEST_CASE("analytic tangents agree with finite differences") {
    const double h = 1e-6;
    for (const char* name : {"doubling", "fig1", "fig2", "viana", "torus"}) {
        auto sys = build_system(name);
        CounterRng rng(55, 9);
        int checked = 0;
        while (checked < 1000) {
            const State x = sys->domain().sample_uniform(rng);
            const auto cd = sys->critical_distance(x);
            if (cd.has_value() && *cd < 1e-2) continue; // stay away from C
            // skip points whose stencil straddles a domain boundary
            if (sys->domain().has_interval_factor()) {
                const int ic = sys->domain().dim() == 1 ? 0 : 1;
                const double v = x.coord[static_cast<size_t>(ic)];
                if (v - 2 * h < sys->domain().interval_lo() ||
                    v + 2 * h > sys->domain().interval_hi())
                    continue;
            }
            const auto tg = sys->tangent(x);
            for (int in = 0; in < sys->domain().dim(); ++in) {
                const auto fd = central_diff(*sys, x, in, h);
                for (int out = 0; out < sys->domain().dim(); ++out) {
                    const double analytic = tg[static_cast<size_t>(2 * out + in)];
                    const double numeric = fd[static_cast<size_t>(out)];
                    const double scale = std::max(1.0, std::abs(analytic));
                    CHECK(std::abs(analytic - numeric) / scale < 1e-4);
                }
            }
            ++checked;
        }
    }
}

TEST_CASE("smoothness constants validate their ranges") {
    CHECK_NOTHROW(SmoothnessConstants{2.0, 1.0, 0.25}.validate());
    CHECK_THROWS_AS((SmoothnessConstants{0.9, 1.0, 0.25}.validate()), InvalidParams);
    CHECK_THROWS_AS((SmoothnessConstants{2.0, -1.0, 0.25}.validate()), InvalidParams);
    CHECK_THROWS_AS((SmoothnessConstants{2.0, 4.0, 0.2}.validate()), InvalidParams);
}

TEST_CASE("domain metric wraps on circle factors") {
    const Domain c = Domain::circle(4.0, -3.0);
    CHECK(c.dist(state1(-2.9), state1(0.9)) == doctest::Approx(0.2));
    CHECK(c.dist(state1(0.5), state1(0.5)) == 0.0);
    const Domain t = Domain::torus2();
    CHECK(t.dist(state2(0.05, 0.0), state2(0.95, 0.0)) == doctest::Approx(0.1));
}

} // TEST_SUITE
