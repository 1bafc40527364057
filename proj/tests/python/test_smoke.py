"""Smoke tests for the python bindings: a few exact values and contracts."""

import math

import nuelab


def approx(a, b, tol=1e-12):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def test_systems():
    doubling = nuelab.build_system("doubling", {"factor": 2})
    approx(doubling.eval([0.3])[0], 0.6, 1e-14)
    approx(doubling.inv_tangent_norm([0.42]), 0.5)
    assert doubling.critical_distance([0.2]) is None

    fig1 = nuelab.build_system("fig1")
    approx(fig1.eval([-2.0])[0], -3.0, 1e-14)
    approx(fig1.truncated_distance([0.05], 0.1), 0.05)
    approx(fig1.truncated_distance([0.5], 0.1), 1.0)
    try:
        fig1.inv_tangent_norm([0.0])
        raise AssertionError("expected a critical-point error")
    except RuntimeError as e:
        assert "CriticalPoint" in str(e)

    viana = nuelab.build_system("viana", {"d": 16, "alpha_skew": 0.01})
    s, x = viana.eval([0.25, 0.1])
    approx(s, 0.0)
    approx(viana.inv_tangent_norm([0.3, 0.25]), 2.0)

    try:
        nuelab.build_system("unknown-map")
        raise AssertionError("expected an unknown-id error")
    except RuntimeError as e:
        assert "UnknownCatalogId" in str(e)


def test_orbits_and_hyperbolic_times():
    doubling = nuelab.build_system("doubling")
    tr = nuelab.random_orbit(doubling, "additive", 0.0, [0.3], 3, seed=1)
    states = [s[0] for s in tr.states]
    for got, want in zip(states, [0.3, 0.6, 0.2, 0.4]):
        approx(got, want, 1e-12)
    for v in tr.log_inv_norms:
        approx(v, math.log(0.5))

    # reproducibility
    tr2 = nuelab.random_orbit(doubling, "additive", 0.05, [0.3], 100, seed=9, stream=4)
    tr3 = nuelab.random_orbit(doubling, "additive", 0.05, [0.3], 100, seed=9, stream=4)
    assert [s[0] for s in tr2.states] == [s[0] for s in tr3.states]

    rec = nuelab.hyperbolic_times_diffeo(tr, 0.6)
    assert rec.first == 1 and rec.times == [1, 2, 3]
    rec = nuelab.hyperbolic_times_diffeo(tr, 0.4)
    assert rec.first is None and rec.times == []

    assert nuelab.pliss_select([1.0, 1.0, 1.0, 1.0], 0.5, 1.0, 2.0) == [1, 2, 3, 4]
    assert nuelab.pliss_select([2.0, 0.0, 2.0, 0.0, 2.0, 0.0], 0.5, 1.0, 2.0) == [1, 3, 5]


def test_tails_and_measures():
    doubling = nuelab.build_system("doubling")
    prof = nuelab.tail_profile(doubling, "additive", 0.05, 0.6, 0.1, 500, 10, seed=3)
    assert prof.counts[1] == 500 and prof.censored == 0
    assert nuelab.tail_statistic(prof, 2) == 0.0

    h = nuelab.random_birkhoff_histogram(doubling, "additive", 0.05, [0.3], 200000, bins=64)
    u = [1.0 / 64] * 64
    l1 = sum(abs(m - v) for m, v in zip(h.masses, u))
    assert l1 < 0.1
    d = nuelab.weak_star_distance(h, h)
    assert d == 0.0

    res = nuelab.find_misiurewicz_a0(8, 1e-12)
    assert 1.0 < res.a0 < 2.0 and res.k == 3 and res.residual < 1e-12

    viana = nuelab.build_system("viana")
    sup, iters, residual = nuelab.foliation_fixed_point(viana, 64, 32, 1e-9, 32)
    assert sup <= 0.1 and residual < 2e-9


if __name__ == "__main__":
    test_systems()
    test_orbits_and_hyperbolic_times()
    test_tails_and_measures()
    print("smoke tests passed")
