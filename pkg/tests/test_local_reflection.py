import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourshock.errors import DetachmentError
from fourshock.local_reflection import (
    critical_angles,
    critical_v2,
    intersection_PI,
    normal_state,
    reflection_residuals,
    solve_reflection,
    sonic_geometry,
)
from fourshock.riemann_setup import build_states, turning_angle, v_min
from fourshock.thermo import GasModel, sonic_speed

# 40-digit bisection / ternary-search oracle (tests/oracles.py)
CRITICAL = {
    (2.0, -0.5): (1.2094292028881888, 0.92944431112415312, 0.61322481171550103, 0.59221637747932829),
    (1.4, -0.4): (1.3909428270024183, 1.0158273209479374, 0.73351443967855366, 0.71706665776423831),
}
WEAK = {
    # theta = theta_d / 2: rho, u, k, theta_25, a_25, strong rho
    (2.0, -0.5): (1.5877220557513263, 0.13025452340407048, -0.47120517618493711, 2.886747840006544,
                  0.94241035236987422, 7.548445445707902),
    (1.4, -0.4): (1.4955769045141102, 0.11598340019823531, -0.36345261835568977, 2.8593735121775232,
                  0.90863154588922442, 15.425572577479112),
}
CRIT_V2 = {1.4: (-1.6848250405361462, -1.6295276819448955), 2.0: (-1.2418867548977918, -1.2177324534893025)}


@pytest.mark.parametrize("key", sorted(CRITICAL))
def test_critical_angles_oracle(key):
    ca = critical_angles(GasModel(key[0]), key[1])
    want = CRITICAL[key]
    assert ca.theta_cr == pytest.approx(want[0], rel=1e-14)
    assert ca.theta_plus == pytest.approx(want[1], rel=1e-11)
    # the oracle bisection stops at 1e-13
    assert ca.theta_d == pytest.approx(want[2], abs=1e-12)
    assert ca.theta_s == pytest.approx(want[3], abs=1e-12)


@pytest.mark.parametrize("key", sorted(WEAK))
def test_weak_state_oracle(key):
    gas = GasModel(key[0])
    th = CRITICAL[key][2] / 2
    sol = solve_reflection(build_states(gas, key[1], th, th), 5)
    rho, u, k, t25, a25, srho = WEAK[key]
    # theta_d enters through a 1e-13 bisection, so allow a little slack
    assert sol.weak.rho == pytest.approx(rho, rel=1e-11)
    assert sol.weak.u == pytest.approx(u, rel=1e-11)
    assert sol.weak.k == pytest.approx(k, rel=1e-11)
    assert sol.theta_2j == pytest.approx(t25, rel=1e-11)
    assert sol.a_2j == pytest.approx(a25, rel=1e-11)
    assert sol.strong.rho == pytest.approx(srho, rel=1e-10)


@pytest.mark.parametrize("g", sorted(CRIT_V2))
def test_critical_v2_oracle(g):
    v2s, v2d = critical_v2(GasModel(g))
    assert v2s == pytest.approx(CRIT_V2[g][0], abs=1e-12)
    assert v2d == pytest.approx(CRIT_V2[g][1], abs=1e-12)


def test_critical_v2_isothermal():
    assert critical_v2(GasModel(1.0)) == (-math.inf, -math.inf)


def test_normal_state_closed_form():
    ns = normal_state(GasModel(2.0), -math.sqrt(2 / 3))
    assert ns.rho0 == pytest.approx(2.0, rel=1e-14)
    assert ns.eta0 == pytest.approx(math.sqrt(2 / 3), rel=1e-14)


def test_detached_raises():
    gas = GasModel(2.0)
    ca = critical_angles(gas, -0.5)
    th = 0.5 * (ca.theta_d + ca.theta_cr)
    with pytest.raises(DetachmentError):
        solve_reflection(build_states(gas, -0.5, th, th), 5)


def test_normal_side_embedding():
    gas = GasModel(2.0)
    sol = solve_reflection(build_states(gas, -0.5, 0.0, 0.2), 5)
    ns = normal_state(gas, -0.5)
    assert sol.is_normal
    assert sol.weak.rho == ns.rho0 and sol.theta_2j == math.pi and sol.a_2j == ns.eta0


samples = st.tuples(st.floats(1.2, 3.0), st.floats(0.02, 0.98), st.floats(0.01, 0.99))


def _case(t):
    g, fv, ft = t
    gas = GasModel(g)
    v2 = max(v_min(gas), -3.0) * fv
    ca = critical_angles(gas, v2)
    return gas, v2, ft * ca.theta_d, ca


@given(samples)
def test_rh_and_ordering(t):
    gas, v2, th, _ = _case(t)
    setup = build_states(gas, v2, th, th)
    sol = solve_reflection(setup, 5)
    assert max(reflection_residuals(setup, sol)[:3]) <= 1e-11
    assert max(reflection_residuals(setup, sol, strong=True)[:3]) <= 1e-11
    assert 1.0 < sol.weak.rho < sol.strong.rho
    assert 0.0 < sol.weak.u < sol.strong.u <= sol.xi_P0
    # strict unless the strong pseudo-speed is below one ulp of xi_P0
    assert sol.strong.u < sol.xi_P0 or sol.xi_P0 / sol.strong.rho < 4 * math.ulp(sol.xi_P0)
    assert sol.weak.v == 0.0
    assert math.pi / 2 + turning_angle(gas, v2, th) < sol.theta_2j <= math.pi


@given(samples)
def test_sides_are_mirrors(t):
    gas, v2, th, _ = _case(t)
    setup = build_states(gas, v2, th, th)
    a, b = solve_reflection(setup, 5), solve_reflection(setup, 6)
    assert b.xi_P0 == -a.xi_P0
    assert b.weak.rho == a.weak.rho and b.weak.u == -a.weak.u
    assert b.theta_2j == pytest.approx(math.pi - a.theta_2j, abs=1e-15)


@given(samples)
def test_sonic_flag(t):
    gas, v2, th, ca = _case(t)
    sol = solve_reflection(build_states(gas, v2, th, th), 5)
    q = sol.xi_P0 - sol.weak.u
    assert sol.supersonic_at_reflection == (q > sonic_speed(sol.weak.rho, gas))
    assert sol.supersonic_at_reflection == (th < ca.theta_s)


def test_sonic_circle_passes_through_corners():
    gas = GasModel(1.4)
    ca = critical_angles(gas, -0.4)
    th = 0.5 * ca.theta_s
    setup = build_states(gas, -0.4, th, th)
    sol = solve_reflection(setup, 5)
    geo = sonic_geometry(sol, setup)
    cx, cy = sol.sonic_center
    for p in (sol.P_corner_wall, sol.P_corner_shock):
        assert math.hypot(p[0] - cx, p[1] - cy) == pytest.approx(sol.sonic_radius, rel=1e-12)
    assert geo is not None


def test_PI_limit():
    gas = GasModel(2.0)
    v2 = -math.sqrt(2 / 3)
    eta0 = normal_state(gas, v2).eta0
    errs = []
    for k in range(2, 7):
        s = build_states(gas, v2, 10.0**-k, 2 * 10.0**-k)
        p = intersection_PI(solve_reflection(s, 5), solve_reflection(s, 6), v2)
        errs.append(math.hypot(p[0], p[1] - eta0))
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_PI_normal_both():
    gas = GasModel(2.0)
    s = build_states(gas, -0.5, 0.0, 0.0)
    p = intersection_PI(solve_reflection(s, 5), solve_reflection(s, 6), -0.5)
    assert p == (0.0, normal_state(gas, -0.5).eta0)
