import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fourshock.errors import ParameterDomainError, VacuumError
from fourshock.riemann_setup import (
    build_states,
    compatibility_residual,
    incident_shock_residuals,
    min_pseudo_mach,
    pseudo_mach,
    pseudo_mach_closed_form,
    solve_compatibility,
    turning_angle,
    v_min,
    vacuum_critical_angle,
)
from fourshock.thermo import GasModel

G2 = GasModel(2.0)


def test_closed_form_density():
    assert solve_compatibility(G2, -0.5, math.pi / 4) == pytest.approx((9 - math.sqrt(33)) / 8, rel=1e-14)


def test_reflection_point_and_mach():
    s = build_states(G2, -0.5, math.pi / 4, math.pi / 4)
    # oracle: line intersection in 40-digit arithmetic (tests/oracles.py)
    assert s.xi_P01 == pytest.approx(1.1861406616345074, rel=1e-13)
    assert s.xi_P02 == -s.xi_P01
    assert pseudo_mach(G2, -0.5, math.pi / 4) == pytest.approx(1.2872178017657878, rel=1e-13)


def test_vacuum_angle():
    assert vacuum_critical_angle(G2, -1.0) == pytest.approx(math.pi / 4, rel=1e-14)
    assert vacuum_critical_angle(GasModel(1.0), -5.0) == math.pi / 2


def test_theta_cr_rejected():
    with pytest.raises(VacuumError, match="theta_cr"):
        build_states(G2, -0.5, vacuum_critical_angle(G2, -0.5), 0.1)


def test_v2_domain():
    with pytest.raises(ParameterDomainError):
        build_states(G2, 0.1, 0.2, 0.2)
    with pytest.raises(ParameterDomainError):
        build_states(G2, v_min(G2) * 1.01, 0.2, 0.2)


def test_zero_angle_is_at_infinity():
    s = build_states(G2, -0.5, 0.0, 0.3)
    assert s.xi_P01 == math.inf
    assert s.U1.rho == solve_compatibility(G2, -0.5, 0.0) and s.U1.u == 0.0
    assert pseudo_mach(G2, -0.5, 0.0) == math.inf


admissible = st.tuples(st.floats(1.0, 3.0), st.floats(0.02, 0.98), st.floats(0.01, 0.99))


def _params(t):
    g, fv, ft = t
    gas = GasModel(g)
    v2 = max(v_min(gas), -3.0) * fv
    return gas, v2, ft * vacuum_critical_angle(gas, v2)


@given(admissible)
def test_compatibility_residual_small(t):
    gas, v2, th = _params(t)
    rho = solve_compatibility(gas, v2, th)
    assume(rho > 1e-200)
    assert 0.0 < rho < 1.0
    assert compatibility_residual(gas, v2, th, rho) <= 1e-12 * abs(v2)


@given(admissible)
def test_mach_two_formulas(t):
    gas, v2, th = _params(t)
    assume(th > 1e-3)
    m = pseudo_mach(gas, v2, th)
    assert m == pytest.approx(pseudo_mach_closed_form(gas, v2, th), rel=1e-9)
    assert m >= min_pseudo_mach(gas, v2) * (1 - 1e-12)


@given(admissible)
def test_incident_shock_rh(t):
    gas, v2, th = _params(t)
    s = build_states(gas, v2, th, th)
    assert max(abs(incident_shock_residuals(s, 1))) <= 1e-10 * max(1.0, abs(s.xi_P01))


@given(admissible)
def test_mirror_swaps_sides(t):
    gas, v2, th = _params(t)
    a = build_states(gas, v2, th, 0.5 * th)
    b = a.mirrored()
    assert b.U3.rho == pytest.approx(a.U1.rho, rel=1e-15)
    assert b.xi_P02 == pytest.approx(-a.xi_P01, rel=1e-15)


def test_turning_angle_range():
    th = 0.3
    that = turning_angle(G2, -0.5, th)
    assert 0.0 < that < math.pi / 2
