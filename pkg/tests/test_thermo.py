import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourshock.errors import DomainError, VacuumError
from fourshock.thermo import (
    GasModel,
    density_from_bernoulli,
    ell,
    ell_vacuum,
    enthalpy,
    enthalpy_prime,
    sonic_speed,
)

gammas = st.floats(1.0, 5.0)
rhos = st.floats(1e-3, 1e3)


def test_normalization():
    for g in (1.0, 1.4, 2.0):
        gas = GasModel(g)
        assert enthalpy(1.0, gas) == 0.0
        assert sonic_speed(1.0, gas) == 1.0


def test_ell_closed_form():
    assert ell(2.0, 1.0, GasModel(2.0)) == pytest.approx(math.sqrt(2 / 3), rel=1e-14)


def test_ell_vacuum():
    assert ell_vacuum(GasModel(2.0)) == pytest.approx(math.sqrt(2.0), rel=1e-14)
    assert ell_vacuum(GasModel(1.0)) == math.inf


def test_gamma_below_one_rejected():
    with pytest.raises(DomainError):
        GasModel(0.9)


def test_isothermal_enthalpy_at_zero():
    with pytest.raises(DomainError):
        enthalpy(0.0, GasModel(1.0))


@given(gammas, rhos, rhos)
def test_ell_symmetric_nonnegative(g, a, b):
    gas = GasModel(g)
    assert ell(a, b, gas) == pytest.approx(ell(b, a, gas), rel=1e-12)
    assert ell(a, b, gas) >= 0.0


@given(gammas, rhos)
def test_sound_speed_is_rho_h_prime(g, r):
    gas = GasModel(g)
    assert sonic_speed(r, gas) ** 2 == pytest.approx(r * enthalpy_prime(r, gas), rel=1e-12)


# the inversion loses digits like 1/rho^(gamma-1) as rho -> 0, so stay away from vacuum
@given(gammas, st.floats(0.05, 20.0), st.floats(0.0, 4.0))
def test_bernoulli_inverts_enthalpy(g, r, q2):
    gas = GasModel(g, bernoulli_B=0.3)
    phi = gas.bernoulli_B - 0.5 * q2 - enthalpy(r, gas)
    assert density_from_bernoulli(q2, phi, gas) == pytest.approx(r, rel=1e-9)


def test_bernoulli_vacuum():
    gas = GasModel(2.0, bernoulli_B=0.0)
    with pytest.raises(VacuumError):
        density_from_bernoulli(10.0, 0.0, gas)


def test_vectorized():
    gas = GasModel(1.4)
    r = np.array([0.5, 1.0, 2.0])
    assert enthalpy(r, gas).shape == (3,)
