"""Polytropic gas kernel: enthalpy, sonic speed, the ell function and Bernoulli density.

Everything is nondimensional with the state-(2) normalization rho_2 = c_2 = 1 and
pressure law p(rho) = rho**gamma / gamma, so that h(1) = 0 and c(1) = 1.
Functions accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, DomainError, VacuumError

ISOTHERMAL_TOL = 1e-12
COINCIDENT_TOL = 1e-8


@dataclass(frozen=True)
class GasModel:
    """Polytropic exponent and Bernoulli constant.

    With rho_2 = 1 and k_2 = 0 the Bernoulli constant is B = v2**2 / 2; use
    :meth:`from_v2` to build it that way.
    """

    gamma: float
    bernoulli_B: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma < 1.0:
            raise DomainError(f"gamma must be >= 1, got {self.gamma!r}")

    @classmethod
    def from_v2(cls, gamma: float, v2: float) -> "GasModel":
        return cls(gamma=float(gamma), bernoulli_B=0.5 * float(v2) ** 2)

    @property
    def isothermal(self) -> bool:
        return abs(self.gamma - 1.0) < ISOTHERMAL_TOL

    @property
    def gm1(self) -> float:
        return self.gamma - 1.0


def _as_array(x):
    return np.asarray(x, dtype=float)


def _out(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def enthalpy(rho, gas: GasModel):
    """h(rho) = (rho**(gamma-1) - 1)/(gamma-1), or ln(rho) when gamma = 1."""
    r = _as_array(rho)
    if np.any(r < 0):
        raise DomainError("density must be nonnegative")
    if gas.isothermal:
        if np.any(r <= 0):
            raise DomainError("enthalpy diverges at rho = 0 for gamma = 1")
        return _out(np.log(r))
    g = gas.gm1
    with np.errstate(divide="ignore"):
        out = np.expm1(g * np.log(r)) / g
    return _out(out)


def enthalpy_prime(rho, gas: GasModel):
    """h'(rho) = rho**(gamma-2)."""
    r = _as_array(rho)
    if np.any(r <= 0):
        raise DomainError("h' requires rho > 0")
    return _out(r ** (gas.gamma - 2.0))


def sonic_speed(rho, gas: GasModel):
    r = _as_array(rho)
    if np.any(r < 0):
        raise DomainError("density must be nonnegative")
    if gas.isothermal:
        return _out(np.ones_like(r))
    return _out(r ** (0.5 * gas.gm1))


def ell(rho_a, rho_b, gas: GasModel):
    """Normal velocity jump across a potential-flow shock joining densities rho_a and rho_b.

    ell(a, b) = sqrt(2 (a - b)(h(a) - h(b)) / (a + b)), symmetric, zero on the diagonal.
    """
    a = _as_array(rho_a)
    b = _as_array(rho_b)
    if np.any(a < 0) or np.any(b < 0):
        raise DomainError("densities must be nonnegative")
    if gas.isothermal and (np.any(a == 0) or np.any(b == 0)):
        raise DivergenceError("ell(0+, rho) is infinite for gamma = 1")
    a, b = np.broadcast_arrays(a, b)
    diff = a - b
    ha = enthalpy(a, gas)
    hb = enthalpy(b, gas)
    with np.errstate(invalid="ignore", divide="ignore"):
        raw = np.sqrt(2.0 * diff * (ha - hb) / (a + b))
        mean = 0.5 * (a + b)
        near = np.abs(diff) < COINCIDENT_TOL
        if np.any(near):
            hp = np.where(mean > 0, mean, 1.0) ** (gas.gamma - 2.0)
            lin = np.abs(diff) * np.sqrt(hp / np.where(mean > 0, mean, 1.0))
            raw = np.where(near, lin, raw)
    return _out(np.asarray(raw, dtype=float))


def ell_vacuum(gas: GasModel) -> float:
    """ell(0+, 1); infinite for gamma = 1."""
    if gas.isothermal:
        return np.inf
    return float(np.sqrt(2.0 / gas.gm1))


def density_from_bernoulli(speed_sq, phi, gas: GasModel):
    """Density from the Bernoulli law given |D phi|**2 and phi."""
    x = gas.bernoulli_B - 0.5 * _as_array(speed_sq) - _as_array(phi)
    if gas.isothermal:
        return _out(np.exp(x))
    g = gas.gm1
    base = g * x
    if np.any(base < -1.0):
        raise VacuumError("B - |D phi|^2/2 - phi is below h(0+)")
    with np.errstate(divide="ignore"):
        return _out(np.exp(np.log1p(base) / g))
