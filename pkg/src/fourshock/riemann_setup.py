"""Four-sector Riemann data: compatibility, states (1)-(4), incident shocks.

Conventions: rho_2 = c_2 = 1, u_2 = v_1 = v_3 = 0, k_2 = 0 and v2 < 0. Side 1 is
the right incident shock S12 (angle theta1), side 2 the left one S32 (theta2).
A reflection point at theta = 0 sits at infinity and is stored as +/- math.inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._roots import find_root
from .errors import DivergenceError, ParameterDomainError, VacuumError
from .thermo import GasModel, density_from_bernoulli, ell, ell_vacuum

AT_INFINITY = math.inf


@dataclass(frozen=True)
class UniformState:
    """Constant state with pseudo-potential phi = -|xi|^2/2 + u xi + v eta + k."""

    rho: float
    u: float
    v: float
    k: float

    def phi(self, xi, eta):
        return -0.5 * (xi * xi + eta * eta) + self.u * xi + self.v * eta + self.k

    def grad_phi(self, xi, eta):
        """Pseudo-velocity D phi = (u, v) - xi."""
        return self.u - xi, self.v - eta

    def mirrored(self) -> "UniformState":
        return UniformState(self.rho, -self.u, self.v, self.k)


@dataclass(frozen=True)
class RiemannSetup:
    gas: GasModel
    v2: float
    theta1: float
    theta2: float
    states: tuple[UniformState, UniformState, UniformState, UniformState]
    xi_P01: float
    xi_P02: float

    @property
    def U1(self) -> UniformState:
        return self.states[0]

    @property
    def U2(self) -> UniformState:
        return self.states[1]

    @property
    def U3(self) -> UniformState:
        return self.states[2]

    @property
    def U4(self) -> UniformState:
        return self.states[3]

    def mirrored(self) -> "RiemannSetup":
        """The same problem reflected through the eta axis: sides swap."""
        return build_states(self.gas, self.v2, self.theta2, self.theta1)


def v_min(gas: GasModel) -> float:
    """Lower end of admissible v2; -inf for gamma = 1."""
    return -ell_vacuum(gas)


def check_v2(gas: GasModel, v2: float) -> float:
    v2 = float(v2)
    if not (v_min(gas) < v2 < 0.0):
        raise ParameterDomainError(f"v2={v2!r} outside (v_min, 0) = ({v_min(gas)!r}, 0)")
    return v2


def vacuum_critical_angle(gas: GasModel, v2: float) -> float:
    v2 = check_v2(gas, v2)
    if gas.isothermal:
        return 0.5 * math.pi
    return math.acos(-v2 / ell_vacuum(gas))


def _ell_sq_log(s: float, gas: GasModel) -> float:
    # ell(exp(s), 1)^2 for s <= 0, finite as s -> -inf when gamma > 1
    rho = math.exp(s)
    h = s if gas.isothermal else math.expm1(gas.gm1 * s) / gas.gm1
    return 2.0 * (-math.expm1(s)) * (-h) / (1.0 + rho)


def solve_compatibility(gas: GasModel, v2: float, theta: float) -> float:
    """Density rho in (0, 1) of the upstream sector with ell(rho, 1) cos(theta) = -v2."""
    v2 = check_v2(gas, v2)
    theta = float(theta)
    theta_cr = vacuum_critical_angle(gas, v2)
    if theta < 0.0:
        raise ParameterDomainError("incident angle must be >= 0")
    if theta >= theta_cr:
        raise VacuumError(f"theta={theta!r} >= theta_cr={theta_cr!r}: upstream density reaches vacuum")
    target = (v2 / math.cos(theta)) ** 2

    def f(s):
        return _ell_sq_log(s, gas) - target

    lo = -1.0
    while f(lo) <= 0.0:
        lo *= 2.0
        if lo < -1e9:
            raise VacuumError("upstream density below representable range")
    s = find_root(f, lo, 0.0)
    return math.exp(s)


def compatibility_residual(gas: GasModel, v2: float, theta: float, rho: float) -> float:
    return float(ell(rho, 1.0, gas)) * math.cos(theta) + v2


def _xi_p0_magnitude(v2: float, theta: float, rho: float) -> float:
    # |xi^{P0}| = ell (cos^2 + rho sin^2) / ((1 - rho) sin), with ell cos = -v2
    if theta == 0.0:
        return AT_INFINITY
    c, s = math.cos(theta), math.sin(theta)
    return -v2 * (c + rho * s * s / c) / ((1.0 - rho) * s)


def _k_upstream(v2: float, theta: float, rho: float) -> float:
    # -v2 xi^{P0} tan(theta), finite as theta -> 0
    t = math.tan(theta)
    return v2 * v2 * (1.0 + rho * t * t) / (1.0 - rho)


def _side(gas: GasModel, v2: float, theta: float):
    rho = solve_compatibility(gas, v2, theta)
    return rho, v2 * math.tan(theta), _k_upstream(v2, theta, rho), _xi_p0_magnitude(v2, theta, rho)


def build_states(gas: GasModel, v2: float, theta1: float, theta2: float) -> RiemannSetup:
    """States (1)-(4) and the wall reflection points of the incident shocks."""
    v2 = check_v2(gas, v2)
    gas = GasModel.from_v2(gas.gamma, v2)
    rho1, u1, k1, x1 = _side(gas, v2, float(theta1))
    rho3, m3, k3, x2 = _side(gas, v2, float(theta2))
    states = (
        UniformState(rho1, u1, 0.0, k1),
        UniformState(1.0, 0.0, v2, 0.0),
        UniformState(rho3, -m3, 0.0, k3),
        UniformState(1.0, 0.0, -v2, 0.0),
    )
    return RiemannSetup(gas, v2, float(theta1), float(theta2), states, x1, -x2)


def pseudo_mach(gas: GasModel, v2: float, theta: float) -> float:
    """|D phi_2| at the reflection point of an incident shock with angle theta.

    Accepts theta in [0, theta_cr]; at theta_cr the vacuum limit
    v2 v_min / sqrt(v_min^2 - v2^2) is returned (|v2| for gamma = 1).
    """
    v2 = check_v2(gas, v2)
    theta_cr = vacuum_critical_angle(gas, v2)
    if theta == 0.0:
        return AT_INFINITY
    if theta >= theta_cr:
        return min_pseudo_mach(gas, v2)
    rho = solve_compatibility(gas, v2, theta)
    return math.hypot(_xi_p0_magnitude(v2, theta, rho), v2)


def min_pseudo_mach(gas: GasModel, v2: float) -> float:
    vm = v_min(gas)
    if math.isinf(vm):
        return abs(v2)
    return v2 * vm / math.sqrt(vm * vm - v2 * v2)


def pseudo_mach_closed_form(gas: GasModel, v2: float, theta: float) -> float:
    """ell(rho1)/(1 - rho1) * sqrt(rho1^2 + cot^2 theta)."""
    rho = solve_compatibility(gas, v2, theta)
    cot = 1.0 / math.tan(theta)
    return float(ell(rho, 1.0, gas)) / (1.0 - rho) * math.sqrt(rho * rho + cot * cot)


def turning_angle(gas: GasModel, v2: float, theta: float) -> float:
    """Acute angle between D phi_2 at the reflection point and the wall."""
    v2 = check_v2(gas, v2)
    theta_cr = vacuum_critical_angle(gas, v2)
    if theta == 0.0:
        return 0.0
    if theta >= theta_cr:
        vm = v_min(gas)
        return 0.5 * math.pi if math.isinf(vm) else math.acos(abs(v2 / vm))
    rho = solve_compatibility(gas, v2, theta)
    return math.atan2(-v2, _xi_p0_magnitude(v2, theta, rho))


def pseudo_mach_state2(setup: RiemannSetup, which_reflection_point: int = 1) -> float:
    """M2 = |D phi_2(P0)| at P0^1 (which=1) or P0^2 (which=2); inf at theta = 0."""
    if which_reflection_point not in (1, 2):
        raise ValueError("which_reflection_point must be 1 or 2")
    xi = setup.xi_P01 if which_reflection_point == 1 else setup.xi_P02
    if math.isinf(xi):
        return AT_INFINITY
    return math.hypot(xi, setup.v2)


def incident_shock_residuals(setup: RiemannSetup, side: int = 1, n: int = 3) -> np.ndarray:
    """Max |[phi]| and |[rho D phi . nu]| over n points of S12 (side 1) or S32 (side 2).

    Densities are recomputed from the Bernoulli law at each point, so the pseudo-potential
    constants are checked along with the jump conditions.
    """
    theta = setup.theta1 if side == 1 else setup.theta2
    if theta == 0.0:
        raise DivergenceError("incident shock has left the upper half-plane at theta = 0")
    up = setup.U1 if side == 1 else setup.U3
    down = setup.U2
    xi0 = setup.xi_P01 if side == 1 else setup.xi_P02
    sgn = 1.0 if side == 1 else -1.0
    worst = np.zeros(2)
    for eta in np.linspace(0.0, 2.0, n):
        xi = xi0 + sgn * eta / math.tan(theta)
        nx, ny = up.u - down.u, up.v - down.v
        norm = math.hypot(nx, ny)
        nx, ny = nx / norm, ny / norm
        qs = []
        for st in (up, down):
            gx, gy = st.grad_phi(xi, eta)
            rho = density_from_bernoulli(gx * gx + gy * gy, st.phi(xi, eta), setup.gas)
            qs.append(rho * (gx * nx + gy * ny))
        worst = np.maximum(worst, [abs(up.phi(xi, eta) - down.phi(xi, eta)), abs(qs[0] - qs[1])])
    return worst
