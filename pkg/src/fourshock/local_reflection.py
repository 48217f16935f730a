"""Reflection states (0), (5), (6), reflected shocks, sonic arcs and critical angles.

Side 5 is the reflection of S12 at P0^1 (xi > 0); side 6 is computed by mirroring
the problem through the eta axis and reusing the side-5 path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ._roots import expand_upper, find_root
from .errors import ConsistencyError, DetachmentError, ParameterDomainError
from .riemann_setup import (
    AT_INFINITY,
    RiemannSetup,
    UniformState,
    check_v2,
    min_pseudo_mach,
    pseudo_mach,
    turning_angle,
    v_min,
    vacuum_critical_angle,
)
from .steady_polar import SteadyPolar, detachment_angle_or_zero, sonic_angle_or_zero
from .thermo import GasModel, density_from_bernoulli, enthalpy, sonic_speed


@dataclass(frozen=True)
class NormalState:
    rho0: float
    eta0: float
    v2: float

    @property
    def state(self) -> UniformState:
        return UniformState(self.rho0, 0.0, 0.0, self.v2 * self.eta0)

    def background(self) -> tuple[UniformState, UniformState]:
        """(phi_0, phi_2); the normal-reflection solution is their pointwise minimum."""
        return self.state, UniformState(1.0, 0.0, self.v2, 0.0)


def normal_state(gas: GasModel, v2: float) -> NormalState:
    v2 = check_v2(gas, v2)
    g = gas.gm1

    # ell(1 + d, 1)^2 - v2^2 in terms of d = rho0 - 1, to keep d accurate as v2 -> 0
    def f(d):
        h = math.log1p(d) if gas.isothermal else math.expm1(g * math.log1p(d)) / g
        return 2.0 * d * h / (2.0 + d) - v2 * v2

    hi = expand_upper(f, 0.0, 1.0)
    d = find_root(f, 0.0, hi, xtol=1e-300)
    return NormalState(1.0 + d, -v2 / d, v2)


@dataclass(frozen=True)
class ReflectionSolution:
    side: int
    theta: float
    xi_P0: float
    mach2: float
    turning_angle: float
    weak: UniformState
    strong: UniformState | None
    theta_2j: float
    a_2j: float
    theta_2j_strong: float | None
    a_2j_strong: float | None
    sonic_center: tuple[float, float]
    sonic_radius: float
    P_corner_wall: tuple[float, float]
    P_corner_shock: tuple[float, float]
    supersonic_at_reflection: bool
    critical: bool = False

    @property
    def is_normal(self) -> bool:
        return math.isinf(self.xi_P0)


def _mirror_point(p):
    return (-p[0], p[1])


def _mirror(sol: ReflectionSolution) -> ReflectionSolution:
    def ang(a):
        return None if a is None else math.pi - a

    return replace(
        sol,
        side=6,
        xi_P0=-sol.xi_P0,
        weak=sol.weak.mirrored(),
        strong=None if sol.strong is None else sol.strong.mirrored(),
        theta_2j=ang(sol.theta_2j),
        theta_2j_strong=ang(sol.theta_2j_strong),
        sonic_center=_mirror_point(sol.sonic_center),
        P_corner_wall=_mirror_point(sol.P_corner_wall),
        P_corner_shock=_mirror_point(sol.P_corner_shock),
    )


def _reflected_angle(u: float, v2: float) -> float:
    # S25 is normal to D phi_2 - D phi_5 = (-u5, v2); angle in (pi/2, pi]
    return math.pi + math.atan(u / v2)


def _corner_points(center_u: float, c: float, xi0: float, theta_2j: float, supersonic: bool):
    if not supersonic:
        return (xi0, 0.0), (xi0, 0.0)
    q = xi0 - center_u
    cs, sn = math.cos(theta_2j), math.sin(theta_2j)
    disc = c * c - (q * sn) ** 2
    if disc < 0.0:
        raise ConsistencyError("reflected shock misses the sonic circle of a supersonic state")
    t = -q * cs - math.sqrt(disc)
    return (center_u + c, 0.0), (xi0 + t * cs, t * sn)


def _normal_embedding(setup: RiemannSetup) -> ReflectionSolution:
    ns = normal_state(setup.gas, setup.v2)
    c0 = float(sonic_speed(ns.rho0, setup.gas))
    if ns.eta0 >= c0:
        raise ConsistencyError("normal shock does not cut the sonic circle of state (0)")
    return ReflectionSolution(
        side=5,
        theta=0.0,
        xi_P0=AT_INFINITY,
        mach2=AT_INFINITY,
        turning_angle=0.0,
        weak=ns.state,
        strong=None,
        theta_2j=math.pi,
        a_2j=ns.eta0,
        theta_2j_strong=None,
        a_2j_strong=None,
        sonic_center=(0.0, 0.0),
        sonic_radius=c0,
        P_corner_wall=(c0, 0.0),
        P_corner_shock=(math.sqrt(c0 * c0 - ns.eta0**2), ns.eta0),
        supersonic_at_reflection=True,
    )


def _downstream_speed(gas: GasModel, m2: float, w: float, tau: float) -> float:
    # shock angle beta from tan(beta - w)/tan(beta) = 1/tau, then |q| from the
    # normal/tangential split; avoids cancelling M^2 - 2h(tau) on the strong branch.
    # The quadratic's two roots are told apart by the normal jump q_n^2 = 2 h tau^2/(tau^2 - 1).
    disc = math.sqrt(max((tau - 1.0) ** 2 - 4.0 * tau * w * w, 0.0))
    qn_target = 2.0 * float(enthalpy(tau, gas)) * tau * tau / (tau * tau - 1.0)
    best = None
    for tb in (((tau - 1.0) + disc) / (2.0 * w), 2.0 * tau * w / ((tau - 1.0) + disc)):
        qt_sq = m2 * m2 / (1.0 + tb * tb)
        qn_sq = qt_sq * tb * tb
        err = abs(qn_sq - qn_target)
        if best is None or err < best[0]:
            best = (err, qt_sq, qn_sq)
    _, qt_sq, qn_sq = best
    return math.sqrt(qt_sq + qn_sq / (tau * tau))


def _downstream(gas: GasModel, v2: float, xi0: float, m2: float, tau: float, w: float):
    q = _downstream_speed(gas, m2, w, tau)
    # xi0 - q without cancellation: xi0^2 - q^2 = 2 h(tau) - v2^2 by Bernoulli
    u = (2.0 * float(enthalpy(tau, gas)) - v2 * v2) / (xi0 + q)
    # q >= 0; rounding can push u past xi0 when q is below an ulp of xi0
    u = min(u, xi0)
    st = UniformState(tau, u, 0.0, -u * xi0)
    return st, q, _reflected_angle(u, v2), -xi0 * u / v2


def _solve_side5(setup: RiemannSetup) -> ReflectionSolution:
    gas, v2, theta = setup.gas, setup.v2, setup.theta1
    if theta == 0.0:
        return _normal_embedding(setup)
    xi0 = setup.xi_P01
    m2 = math.hypot(xi0, v2)
    if m2 <= 1.0:
        raise DetachmentError(f"state (2) is not pseudo-supersonic at P0 (M2={m2!r})")
    that = math.atan2(-v2, xi0)
    roots = SteadyPolar.build(gas, m2).roots(-v2 / xi0)
    if roots is None:
        raise DetachmentError(f"theta={theta!r} is beyond the detachment angle")
    w = -v2 / xi0
    weak, q5, th5, a5 = _downstream(gas, v2, xi0, m2, roots[0], w)
    critical = roots[0] == roots[1]
    if critical or roots[1] is None:
        strong, th_s, a_s = None, None, None
    else:
        strong, _, th_s, a_s = _downstream(gas, v2, xi0, m2, roots[1], w)
    c5 = float(sonic_speed(weak.rho, gas))
    supersonic = q5 > c5
    p_wall, p_shock = _corner_points(weak.u, c5, xi0, th5, supersonic)
    return ReflectionSolution(
        side=5,
        theta=theta,
        xi_P0=xi0,
        mach2=m2,
        turning_angle=that,
        weak=weak,
        strong=strong,
        theta_2j=th5,
        a_2j=a5,
        theta_2j_strong=th_s,
        a_2j_strong=a_s,
        sonic_center=(weak.u, 0.0),
        sonic_radius=c5,
        P_corner_wall=p_wall,
        P_corner_shock=p_shock,
        supersonic_at_reflection=supersonic,
        critical=critical,
    )


def solve_reflection(setup: RiemannSetup, side: int) -> ReflectionSolution:
    """Weak and strong reflected states at P0^1 (side 5) or P0^2 (side 6)."""
    if side == 5:
        return _solve_side5(setup)
    if side == 6:
        return _mirror(_solve_side5(setup.mirrored()))
    raise ValueError("side must be 5 or 6")


def reflection_residuals(
    setup: RiemannSetup, sol: ReflectionSolution, strong: bool = False, relative: bool = True
):
    """[phi], tangential [D phi], [rho D phi . nu] and the Bernoulli density mismatch at P0.

    With relative=True each jump is divided by the magnitude of the terms it combines
    (componentwise backward error); the absolute residual of a state stored as (rho, u)
    cannot beat eps * rho * |xi_P0|. The Bernoulli entry is always relative.
    """
    st = sol.strong if strong else sol.weak
    if st is None or sol.is_normal:
        raise ValueError("no state to check")
    p = (sol.xi_P0, 0.0)
    up = setup.U2
    gx2, gy2 = up.grad_phi(*p)
    gx, gy = st.grad_phi(*p)
    ang = sol.theta_2j_strong if strong else sol.theta_2j
    # unit normal of the reported shock line, pointing downstream-to-upstream
    nx, ny = -math.sin(ang), math.cos(ang)
    if nx * (gx2 - gx) + ny * (gy2 - gy) < 0.0:
        nx, ny = -nx, -ny
    rho_b = float(density_from_bernoulli(gx * gx + gy * gy, st.phi(*p), setup.gas))
    out = [
        abs(st.phi(*p) - up.phi(*p)),
        abs((gx - gx2) * -ny + (gy - gy2) * nx),
        abs(st.rho * (gx * nx + gy * ny) - (gx2 * nx + gy2 * ny)),
        abs(rho_b / st.rho - 1.0),
    ]
    if relative:
        x0, u = abs(sol.xi_P0), abs(st.u)
        out[0] /= 0.5 * x0 * x0 + u * x0 + abs(st.k)
        out[1] /= x0 + u + abs(setup.v2)
        out[2] /= st.rho * (x0 + u) + math.hypot(x0, setup.v2)
    return tuple(out)


@dataclass(frozen=True)
class SonicGeometry:
    center: tuple[float, float]
    radius: float
    P_wall: tuple[float, float]
    P_shock: tuple[float, float]
    arc: tuple[float, float]
    degenerate: bool

    def point(self, s: float) -> tuple[float, float]:
        """Arc point for s in [0, 1], from the wall corner to the shock corner."""
        if self.degenerate:
            return self.P_wall
        a = self.arc[0] + s * (self.arc[1] - self.arc[0])
        return (self.center[0] + self.radius * math.cos(a), self.radius * math.sin(a))


def sonic_geometry(solution: ReflectionSolution, setup: RiemannSetup) -> SonicGeometry:
    sol = solution
    c, (ox, _) = sol.sonic_radius, sol.sonic_center
    if not sol.supersonic_at_reflection:
        p0 = (sol.xi_P0, 0.0)
        if sol.P_corner_wall != p0 or sol.P_corner_shock != p0:
            raise ConsistencyError("degenerate sonic arc must collapse to the reflection point")
        return SonicGeometry(sol.sonic_center, c, p0, p0, (0.0, 0.0), True)
    pw, ps = sol.P_corner_wall, sol.P_corner_shock
    for p in (pw, ps):
        if abs(math.hypot(p[0] - ox, p[1]) - c) > 1e-9 * max(1.0, c):
            raise ConsistencyError("corner point off the sonic circle")
    a_shock = math.atan2(ps[1], ps[0] - ox)
    a_wall = 0.0 if pw[0] > ox else math.pi
    return SonicGeometry(sol.sonic_center, c, pw, ps, (a_wall, a_shock), False)


def _line(sol: ReflectionSolution, v2: float):
    # eta = slope * xi + a along S2j; slope = tan(theta_2j) = u_j / v2
    return sol.weak.u / v2, sol.a_2j


def intersection_PI(sol5: ReflectionSolution, sol6: ReflectionSolution, v2: float | None = None):
    if sol5.is_normal and sol6.is_normal:
        return 0.0, sol5.a_2j
    if v2 is None:
        raise ValueError("v2 required")
    u5, u6 = sol5.weak.u, sol6.weak.u
    if not (sol5.is_normal or sol6.is_normal):
        x1, x2 = sol5.xi_P0, sol6.xi_P0
        d = u5 - u6
        return (u5 * x1 - u6 * x2) / d, u5 * u6 * (x1 - x2) / (d * v2)
    s5, a5 = _line(sol5, v2)
    s6, a6 = _line(sol6, v2)
    xi = (a5 - a6) / (s6 - s5)
    return xi, s5 * xi + a5


@dataclass(frozen=True)
class CriticalAngles:
    theta_cr: float
    theta_plus: float
    theta_d: float
    theta_s: float
    plus_case: str  # "sonic": M2(theta_plus) = 1; "vacuum": theta_plus = theta_cr
    d_case: str  # "root" or "capped"
    s_case: str


def _gap(gas: GasModel, v2: float, theta: float, steady) -> float:
    return turning_angle(gas, v2, theta) - steady(gas, pseudo_mach(gas, v2, theta))


def _lower_bracket(f, hi: float) -> float:
    lo = 0.5 * hi
    while f(lo) >= 0.0:
        lo *= 0.5
        if lo < 1e-300:
            raise ConsistencyError("no sign change near theta = 0")
    return lo


def _critical_root(f, hi: float):
    if f(hi) <= 0.0:
        return hi, "capped"
    return find_root(f, _lower_bracket(f, hi), hi), "root"


def critical_angles(gas: GasModel, v2: float) -> CriticalAngles:
    v2 = check_v2(gas, v2)
    gas = GasModel.from_v2(gas.gamma, v2)
    th_cr = vacuum_critical_angle(gas, v2)
    if min_pseudo_mach(gas, v2) >= 1.0:
        th_plus, plus_case = th_cr, "vacuum"
    else:

        def fm(t):
            return 1.0 - pseudo_mach(gas, v2, t)

        th_plus = find_root(fm, _lower_bracket(fm, th_cr), th_cr)
        plus_case = "sonic"
    th_d, d_case = _critical_root(lambda t: _gap(gas, v2, t, detachment_angle_or_zero), th_plus)
    th_s, s_case = _critical_root(lambda t: _gap(gas, v2, t, sonic_angle_or_zero), th_d)
    return CriticalAngles(th_cr, th_plus, th_d, th_s, plus_case, d_case, s_case)


def _v2_gap(gas: GasModel, v2: float, steady) -> float:
    vm = v_min(gas)
    return math.acos(abs(v2 / vm)) - steady(gas, min_pseudo_mach(gas, v2))


def critical_v2(gas: GasModel) -> tuple[float, float]:
    """(v2^s, v2^d); both -inf for gamma = 1."""
    if gas.isothermal:
        return -math.inf, -math.inf
    vm = v_min(gas)
    v_mid = vm / math.sqrt(vm * vm + 1.0)
    out = []
    for steady in (sonic_angle_or_zero, detachment_angle_or_zero):

        def f(v2, steady=steady):
            return _v2_gap(gas, v2, steady)

        eps = 0.5
        while f(vm + eps * (v_mid - vm)) >= 0.0:
            eps *= 0.5
            if eps < 1e-300:
                raise ParameterDomainError("critical v2 not bracketed")
        out.append(find_root(f, vm + eps * (v_mid - vm), v_mid))
    return out[0], out[1]
