"""Named property suites; each returns per-check results with residuals."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import fv_sim as fv
from .local_reflection import (
    critical_angles,
    critical_v2,
    intersection_PI,
    normal_state,
    reflection_residuals,
    solve_reflection,
)
from .riemann_setup import (
    build_states,
    min_pseudo_mach,
    pseudo_mach,
    solve_compatibility,
    turning_angle,
    v_min,
    vacuum_critical_angle,
)
from .steady_polar import (
    SteadyPolar,
    detachment_angle_steady,
    detachment_angle_steady_direct,
    detachment_parametric,
    detachment_tau,
    detachment_tau_direct,
    max_density_ratio,
    sonic_angle_steady,
    sonic_angle_steady_direct,
    sonic_tau,
)
from .thermo import GasModel, ell


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    tol: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name}  value={self.value:.3e}  tol={self.tol:.1e}"


def _rel(got: float, want: float) -> float:
    return abs(got - want) / max(abs(want), 1e-300)


def _le(name, value, tol) -> Check:
    return Check(name, bool(value <= tol), float(value), float(tol))


def _true(name, ok, value=0.0) -> Check:
    return Check(name, bool(ok), float(value), 0.0)


def _timed(checks: list[Check], t0: float, budget: float) -> list[Check]:
    return checks + [_le("runtime_s", time.perf_counter() - t0, budget)]


# --- 1 -----------------------------------------------------------------------


def closed_form() -> list[Check]:
    t0 = time.perf_counter()
    tol = 1e-10
    g2 = GasModel(2.0)
    out = [
        _le("ell(2,1;2) = sqrt(2/3)", _rel(ell(2.0, 1.0, g2), math.sqrt(2 / 3)), tol),
        _le("theta_cr(2,-1) = pi/4", _rel(vacuum_critical_angle(g2, -1.0), math.pi / 4), tol),
        _le("rho1(2,-0.5,45deg) = (9-sqrt33)/8",
            _rel(solve_compatibility(g2, -0.5, math.pi / 4), (9 - math.sqrt(33)) / 8), tol),
    ]
    setup = build_states(g2, -0.5, math.pi / 4, math.pi / 4)
    r1 = (9 - math.sqrt(33)) / 8
    out.append(_le("xi_P01 = (1+rho1)/(2(1-rho1))", _rel(setup.xi_P01, 0.5 * (1 + r1) / (1 - r1)), tol))
    # the six printed digits are truncated, not rounded
    out.append(_le("xi_P01 ~ 1.186140 (printed digits)", abs(setup.xi_P01 - 1.186140), 1e-6))
    ns = normal_state(g2, -math.sqrt(2 / 3))
    out.append(_le("rho0 = 2", _rel(ns.rho0, 2.0), tol))
    out.append(_le("eta0 = sqrt(2/3)", _rel(ns.eta0, math.sqrt(2 / 3)), tol))
    out.append(_le("tau_bar(2,2) = 1+sqrt3", _rel(max_density_ratio(g2, 2.0), 1 + math.sqrt(3)), tol))
    out.append(_le("tau_s(2,2) = 2", _rel(sonic_tau(g2, 2.0), 2.0), tol))
    out.append(_le("theta_s_stdy(2,2) = atan(sqrt2/4)",
                   _rel(sonic_angle_steady(g2, 2.0), math.atan(math.sqrt(2) / 4)), tol))
    m_d = math.sqrt(3.2)
    out.append(_le("tau_d(M^2=3.2) = 2", _rel(detachment_tau(g2, m_d), 2.0), tol))
    out.append(_le("M^2(tau_d=2) = 3.2", _rel(detachment_parametric(2.0, g2)[1], 3.2), tol))
    out.append(_le("theta_d_stdy(M^2=3.2) = atan(sqrt5/7)",
                   _rel(detachment_angle_steady(g2, m_d), math.atan(math.sqrt(5) / 7)), tol))
    return _timed(out, t0, 1.0)


# --- 2 -----------------------------------------------------------------------

MONO_GAMMAS = (1.0, 1.2, 1.4, 2.0, 3.0)
MONO_PAIRS = ((1.4, -0.3), (2.0, -0.5), (1.0, -0.8))


def _strict(seq, increasing: bool) -> bool:
    d = np.diff(np.asarray(seq, float))
    return bool(np.all(d > 0) if increasing else np.all(d < 0))


def polar_monotonicity(n: int = 300) -> list[Check]:
    t0 = time.perf_counter()
    machs = np.geomspace(1.01, 50.0, n)
    out = []
    for gm in MONO_GAMMAS:
        gas = GasModel(gm)
        d = [detachment_angle_steady(gas, m) for m in machs]
        wd = [SteadyPolar.build(gas, m).max_deflection() for m in machs]
        s = [sonic_angle_steady(gas, m) for m in machs]
        # for gamma = 1 theta_d is within 1 ulp of pi/2 past M ~ 12; tan(theta_d) still resolves it
        out.append(_true(f"theta_d_stdy nondecreasing (gamma={gm})", bool(np.all(np.diff(d) >= 0))))
        out.append(_true(f"tan theta_d_stdy increasing (gamma={gm})", _strict(wd, True), np.min(np.diff(wd))))
        out.append(_true(f"theta_s_stdy increasing (gamma={gm})", _strict(s, True), np.min(np.diff(s))))
    return _timed(out, t0, 10.0)


def monotonicity() -> list[Check]:
    t0 = time.perf_counter()
    out = polar_monotonicity()[:-1]
    for gm, v2 in MONO_PAIRS:
        gas = GasModel(gm)
        th_cr = vacuum_critical_angle(gas, v2)
        thetas = np.linspace(1e-3, th_cr - 1e-3, 200)
        m2 = [pseudo_mach(gas, v2, t) for t in thetas]
        out.append(_true(f"M2 decreasing (gamma={gm}, v2={v2})", _strict(m2, False)))
        ca = critical_angles(gas, v2)
        grid = np.linspace(0.0, ca.theta_d, 102)[1:-1]
        th25, a25 = [], []
        for t in grid:
            sol = solve_reflection(build_states(gas, v2, t, t), 5)
            th25.append(sol.theta_2j)
            a25.append(sol.a_2j)
        out.append(_true(f"theta_25 decreasing (gamma={gm}, v2={v2})", _strict(th25, False)))
        out.append(_true(f"a_25 increasing (gamma={gm}, v2={v2})", _strict(a25, True)))
        grid_s = np.linspace(0.0, ca.theta_s, 102)[1:-1]
        eta2 = [solve_reflection(build_states(gas, v2, t, t), 5).P_corner_shock[1] for t in grid_s]
        out.append(_true(f"eta_P2 decreasing on (0, theta_s) (gamma={gm}, v2={v2})", _strict(eta2, False)))
    return _timed(out, t0, 10.0)


# --- 3 -----------------------------------------------------------------------


def limits() -> list[Check]:
    t0 = time.perf_counter()
    out = []
    for gm in (1.4, 2.0, 3.0):
        gas = GasModel(gm)
        out.append(_le(f"|theta_d_stdy(1e4) - pi/2| (gamma={gm})",
                       abs(detachment_angle_steady(gas, 1e4) - math.pi / 2), 1e-3))
        out.append(_le(f"|theta_s_stdy(1e4) - atan sqrt(2/(gamma-1))| (gamma={gm})",
                       abs(sonic_angle_steady(gas, 1e4) - math.atan(math.sqrt(2 / (gm - 1)))), 1e-3))
        out.append(_le(f"theta_s_stdy(1+1e-6) (gamma={gm})", sonic_angle_steady(gas, 1 + 1e-6), 1e-2))
    return _timed(out, t0, 1.0)


# --- 4 -----------------------------------------------------------------------


def reflection_samples(n: int = 100, seed: int = 20240501):
    """Reproducible admissible (gamma, v2, theta1) with gamma in [1.2, 3], theta1 in (0, theta_d)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        gm = float(rng.uniform(1.2, 3.0))
        gas = GasModel(gm)
        lo = max(v_min(gas), -3.0)
        v2 = float(lo * rng.uniform(0.02, 0.98))
        ca = critical_angles(gas, v2)
        out.append((gm, v2, float(ca.theta_d * rng.uniform(0.01, 0.99))))
    return out


def reflection_algebra(n: int = 100) -> list[Check]:
    t0 = time.perf_counter()
    worst = 0.0
    order_ok = speed_ok = slip_ok = angle_ok = True
    for gm, v2, th in reflection_samples(n):
        gas = GasModel(gm)
        setup = build_states(gas, v2, th, th)
        sol = solve_reflection(setup, 5)
        if sol.strong is None:
            order_ok = False
            continue
        for strong in (False, True):
            worst = max(worst, max(reflection_residuals(setup, sol, strong)[:3]))
        order_ok &= 1.0 < sol.weak.rho < sol.strong.rho
        # xi_P0 - u_sg can fall below one ulp of xi_P0 when rho_sg is huge
        speed_ok &= 0.0 < sol.weak.u < sol.strong.u <= sol.xi_P0
        slip_ok &= sol.weak.v == 0.0 and sol.strong.v == 0.0
        that = turning_angle(gas, v2, th)
        angle_ok &= math.pi / 2 + that < sol.theta_2j <= math.pi
    out = [
        _le("RH residuals (both branches, relative)", worst, 1e-11),
        _true("1 < rho_wk < rho_sg", order_ok),
        _true("0 < u_wk < u_sg <= xi_P0", speed_ok),
        _true("slip v = 0 exactly", slip_ok),
        _true("pi/2 + theta_hat < theta_25 <= pi", angle_ok),
    ]
    gas = GasModel(2.0)
    v2 = -0.5
    ns = normal_state(gas, v2)
    sol = solve_reflection(build_states(gas, v2, 1e-5, 1e-5), 5)
    lim = max(abs(sol.weak.rho - ns.rho0), abs(sol.weak.u), abs(sol.weak.u * sol.xi_P0 + v2 * ns.eta0))
    out.append(_le("weak state at theta=1e-5 vs normal state", lim, 1e-3))
    return _timed(out, t0, 30.0)


# --- 5 -----------------------------------------------------------------------


def _pattern(ca) -> str:
    if ca.theta_s == ca.theta_d == ca.theta_cr:
        return "s=d=cr"
    if ca.theta_s < ca.theta_d == ca.theta_cr:
        return "s<d=cr"
    if ca.theta_s < ca.theta_d < ca.theta_cr:
        return "s<d<cr"
    return "other"


def trichotomy(gammas=(1.4, 2.0, 3.0), per_interval: int = 5) -> list[Check]:
    t0 = time.perf_counter()
    out = []
    for gm in gammas:
        gas = GasModel(gm)
        vm = v_min(gas)
        v2s, v2d = critical_v2(gas)
        ok = vm < v2s < v2d < 0.0
        bins = (((vm, v2s), "s=d=cr"), ((v2s, v2d), "s<d=cr"), ((v2d, 0.0), "s<d<cr"))
        for (a, b), want in bins:
            for f in np.linspace(0.0, 1.0, per_interval + 2)[1:-1]:
                ok &= _pattern(critical_angles(gas, a + f * (b - a))) == want
        # the closed right end of the first interval
        ok &= _pattern(critical_angles(gas, v2s)) in ("s=d=cr",)
        out.append(_true(f"critical-angle equality pattern (gamma={gm})", ok))
    gas = GasModel(2.0)
    v2 = -math.sqrt(2 / 3)
    eta0 = normal_state(gas, v2).eta0
    errs = []
    for k in range(2, 7):
        t = 10.0**-k
        s = build_states(gas, v2, t, 2 * t)
        p = intersection_PI(solve_reflection(s, 5), solve_reflection(s, 6), v2)
        errs.append(math.hypot(p[0], p[1] - eta0))
    out.append(_true("P_I -> (0, eta0) with decreasing error, k=2..6", _strict(errs, False), errs[-1]))
    return _timed(out, t0, 30.0)


# --- 6 -----------------------------------------------------------------------


def dual_route() -> list[Check]:
    t0 = time.perf_counter()
    machs = np.linspace(1.05, 8.0, 60)
    wd = wtau = ws = 0.0
    for gm in MONO_GAMMAS:
        gas = GasModel(gm)
        for m in machs:
            wtau = max(wtau, _rel(detachment_tau_direct(gas, m), detachment_tau(gas, m)))
            wd = max(wd, abs(detachment_angle_steady_direct(gas, m) - detachment_angle_steady(gas, m)))
            ws = max(ws, abs(sonic_angle_steady_direct(gas, m) - sonic_angle_steady(gas, m)))
    out = [
        _le("detachment tau: stationarity root vs parametric inversion (rel)", wtau, 1e-10),
        _le("detachment angle: stationarity root vs parametric", wd, 1e-10),
        _le("sonic angle: tau_s + deflection vs parametric", ws, 1e-12),
    ]
    return _timed(out, t0, 5.0)


# --- 7 -----------------------------------------------------------------------

FV_NORMAL = dict(gamma=2.0, v2=-math.sqrt(2 / 3), half_width=2.0, height=2.0)


def fv_normal_run(nx: int):
    p = FV_NORMAL
    gas = GasModel(p["gamma"])
    setup = build_states(gas, p["v2"], 0.0, 0.0)
    grid = fv.FvGrid.symmetric(nx, nx // 2, p["half_width"], p["height"])
    field, rec = fv.run(setup, grid, fv.SimConfig())
    ss = fv.extract_selfsimilar(field, grid)
    near = np.abs(ss.xi) < 0.3
    wall = float(np.mean(ss.rho[near, 0]))
    line = fv.detect_reflected_shock(ss, 5, (-0.3, 0.3))
    return setup, grid, rec, wall, line


def fv_normal(nx: int = 400, refine: bool = True) -> list[Check]:
    t0 = time.perf_counter()
    ns = normal_state(GasModel(FV_NORMAL["gamma"]), FV_NORMAL["v2"])
    _, grid, rec, wall, line = fv_normal_run(nx)
    err = abs(wall - ns.rho0) / ns.rho0
    out = [
        _le(f"wall density vs rho0 at {nx}x{nx // 2} (rel)", err, 0.03),
        _le("fitted shock height vs eta0 (cells)", abs(line.intercept - ns.eta0) / grid.dy, 2.0),
        _le("fitted shock angle vs pi", abs(line.angle - math.pi), 2.0 * grid.dy),
        _le("mass drift (rel)", rec.mass_drift, 1e-10),
        _true("entropy: density increases across the front", line.entropy_ok),
        _true("positivity", rec.min_rho > 0.0, rec.min_rho),
    ]
    checks = _timed(out, t0, 120.0)
    if refine:
        t1 = time.perf_counter()
        errs = []
        for n in (200, 400, 800):
            wall_n = wall if n == nx else fv_normal_run(n)[3]
            errs.append(abs(wall_n - ns.rho0))
        checks.append(_true("wall error decreases over 200, 400, 800", _strict(errs, False), errs[-1]))
        checks.append(_le("refinement runtime_s", time.perf_counter() - t1, 900.0))
    return checks


# --- 8 -----------------------------------------------------------------------

FV_CASE1 = dict(gamma=1.4, v2=-0.4, fraction_of_theta_s=0.7, half_width=3.0, height=3.0)


def fv_case1(nx: int = 800) -> list[Check]:
    t0 = time.perf_counter()
    p = FV_CASE1
    gas = GasModel(p["gamma"])
    ca = critical_angles(gas, p["v2"])
    th = p["fraction_of_theta_s"] * ca.theta_s
    setup = build_states(gas, p["v2"], th, th)
    grid = fv.FvGrid.symmetric(nx, nx // 2, p["half_width"], p["height"])
    field, rec = fv.run(setup, grid, fv.SimConfig())
    ss = fv.extract_selfsimilar(field, grid)
    out = []
    entropy = rec.min_rho > 0.0
    for side in (5, 6):
        sol = solve_reflection(setup, side)
        P0 = np.array([sol.xi_P0, 0.0])
        P1, P2 = np.array(sol.P_corner_wall), np.array(sol.P_corner_shock)
        rho = fv.region_mean(ss, [P0, P0 + 0.5 * (P1 - P0), P0 + 0.5 * (P2 - P0)])
        out.append(_le(f"density behind S2{side} vs rho_{side}^wk (rel)", abs(rho - sol.weak.rho) / sol.weak.rho, 0.05))
        x0, x2 = P0[0], P2[0]
        win = sorted((x2 + 0.15 * (x0 - x2), x0 - 0.15 * (x0 - x2)))
        line = fv.detect_reflected_shock(ss, side, tuple(win), (0.0, 1.5))
        out.append(_le(f"fitted theta_2{side} vs theta_2{side}", abs(line.angle - sol.theta_2j), 0.02))
        entropy &= line.entropy_ok
        # the visible part of the incident shock: right of P0, below the far-field edge
        sgn = 1.0 if side == 5 else -1.0
        eta_top = 0.9 * (p["half_width"] - abs(sol.xi_P0)) * math.tan(th)
        xr = (sgn * (abs(sol.xi_P0) - 0.05), sgn * (p["half_width"] - 0.1))
        inc = fv.detect_incident_shock(ss, side - 4, (0.1 * eta_top, eta_top), xr)
        entropy &= inc.entropy_ok
    out.append(_true("entropy: density increases across every detected front", entropy))
    out.append(_le("mirror symmetry error", fv.mirror_error(field), 1e-12))
    out.append(_le("mass drift (rel)", rec.mass_drift, 1e-10))
    return _timed(out, t0, 900.0)


SUITES = {
    "closed-form": closed_form,
    "monotonicity": monotonicity,
    "polar-monotonicity": polar_monotonicity,
    "limits": limits,
    "reflection-algebra": reflection_algebra,
    "trichotomy": trichotomy,
    "dual-route": dual_route,
    "fv-normal": fv_normal,
    "fv-case1": fv_case1,
}
