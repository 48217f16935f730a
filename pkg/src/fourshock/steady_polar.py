"""Shock polar of 2-D steady potential flow and its detachment and sonic angles.

The upstream state is normalized to rho_inf = 1, c_inf = 1, velocity (M_inf, 0), so
the polar is parametrized by the density ratio tau in [1, tau_bar]. Detachment and
sonic angles are evaluated primarily through their closed parametric forms in
tau_d / tau_s; the direct routes (root of the stationarity condition, or the
deflection formula at tau_s) are kept as independent cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._roots import expand_upper, find_root
from .errors import DomainError, SubsonicUpstreamError
from .thermo import GasModel

# past this density ratio the isothermal formulas switch to 1/tau-scaled forms
_BIG_TAU = 1e6
_LOG_MAX = 700.0
# tau**2 overflows past this; strong roots beyond it are not representable
_TAU_SQUARE_MAX = 1e150


def _check_mach(mach_inf: float) -> float:
    m = float(mach_inf)
    if not m > 1.0:
        raise SubsonicUpstreamError(f"upstream Mach number must exceed 1, got {m!r}")
    return m


def _h_parts(tau: float, gas: GasModel):
    """(h, h', h/(tau-1)) at tau >= 1, with the quotient finite at tau = 1."""
    d = tau - 1.0
    if gas.isothermal:
        h = math.log1p(d) if d < 1.0 else math.log(tau)
        hp = 1.0 / tau
    else:
        g = gas.gm1
        h = math.expm1(g * math.log1p(d)) / g
        hp = tau ** (gas.gamma - 2.0)
    quot = h / d if d != 0.0 else 1.0
    return h, hp, quot


def max_density_ratio(gas: GasModel, mach_inf: float) -> float:
    """tau_bar > 1 where the polar meets the normal-shock point v = 0."""
    m2 = _check_mach(mach_inf) ** 2

    def reduced(tau):
        # (M^2 (1 - tau^-2) - 2 h(tau)) / (tau - 1)
        _, _, quot = _h_parts(tau, gas)
        return m2 * (tau + 1.0) / (tau * tau) - 2.0 * quot

    hi = expand_upper(reduced, 1.0, 2.0)
    return find_root(reduced, 1.0, hi)


def tau_bar_residual(tau_bar: float, gas: GasModel, mach_inf: float) -> float:
    h, _, _ = _h_parts(tau_bar, gas)
    return mach_inf**2 * (1.0 - tau_bar**-2) - 2.0 * h


def _check_tau(tau: float, gas: GasModel, mach_inf: float) -> tuple[float, float]:
    tau = float(tau)
    tau_bar = max_density_ratio(gas, mach_inf)
    if tau < 1.0 or tau > tau_bar * (1.0 + 1e-12):
        raise DomainError(f"tau={tau!r} outside [1, {tau_bar!r}]")
    return min(tau, tau_bar), tau_bar


def _deflection_unchecked(tau: float, gas: GasModel, m2: float) -> float:
    h, _, _ = _h_parts(tau, gas)
    inner = m2 * (1.0 - 1.0 / (tau * tau)) - 2.0 * h
    inner = max(inner, 0.0)
    # denominator M^2 (1 + 1/tau) - 2h rewritten as inner + M^2 (tau + 1)/tau^2
    return math.sqrt(2.0 * h) * math.sqrt(inner) / (inner + m2 * (tau + 1.0) / (tau * tau))


def deflection(tau: float, gas: GasModel, mach_inf: float) -> float:
    """Tangent w = v/u of the flow deflection across the shock with density ratio tau."""
    m = _check_mach(mach_inf)
    tau, _ = _check_tau(tau, gas, m)
    return _deflection_unchecked(tau, gas, m * m)


def downstream_state(tau: float, gas: GasModel, mach_inf: float) -> tuple[float, float, float]:
    """Downstream (u, v, rho) for upstream (1, M_inf, 0); v >= 0 branch."""
    m = _check_mach(mach_inf)
    tau, _ = _check_tau(tau, gas, m)
    return _downstream_unchecked(tau, gas, m)


def _downstream_unchecked(tau: float, gas: GasModel, m: float) -> tuple[float, float, float]:
    h, _, _ = _h_parts(tau, gas)
    u = m - 2.0 * h * tau / ((tau + 1.0) * m)
    v2 = m * m - u * u - 2.0 * h
    return u, math.sqrt(max(v2, 0.0)), tau


def normal_jump_sq(s: float, gas: GasModel) -> float:
    """Upstream normal Mach squared 2 h tau^2/(tau^2 - 1) for tau = exp(s) >= 1."""
    if s == 0.0:
        return 1.0
    den = -math.expm1(-2.0 * s)
    if gas.isothermal:
        return 2.0 * s / den
    return 2.0 * math.expm1(gas.gm1 * s) / (gas.gm1 * den)


def density_log_from_normal(qn: float, gas: GasModel) -> float:
    """ln(tau) of the shock with upstream normal Mach qn >= 1."""
    target = qn * qn
    if target <= 1.0:
        return 0.0

    def f(s):
        return normal_jump_sq(s, gas) - target

    return find_root(f, 0.0, expand_upper(f, 0.0, 1.0))


# --- detachment -----------------------------------------------------------


def detachment_parametric(tau_d: float, gas: GasModel) -> tuple[float, float]:
    """(w_d, M_inf^2) as functions of the detachment density ratio tau_d >= 1."""
    tau = float(tau_d)
    if tau < 1.0:
        raise DomainError("tau_d must be >= 1")
    if gas.isothermal and tau > _BIG_TAU:
        return _isothermal_detachment_log(math.log(tau))
    h, hp, quot = _h_parts(tau, gas)
    tp1 = tau + 1.0
    m2 = 2.0 * quot * (2.0 * h + tau * tp1 * hp) / (2.0 * quot + tp1 * hp)
    a = max(tau * (tau * tau - 1.0) * hp - 2.0 * h, 0.0)
    b = (tau * tau - 1.0) * hp + 2.0 * h
    w = 0.5 * math.sqrt(a) * math.sqrt(b) / (tau * tp1 * hp + h)
    return w, m2


def _isothermal_detachment_log(s: float) -> tuple[float, float]:
    # gamma = 1, large tau_d = exp(s): every term scaled by e = 1/tau_d
    e = math.exp(-s)
    m2 = 2.0 * s * (2.0 * s * e + 1.0 + e) / (2.0 * s * e + 1.0 - e * e)
    root_tau = math.exp(0.5 * s) if s < 1400.0 else math.inf
    w = (
        0.5
        * root_tau
        * math.sqrt(max(1.0 - e * e - 2.0 * s * e * e, 0.0))
        * math.sqrt(1.0 - e * e + 2.0 * s * e)
        / (1.0 + e + s * e)
    )
    return w, m2


def _detachment_parametric_log(s: float, gas: GasModel) -> tuple[float, float]:
    if gas.isothermal and s > math.log(_BIG_TAU):
        return _isothermal_detachment_log(s)
    return detachment_parametric(math.exp(s), gas)


def detachment_log_tau(gas: GasModel, mach_inf: float) -> float:
    """ln(tau_d); finite even where tau_d itself overflows (gamma = 1, M_inf of order 40)."""
    m2 = _check_mach(mach_inf) ** 2
    if not gas.isothermal:
        return math.log(detachment_tau(gas, mach_inf))

    def f(s):
        return _detachment_parametric_log(s, gas)[1] - m2

    hi = expand_upper(f, 0.0, 1.0)
    return find_root(f, 0.0, hi)


def detachment_tau(gas: GasModel, mach_inf: float) -> float:
    """tau_d by inverting the monotone parametric relation M_inf^2(tau_d); inf if unrepresentable."""
    m2 = _check_mach(mach_inf) ** 2

    if gas.isothermal:
        # work in s = ln(tau_d); tau_d grows like exp(M^2/2)
        s = detachment_log_tau(gas, mach_inf)
        return math.exp(s) if s < _LOG_MAX else math.inf

    def f(tau):
        return detachment_parametric(tau, gas)[1] - m2

    hi = expand_upper(f, 1.0, 2.0)
    return find_root(f, 1.0, hi)


def detachment_residual(tau: float, gas: GasModel, mach_inf: float) -> float:
    """Stationarity condition dw/dtau = 0 written as a polynomial identity in h, h'."""
    h, hp, _ = _h_parts(tau, gas)
    m2 = mach_inf**2
    return m2 * (2.0 * h + (tau * tau - 1.0) * hp) - 2.0 * h * (2.0 * h + tau * (tau + 1.0) * hp)


def detachment_tau_direct(gas: GasModel, mach_inf: float) -> float:
    """tau_d as the nontrivial root in (1, tau_bar) of the stationarity condition."""
    m = _check_mach(mach_inf)
    m2 = m * m
    tau_bar = max_density_ratio(gas, m)

    def reduced(tau):
        h, hp, quot = _h_parts(tau, gas)
        return m2 * (2.0 * quot + (tau + 1.0) * hp) - 2.0 * quot * (2.0 * h + tau * (tau + 1.0) * hp)

    return find_root(reduced, 1.0, tau_bar)


def detachment_angle_steady(gas: GasModel, mach_inf: float) -> float:
    """Steady detachment angle arctan(max w) via the parametric route."""
    m = _check_mach(mach_inf)
    if gas.isothermal and m * m > 2.0 * math.log(_BIG_TAU):
        m2 = m * m

        def f(s):
            return _detachment_parametric_log(s, gas)[1] - m2

        hi = expand_upper(f, 0.0, 1.0)
        w, _ = _detachment_parametric_log(find_root(f, 0.0, hi), gas)
        return math.atan(w)
    w, _ = detachment_parametric(detachment_tau(gas, m), gas)
    return math.atan(w)


def detachment_angle_steady_direct(gas: GasModel, mach_inf: float) -> float:
    """Same angle via the stationarity root and the deflection formula."""
    m = _check_mach(mach_inf)
    tau_d = detachment_tau_direct(gas, m)
    return math.atan(_deflection_unchecked(tau_d, gas, m * m))


# --- sonic ------------------------------------------------------------------


def sonic_tau(gas: GasModel, mach_inf: float) -> float:
    """Density ratio at which the downstream flow is exactly sonic."""
    m = _check_mach(mach_inf)
    x = m * m - 1.0
    if gas.isothermal:
        return math.exp(0.5 * x)
    g = gas.gm1
    return math.exp(math.log1p(g * x / (gas.gamma + 1.0)) / g)


def sonic_parametric(tau_s: float, gas: GasModel) -> tuple[float, float]:
    """(w_s, M_inf^2) as functions of the sonic density ratio tau_s >= 1."""
    tau = float(tau_s)
    if tau < 1.0:
        raise DomainError("tau_s must be >= 1")
    if gas.isothermal:
        s = math.log(tau)
        m2 = 1.0 + 2.0 * s
        if tau > _BIG_TAU:
            return _isothermal_sonic_log(s), m2
        h = s
        tg = 1.0
    else:
        h, _, _ = _h_parts(tau, gas)
        m2 = 1.0 + (gas.gamma + 1.0) * h
        tg = tau**gas.gm1
    inner = max((tau * tau - 1.0) * tg - 2.0 * h, 0.0)
    w = math.sqrt(2.0 * h) * math.sqrt(inner) / ((tau + 1.0) * tg + 2.0 * h)
    return w, m2


def _isothermal_sonic_log(s: float) -> float:
    e = math.exp(-s)
    num = math.sqrt(2.0 * s) * math.sqrt(max(1.0 - e * e - 2.0 * s * e * e, 0.0))
    return num / (1.0 + e + 2.0 * s * e)


def sonic_angle_steady(gas: GasModel, mach_inf: float) -> float:
    """Steady sonic angle via the parametric route."""
    m = _check_mach(mach_inf)
    if gas.isothermal and m * m > 1.0 + 2.0 * math.log(_BIG_TAU):
        return math.atan(_isothermal_sonic_log(0.5 * (m * m - 1.0)))
    w, _ = sonic_parametric(sonic_tau(gas, m), gas)
    return math.atan(w)


def sonic_angle_steady_direct(gas: GasModel, mach_inf: float) -> float:
    """Same angle via the deflection formula evaluated at tau_s."""
    m = _check_mach(mach_inf)
    return math.atan(_deflection_unchecked(sonic_tau(gas, m), gas, m * m))


def detachment_angle_or_zero(gas: GasModel, mach_inf: float) -> float:
    """Detachment angle extended by 0 for M_inf <= 1."""
    return 0.0 if mach_inf <= 1.0 else detachment_angle_steady(gas, mach_inf)


def sonic_angle_or_zero(gas: GasModel, mach_inf: float) -> float:
    return 0.0 if mach_inf <= 1.0 else sonic_angle_steady(gas, mach_inf)


# --- polar as an object -------------------------------------------------------


@dataclass(frozen=True)
class SteadyPolar:
    gas: GasModel
    mach_inf: float
    tau_bar: float

    @classmethod
    def build(cls, gas: GasModel, mach_inf: float) -> "SteadyPolar":
        try:
            tau_bar = max_density_ratio(gas, mach_inf)
        except ValueError:
            # gamma = 1 with tau_bar beyond double range
            tau_bar = math.inf
        return cls(gas, float(mach_inf), tau_bar)

    def deflection(self, tau: float) -> float:
        tau = min(float(tau), self.tau_bar)
        if tau < 1.0:
            raise DomainError("tau must be >= 1")
        return _deflection_unchecked(tau, self.gas, self.mach_inf**2)

    def downstream(self, tau: float) -> tuple[float, float, float]:
        tau = min(float(tau), self.tau_bar)
        if tau < 1.0:
            raise DomainError("tau must be >= 1")
        return _downstream_unchecked(tau, self.gas, self.mach_inf)

    def tau_d(self) -> float:
        return detachment_tau(self.gas, self.mach_inf)

    def max_deflection(self) -> float:
        s = detachment_log_tau(self.gas, self.mach_inf)
        return _detachment_parametric_log(s, self.gas)[0]

    def roots(self, w_target: float) -> tuple[float, float | None] | None:
        """Weak and strong tau with w(tau) = w_target, or None beyond detachment.

        A target within 1e-10 of the polar maximum returns the double root (tau_d, tau_d).
        The strong root is None when the polar between tau_d and tau_bar is not resolvable
        in double precision (gamma = 1 at large M_inf only).
        """
        tau_d = min(self.tau_d(), self.tau_bar)
        w_max = self.max_deflection()
        if w_target > w_max + 1e-10:
            return None
        if w_target >= w_max - 1e-10:
            return tau_d, tau_d

        def f(tau):
            return self.deflection(tau) - w_target

        # grow from tau = 1; for gamma = 1 at large M the top of the polar is not resolvable
        hi = 2.0
        while hi < tau_d and f(hi) < 0.0:
            hi *= 2.0
        hi = min(hi, tau_d)
        weak = find_root(f, 1.0, hi)
        return weak, self._strong_root(w_target, tau_d, weak)

    def _strong_root(self, w_target: float, tau_d: float, tau_weak: float) -> float | None:
        # solve in delta = pi/2 - beta (beta: shock angle to the upstream flow),
        # tan(delta + w)/tan(delta) = tau(M cos delta); well conditioned near the normal shock
        m = self.mach_inf
        that = math.atan(w_target)

        def g(delta):
            s = density_log_from_normal(m * math.cos(delta), self.gas)
            return math.log(math.tan(delta + that) / math.tan(delta)) - s

        def delta_of(tau):
            n = normal_jump_sq(math.log(tau), self.gas) if tau < _TAU_SQUARE_MAX else math.inf
            return math.acos(math.sqrt(n) / m) if n < m * m else 0.0

        hi = delta_of(tau_d)
        if hi > 1e-150:
            if g(hi) >= 0.0:
                return tau_d
        else:
            # tau_d and tau_bar coincide in double precision; step down from the weak shock angle
            hi = delta_of(tau_weak)
            while hi > 1e-150 and g(hi) >= 0.0:
                hi *= 0.5
            if hi <= 1e-150:
                return None
        lo = 0.5 * hi
        while g(lo) <= 0.0:
            lo *= 0.5
            if lo < 1e-300:
                return None
        s = density_log_from_normal(m * math.cos(find_root(g, lo, hi)), self.gas)
        return math.exp(s) if s < 0.5 * _LOG_MAX else None

    def sample(self, n: int = 1000) -> np.ndarray:
        """(tau, u, v, w) rows on a uniform tau grid over [1, tau_bar]."""
        taus = np.linspace(1.0, self.tau_bar, n)
        rows = []
        for t in taus:
            u, v, _ = self.downstream(t)
            rows.append((t, u, v, v / u))
        return np.array(rows)
