"""First-order finite-volume solver for the gradient form of potential flow.

Unknowns are (rho, u, v) with (u, v) = grad Phi:

    rho_t + div(rho q) = 0,    q_t + grad(|q|^2/2 + h(rho)) = 0.

The domain is [x_lo, x_hi] x [0, y_hi] with a slip wall at y = 0. The other edges
take ghost values from the self-similar background at xi = x/t.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import DetectionError, SimulationAbort
from .local_reflection import normal_state
from .riemann_setup import RiemannSetup, UniformState
from .thermo import GasModel

NG = 2


@dataclass(frozen=True)
class FvGrid:
    nx: int
    ny: int
    x_lo: float
    x_hi: float
    y_hi: float

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2 or not self.x_hi > self.x_lo or not self.y_hi > 0.0:
            raise ValueError("degenerate grid")

    @classmethod
    def symmetric(cls, nx: int, ny: int, half_width: float, height: float) -> "FvGrid":
        return cls(nx, ny, -half_width, half_width, height)

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.nx

    @property
    def dy(self) -> float:
        return self.y_hi / self.ny

    def centers(self, ghost: int = 0):
        # built about the midpoint so that a symmetric grid has x(-i) == -x(i) bitwise
        mid = 0.5 * (self.x_lo + self.x_hi)
        i = np.arange(-ghost, self.nx + ghost, dtype=float)
        j = np.arange(-ghost, self.ny + ghost, dtype=float)
        x = mid + (i + 0.5 - 0.5 * self.nx) * self.dx
        y = (j + 0.5) * self.dy
        return x, y


@dataclass
class FvField:
    rho: np.ndarray
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def copy(self) -> "FvField":
        return FvField(self.rho.copy(), self.u.copy(), self.v.copy(), self.t)


@dataclass(frozen=True)
class SimConfig:
    cfl: float = 0.45
    t_final: float = 1.0
    max_retries: int = 10
    flux: str = "rusanov"
    wall: str = "slip"
    far_field: str = "background"

    def __post_init__(self):
        if not 0.0 < self.cfl < 1.0:
            raise ValueError("cfl must lie in (0, 1)")
        if self.flux != "rusanov":
            raise ValueError("only the local-max-speed flux is implemented")


# --- background and initial data ----------------------------------------


class Background:
    """Self-similar data outside the interaction region, side by side.

    Right half (xi > 0) uses states (1), (2); left half uses (3), (2). A side with zero
    incident angle also carries the normal-reflection state (0), which extends to infinity
    along the wall. The value is the state minimizing the pseudo-potential.
    """

    def __init__(self, setup: RiemannSetup):
        self.setup = setup
        ns = normal_state(setup.gas, setup.v2).state
        right = [setup.U1, setup.U2] + ([ns] if setup.theta1 == 0.0 else [])
        left = [setup.U3, setup.U2] + ([ns] if setup.theta2 == 0.0 else [])
        self.sides = (right, left)

    @staticmethod
    def _pick(states: list[UniformState], x, eta):
        best = None
        out = [np.empty_like(x) for _ in range(3)]
        for st in states:
            phi = -0.5 * (x * x + eta * eta) + st.u * x + st.v * eta + st.k
            if best is None:
                best = phi
                sel = np.ones_like(x, dtype=bool)
            else:
                sel = phi < best
                best = np.where(sel, phi, best)
            out[0] = np.where(sel, st.rho, out[0])
            out[1] = np.where(sel, st.u, out[1])
            out[2] = np.where(sel, st.v, out[2])
        return out

    def evaluate(self, x, y, t: float):
        xi, eta = x / t, y / t
        xi, eta = np.broadcast_arrays(xi, eta)
        rho = np.empty(xi.shape)
        u = np.empty(xi.shape)
        v = np.empty(xi.shape)
        pos = xi >= 0.0
        right, left = self.sides
        if self.setup.theta1 == self.setup.theta2:
            # symmetric data: evaluate the left half as the mirror of the right half
            left_eval = self._pick(right, -xi[~pos], eta[~pos])
            left_eval[1] = -left_eval[1]
        else:
            left_eval = self._pick(left, xi[~pos], eta[~pos])
        right_eval = self._pick(right, xi[pos], eta[pos])
        for k, arr in enumerate((rho, u, v)):
            arr[pos] = right_eval[k]
            arr[~pos] = left_eval[k]
        return rho, u, v


def sector_states(setup: RiemannSetup, x, y):
    """(rho, u, v) of the t = 0 Riemann data by the polar angle of each point."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    ang = np.arctan2(y, np.abs(x))
    right = x >= 0.0
    theta = np.where(right, setup.theta1, setup.theta2)
    low = ang < theta
    U1, U2, U3 = setup.U1, setup.U2, setup.U3
    rho = np.where(low, np.where(right, U1.rho, U3.rho), U2.rho)
    # u3 = -u1 exactly for theta1 = theta2, so the field is exactly odd in x
    u = np.where(low, np.where(right, U1.u, U3.u), U2.u)
    v = np.where(low, 0.0, U2.v)
    return rho.astype(float), u.astype(float), v.astype(float)


def init_riemann(grid: FvGrid, setup: RiemannSetup) -> FvField:
    x, y = grid.centers()
    X, Y = np.meshgrid(x, y, indexing="ij")
    rho, u, v = sector_states(setup, X, Y)
    return FvField(rho, u, v, 0.0)


# --- scheme ----------------------------------------------------------------


def _enthalpy(rho, gas: GasModel):
    if gas.isothermal:
        return np.log(rho)
    return np.expm1(gas.gm1 * np.log(rho)) / gas.gm1


def _sound(rho, gas: GasModel):
    if gas.isothermal:
        return np.ones_like(rho)
    return rho ** (0.5 * gas.gm1)


def _pad(f: FvField, grid: FvGrid, bg: Background | None, t_ghost: float):
    nx, ny = grid.nx, grid.ny
    shape = (nx + 2 * NG, ny + 2 * NG)
    R, U, V = (np.empty(shape) for _ in range(3))
    R[NG:-NG, NG:-NG], U[NG:-NG, NG:-NG], V[NG:-NG, NG:-NG] = f.rho, f.u, f.v
    xg, yg = grid.centers(NG)
    X, Y = np.meshgrid(xg, yg, indexing="ij")
    if bg is not None:
        ring = np.ones(shape, dtype=bool)
        ring[NG:-NG, NG:-NG] = False
        ring[NG:-NG, :NG] = False
        r, u, v = bg.evaluate(X[ring], Y[ring], t_ghost)
        R[ring], U[ring], V[ring] = r, u, v
    # slip wall: mirror rows below y = 0 with v negated
    for k in range(NG):
        R[:, NG - 1 - k] = R[:, NG + k]
        U[:, NG - 1 - k] = U[:, NG + k]
        V[:, NG - 1 - k] = -V[:, NG + k]
    return R, U, V


def _rusanov(rL, qnL, qtL, rR, qnR, qtR, gas: GasModel):
    """Face fluxes (mass, normal velocity, tangential velocity) along the face normal."""
    pL = 0.5 * (qnL * qnL + qtL * qtL) + _enthalpy(rL, gas)
    pR = 0.5 * (qnR * qnR + qtR * qtR) + _enthalpy(rR, gas)
    a = np.maximum(np.abs(qnL) + _sound(rL, gas), np.abs(qnR) + _sound(rR, gas))
    fm = 0.5 * (rL * qnL + rR * qnR) - 0.5 * a * (rR - rL)
    fn = 0.5 * (pL + pR) - 0.5 * a * (qnR - qnL)
    ft = -0.5 * a * (qtR - qtL)
    return fm, fn, ft


def max_signal_speed(f: FvField, gas: GasModel) -> float:
    c = _sound(f.rho, gas)
    return float(max(np.max(np.abs(f.u) + c), np.max(np.abs(f.v) + c)))


@dataclass
class StepInfo:
    dt: float
    retries: int
    boundary_mass_in: float


def _update(f: FvField, grid: FvGrid, gas: GasModel, dt: float, padded):
    R, U, V = padded
    # x faces: between padded columns i and i+1 for i in [NG-1, NG+nx-1]
    rL, rR = R[NG - 1 : -NG, NG:-NG], R[NG : -NG + 1 or None, NG:-NG]
    uL, uR = U[NG - 1 : -NG, NG:-NG], U[NG : -NG + 1 or None, NG:-NG]
    vL, vR = V[NG - 1 : -NG, NG:-NG], V[NG : -NG + 1 or None, NG:-NG]
    fxm, fxu, fxv = _rusanov(rL, uL, vL, rR, uR, vR, gas)
    rL, rR = R[NG:-NG, NG - 1 : -NG], R[NG:-NG, NG : -NG + 1 or None]
    uL, uR = U[NG:-NG, NG - 1 : -NG], U[NG:-NG, NG : -NG + 1 or None]
    vL, vR = V[NG:-NG, NG - 1 : -NG], V[NG:-NG, NG : -NG + 1 or None]
    fym, fyv, fyu = _rusanov(rL, vL, uL, rR, vR, uR, gas)
    lx, ly = dt / grid.dx, dt / grid.dy
    rho = f.rho - (lx * (fxm[1:, :] - fxm[:-1, :]) + ly * (fym[:, 1:] - fym[:, :-1]))
    u = f.u - (lx * (fxu[1:, :] - fxu[:-1, :]) + ly * (fyu[:, 1:] - fyu[:, :-1]))
    v = f.v - (lx * (fxv[1:, :] - fxv[:-1, :]) + ly * (fyv[:, 1:] - fyv[:, :-1]))
    # mass entering through the far-field edges (the wall face carries none)
    inflow = dt * (
        grid.dy * (np.sum(fxm[0, :]) - np.sum(fxm[-1, :]))
        + grid.dx * (np.sum(fym[:, 0]) - np.sum(fym[:, -1]))
    )
    return FvField(rho, u, v, f.t + dt), inflow


def step(field: FvField, grid: FvGrid, config: SimConfig, gas: GasModel, background: Background | None = None,
         dt_max: float | None = None) -> tuple[FvField, StepInfo]:
    """One explicit update; halves dt on loss of positivity."""
    speed = max_signal_speed(field, gas)
    dt = config.cfl * min(grid.dx, grid.dy) / speed
    if dt_max is not None:
        dt = min(dt, dt_max)
    for attempt in range(config.max_retries + 1):
        t_mid = field.t + 0.5 * dt
        padded = _pad(field, grid, background, t_mid)
        new, inflow = _update(field, grid, gas, dt, padded)
        if np.all(new.rho > 0.0) and np.all(np.isfinite(new.rho)):
            return new, StepInfo(dt, attempt, inflow)
        dt *= 0.5
    raise SimulationAbort(f"density lost positivity at t={field.t!r} after {config.max_retries} retries")


def total_mass(f: FvField, grid: FvGrid) -> float:
    return float(np.sum(f.rho)) * grid.dx * grid.dy


def vorticity_diagnostic(f: FvField, grid: FvGrid) -> float:
    """max |u_y - v_x| * dx over interior cells (centered differences)."""
    uy = (f.u[1:-1, 2:] - f.u[1:-1, :-2]) / (2.0 * grid.dy)
    vx = (f.v[2:, 1:-1] - f.v[:-2, 1:-1]) / (2.0 * grid.dx)
    return float(np.max(np.abs(uy - vx))) * grid.dx


@dataclass
class RunRecord:
    grid: dict
    config: dict
    gamma: float
    v2: float
    theta1: float
    theta2: float
    steps: int = 0
    retries: int = 0
    t: float = 0.0
    mass_initial: float = 0.0
    mass_final: float = 0.0
    boundary_inflow: float = 0.0
    mass_drift: float = 0.0
    min_rho: float = math.inf
    vorticity: float = 0.0
    snapshots: dict = field(default_factory=dict)


def run(setup: RiemannSetup, grid: FvGrid, config: SimConfig = SimConfig(),
        snapshot_times: tuple[float, ...] = ()) -> tuple[FvField, RunRecord]:
    """Evolve the Riemann data to config.t_final; snapshots are copies at the requested times."""
    gas = setup.gas
    bg = Background(setup)
    f = init_riemann(grid, setup)
    rec = RunRecord(asdict(grid), asdict(config), gas.gamma, setup.v2, setup.theta1, setup.theta2)
    rec.mass_initial = total_mass(f, grid)
    stops = sorted(t for t in snapshot_times if 0.0 < t < config.t_final) + [config.t_final]
    inflow = 0.0
    for stop in stops:
        while f.t < stop:
            remaining = stop - f.t
            f, info = step(f, grid, config, gas, bg, dt_max=remaining)
            if stop - f.t < 1e-14 * stop:
                f.t = stop
            inflow += info.boundary_mass_in
            rec.steps += 1
            rec.retries += info.retries
            rec.min_rho = min(rec.min_rho, float(np.min(f.rho)))
        if stop < config.t_final:
            rec.snapshots[stop] = f.copy()
    rec.t = f.t
    rec.mass_final = total_mass(f, grid)
    rec.boundary_inflow = inflow
    rec.mass_drift = abs(rec.mass_final - rec.mass_initial - inflow) / rec.mass_initial
    rec.vorticity = vorticity_diagnostic(f, grid)
    return f, rec


# --- self-similar view and diagnostics ------------------------------------


@dataclass(frozen=True)
class SelfSimilarField:
    xi: np.ndarray
    eta: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    v: np.ndarray
    dxi: float
    deta: float


def extract_selfsimilar(field: FvField, grid: FvGrid, t: float | None = None) -> SelfSimilarField:
    """Relabel cell centers by xi = x/t; the data are not resampled."""
    t = field.t if t is None else t
    if not t > 0.0:
        raise ValueError("t must be positive")
    x, y = grid.centers()
    return SelfSimilarField(x / t, y / t, field.rho, field.u, field.v, grid.dx / t, grid.dy / t)


@dataclass(frozen=True)
class FittedLine:
    angle: float
    intercept: float
    slope: float
    residual: float
    points: np.ndarray
    entropy_ok: bool
    jumps: np.ndarray


def _ridge_rows(ss: SelfSimilarField, i_cols, j_lo: int, j_hi: int):
    """Sub-cell eta of max |d rho/d eta| in each column, in rows [j_lo, j_hi)."""
    pts = []
    for i in i_cols:
        col = ss.rho[i]
        g = np.abs(np.diff(col)) / ss.deta
        seg = g[j_lo:j_hi]
        if seg.size < 3:
            continue
        k = int(np.argmax(seg)) + j_lo
        # face k sits between cells k and k+1; parabolic refinement on neighbours
        off = 0.0
        if 0 < k < g.size - 1:
            a, b, c = g[k - 1], g[k], g[k + 1]
            den = a - 2.0 * b + c
            if den < 0.0:
                off = 0.5 * (a - c) / den
        eta = ss.eta[k] + (0.5 + off) * ss.deta
        pts.append((ss.xi[i], eta, k, i))
    return pts


def detect_reflected_shock(ss: SelfSimilarField, side: int, xi_range: tuple[float, float],
                           eta_range: tuple[float, float] | None = None, probe_cells: int = 4) -> FittedLine:
    """Least-squares line through the |grad rho| ridge of a reflected shock.

    xi_range selects the columns between the sonic-circle corner and the reflection
    point (outside the sonic circle). Side 5 reports an angle in (pi/2, pi], side 6 in
    [0, pi/2). The density jump across each ridge point is sampled probe_cells away;
    the downstream side is the one toward the wall.
    """
    lo, hi = sorted(xi_range)
    cols = np.nonzero((ss.xi >= lo) & (ss.xi <= hi))[0]
    if cols.size < 3:
        raise DetectionError("fewer than three columns in the fitting window")
    e_lo, e_hi = eta_range if eta_range is not None else (0.0, float(ss.eta[-1]))
    j_lo = max(int(np.searchsorted(ss.eta, e_lo)), probe_cells)
    j_hi = min(int(np.searchsorted(ss.eta, e_hi)), ss.eta.size - 1 - probe_cells)
    pts = _ridge_rows(ss, cols, j_lo, j_hi)
    if len(pts) < 3:
        raise DetectionError("no ridge found")
    arr = np.array([(p[0], p[1]) for p in pts])
    slope, intercept = np.polyfit(arr[:, 0], arr[:, 1], 1)
    resid = float(np.sqrt(np.mean((arr[:, 1] - (slope * arr[:, 0] + intercept)) ** 2)))
    ang = math.atan(slope)
    angle = math.pi + ang if side == 5 else (ang if ang >= 0.0 else math.pi + ang)
    if side == 6 and ang < 0.0:
        angle = ang + math.pi
    jumps = []
    for _, _, k, i in pts:
        below = ss.rho[i, max(k - probe_cells, 0)]
        above = ss.rho[i, min(k + 1 + probe_cells, ss.eta.size - 1)]
        jumps.append(below - above)
    jumps = np.array(jumps)
    return FittedLine(angle, float(intercept), float(slope), resid, arr, bool(np.all(jumps > 0.0)), jumps)


def detect_incident_shock(ss: SelfSimilarField, side: int, eta_range: tuple[float, float],
                          xi_range: tuple[float, float], probe_cells: int = 4) -> FittedLine:
    """Row-wise |d rho/d xi| ridge of S12 (side 1) or S32 (side 2), fitted as xi = m eta + b.

    The returned angle is the incident angle measured from the wall; the jump is the
    density on the state-(2) side minus the density on the state-(1)/(3) side.
    """
    lo, hi = sorted(eta_range)
    rows = np.nonzero((ss.eta >= lo) & (ss.eta <= hi))[0]
    c_lo = int(np.searchsorted(ss.xi, min(xi_range)))
    c_hi = int(np.searchsorted(ss.xi, max(xi_range)))
    c_lo, c_hi = max(c_lo, probe_cells), min(c_hi, ss.xi.size - 1 - probe_cells)
    pts, jumps = [], []
    for j in rows:
        g = np.abs(np.diff(ss.rho[:, j]))[c_lo:c_hi]
        if g.size < 3:
            continue
        k = int(np.argmax(g)) + c_lo
        pts.append((ss.xi[k] + 0.5 * ss.dxi, ss.eta[j]))
        left = ss.rho[max(k - probe_cells, 0), j]
        right = ss.rho[min(k + 1 + probe_cells, ss.xi.size - 1), j]
        jumps.append(left - right if side == 1 else right - left)
    if len(pts) < 3:
        raise DetectionError("no incident ridge found")
    arr = np.array(pts)
    m, b = np.polyfit(arr[:, 1], arr[:, 0], 1)
    resid = float(np.sqrt(np.mean((arr[:, 0] - (m * arr[:, 1] + b)) ** 2)))
    angle = math.atan2(1.0, abs(m))
    jumps = np.array(jumps)
    return FittedLine(angle, float(b), float(m), resid, arr, bool(np.all(jumps > 0.0)), jumps)


def region_mean(ss: SelfSimilarField, polygon, margin_cells: float = 3.0) -> float:
    """Mean density over cells whose centers lie inside a convex polygon shrunk by a margin."""
    P = np.asarray(polygon, float)
    X, Y = np.meshgrid(ss.xi, ss.eta, indexing="ij")
    inside = np.ones(X.shape, dtype=bool)
    centroid = P.mean(axis=0)
    margin = margin_cells * max(ss.dxi, ss.deta)
    for a, b in zip(P, np.roll(P, -1, axis=0)):
        n = np.array([b[1] - a[1], a[0] - b[0]])
        n /= np.hypot(*n)
        if np.dot(centroid - a, n) < 0:
            n = -n
        inside &= (X - a[0]) * n[0] + (Y - a[1]) * n[1] >= margin
    if not inside.any():
        raise DetectionError("sampling region holds no cells")
    return float(np.mean(ss.rho[inside]))


def mirror_error(f: FvField) -> float:
    """max over cells of |rho(x) - rho(-x)|, |u(x) + u(-x)|, |v(x) - v(-x)|."""
    return float(max(np.max(np.abs(f.rho - f.rho[::-1])), np.max(np.abs(f.u + f.u[::-1])),
                     np.max(np.abs(f.v - f.v[::-1]))))


# --- dumps -----------------------------------------------------------------


def write_dump(path, field: FvField, grid: FvGrid, setup: RiemannSetup) -> tuple[Path, Path]:
    """Raw little-endian float64 (rho, u, v), each nx*ny in C order, plus a text header."""
    path = Path(path)
    data = np.stack([field.rho, field.u, field.v]).astype("<f8")
    path.write_bytes(data.tobytes(order="C"))
    hdr = path.with_suffix(path.suffix + ".hdr")
    lines = [
        f"nx = {grid.nx}",
        f"ny = {grid.ny}",
        f"x_lo = {grid.x_lo!r}",
        f"x_hi = {grid.x_hi!r}",
        "y_lo = 0.0",
        f"y_hi = {grid.y_hi!r}",
        f"t = {field.t!r}",
        f"gamma = {setup.gas.gamma!r}",
        f"v2 = {setup.v2!r}",
        f"theta1 = {setup.theta1!r}",
        f"theta2 = {setup.theta2!r}",
        "layout = rho,u,v float64 little-endian [3][nx][ny]",
    ]
    hdr.write_text("\n".join(lines) + "\n")
    return path, hdr


def read_dump(path) -> tuple[FvField, dict]:
    path = Path(path)
    meta = {}
    for line in path.with_suffix(path.suffix + ".hdr").read_text().splitlines():
        k, _, v = line.partition(" = ")
        meta[k] = v
    nx, ny = int(meta["nx"]), int(meta["ny"])
    data = np.frombuffer(path.read_bytes(), dtype="<f8").reshape(3, nx, ny)
    return FvField(data[0].copy(), data[1].copy(), data[2].copy(), float(meta["t"])), meta
