"""Command-line entry point.

Angles are given in degrees and converted to radians once, here. Every command
prints a table (CSV or JSON) to stdout or to --output. Exit status: 0 success,
1 runtime or domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import fv_sim as fv
from .classifier import CSV_HEADER, classify, fmt, rows_to_csv, sweep_phase_diagram
from .errors import DetachmentError, FourShockError, ParameterDomainError
from .local_reflection import critical_angles, critical_v2, solve_reflection
from .riemann_setup import build_states, check_v2
from .steady_polar import SteadyPolar
from .thermo import GasModel
from .verify import SUITES

STATES_HEADER = ("state", "rho", "u", "v", "k")
POLAR_HEADER = ("tau", "u", "v", "w")
CRITICAL_HEADER = ("theta_cr", "theta_plus", "theta_s", "theta_d", "v2_s", "v2_d")
SIMULATE_HEADER = ("nx", "ny", "t", "steps", "retries", "mass_drift", "min_rho", "vorticity")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, v2=True, angles=0):
    p.add_argument("--gamma", type=float, default=None, help="adiabatic exponent >= 1 (default 1.4)")
    if v2:
        p.add_argument("--v2", type=float, default=None, help="vertical velocity of state (2), in (v_min, 0) (required)")
    if angles:
        p.add_argument("--theta1", type=float, default=None, help="right incident angle in degrees (required)")
        p.add_argument("--theta2", type=float, default=None, help="left incident angle in degrees (required)")
    p.add_argument("--format", choices=("csv", "json"), default=None, help="output format (default csv)")
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    p.add_argument("--config", default=None, help="key=value file with the same keys as the flags; flags win")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fourshock", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("states", help="sector states (1)-(4) and weak/strong reflected states")
    _common(p, angles=2)

    p = sub.add_parser("polar", help="steady shock polar (tau, u, v, w) on a uniform tau grid")
    _common(p, v2=False)
    p.add_argument("--mach", type=float, default=None, help="upstream Mach number > 1 (required)")
    p.add_argument("--points", type=int, default=None, help="number of tau samples (default 1000)")

    p = sub.add_parser("critical", help="critical angles (radians) and critical v2 values")
    _common(p)

    p = sub.add_parser("classify", help="configuration kind for one (theta1, theta2)")
    _common(p, angles=2)

    p = sub.add_parser("sweep", help="phase diagram over [0, theta_cr)^2")
    _common(p)
    p.add_argument("--n", type=int, default=None, help="grid points per axis (default 64)")

    p = sub.add_parser("simulate", help="first-order finite-volume run to t_final")
    _common(p, angles=2)
    p.add_argument("--nx", type=int, default=None, help="cells across (default 400)")
    p.add_argument("--ny", type=int, default=None, help="cells up (default nx/2)")
    p.add_argument("--half-width", type=float, default=None, help="domain is [-w, w] x [0, height] (default 3)")
    p.add_argument("--height", type=float, default=None, help="domain height (default 3)")
    p.add_argument("--t-final", type=float, default=None, help="final time (default 1)")
    p.add_argument("--cfl", type=float, default=None, help="CFL number (default 0.45)")
    p.add_argument("--dump", default=None, help="write the final field here (+ .hdr sidecar)")

    p = sub.add_parser("verify", help="run a named property suite")
    p.add_argument("suite", choices=sorted(SUITES), help="suite name")
    p.add_argument("--nx", type=int, default=None, help="grid size for the fv-* suites")
    p.add_argument("--no-refine", action="store_true", help="fv-normal: skip the refinement study")
    return ap


DEFAULTS = {
    "gamma": 1.4, "format": "csv", "points": 1000, "n": 64, "nx": 400, "half_width": 3.0,
    "height": 3.0, "t_final": 1.0, "cfl": 0.45,
}
REQUIRED = {
    "states": ("v2", "theta1", "theta2"),
    "polar": ("mach",),
    "critical": ("v2",),
    "classify": ("v2", "theta1", "theta2"),
    "sweep": ("v2",),
    "simulate": ("v2", "theta1", "theta2"),
    "verify": (),
}


def _read_config(path: str) -> dict[str, str]:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValueError(f"{path}:{n}: expected key=value")
        out[key.strip().lstrip("-").replace("-", "_")] = val.strip()
    return out


def parse_args(argv=None) -> argparse.Namespace:
    """Parse flags, merge the optional config file underneath them, apply defaults, radians."""
    ap = build_parser()
    ns = ap.parse_args(argv)
    cfg = {}
    if getattr(ns, "config", None):
        try:
            cfg = _read_config(ns.config)
        except (OSError, ValueError) as e:
            ap.exit(2, f"fourshock: error: config: {e}\n")
    flags = vars(ns)
    for key, raw in cfg.items():
        if key not in flags or key in ("command", "config", "suite"):
            ap.exit(2, f"fourshock: error: config: unknown key {key!r}\n")
        if flags[key] is None:
            flags[key] = raw
    # coerce config strings through the same types as the flags
    sub = next(a for a in ap._subparsers._group_actions[0].choices.values() if a.prog.endswith(ns.command))
    for act in sub._actions:
        if act.dest in flags and isinstance(flags[act.dest], str) and act.type is not None:
            try:
                flags[act.dest] = act.type(flags[act.dest])
            except ValueError:
                ap.exit(2, f"fourshock: error: config: bad value for {act.dest}: {flags[act.dest]!r}\n")
    for key, val in DEFAULTS.items():
        if key in flags and flags[key] is None:
            flags[key] = val
    missing = [k for k in REQUIRED[ns.command] if flags.get(k) is None]
    if missing:
        ap.error("the following arguments are required: " + ", ".join("--" + m.replace("_", "-") for m in missing))
    for key in ("theta1", "theta2"):
        if flags.get(key) is not None:
            flags[key] = math.radians(flags[key])
    return ns


# --- output ------------------------------------------------------------------


def _json_value(x) -> str:
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        return json.dumps(fmt(x))
    return fmt(x)


def render(rows: list[dict], header, form: str) -> str:
    if form == "csv":
        return rows_to_csv(rows, header)
    objs = ["{" + ", ".join(f"{json.dumps(k)}: {_json_value(r[k])}" for k in header) + "}" for r in rows]
    return "[\n" + ",\n".join("  " + o for o in objs) + "\n]\n"


def emit(rows: list[dict], header, ns) -> None:
    text = render(rows, header, ns.format)
    if ns.output:
        Path(ns.output).write_text(text)
    else:
        sys.stdout.write(text)


# --- commands ----------------------------------------------------------------


def _state_row(name, s):
    return {"state": name, "rho": s.rho, "u": s.u, "v": s.v, "k": s.k}


def cmd_states(ns, gas):
    setup = build_states(gas, ns.v2, ns.theta1, ns.theta2)
    rows = [_state_row(str(i + 1), s) for i, s in enumerate(setup.states)]
    for side in (5, 6):
        try:
            sol = solve_reflection(setup, side)
        except DetachmentError as e:
            print(f"fourshock: note: no state ({side}): {e}", file=sys.stderr)
            continue
        rows.append(_state_row(f"{side}_weak", sol.weak))
        if sol.strong is not None:
            rows.append(_state_row(f"{side}_strong", sol.strong))
    emit(rows, STATES_HEADER, ns)


def cmd_polar(ns, gas):
    if ns.points < 2:
        raise ParameterDomainError("--points must be >= 2")
    data = SteadyPolar.build(gas, ns.mach).sample(ns.points)
    emit([dict(zip(POLAR_HEADER, map(float, r))) for r in data], POLAR_HEADER, ns)


def cmd_critical(ns, gas):
    check_v2(gas, ns.v2)
    ca = critical_angles(gas, ns.v2)
    v2s, v2d = critical_v2(gas)
    row = {"theta_cr": ca.theta_cr, "theta_plus": ca.theta_plus, "theta_s": ca.theta_s,
           "theta_d": ca.theta_d, "v2_s": v2s, "v2_d": v2d}
    emit([row], CRITICAL_HEADER, ns)


def _check_angles(ns):
    for key in ("theta1", "theta2"):
        t = getattr(ns, key)
        if not 0.0 <= t < math.pi / 2:
            raise ParameterDomainError(f"{key} = {math.degrees(t)!r} deg outside [0, 90); theta_cr <= 90 deg")


def cmd_classify(ns, gas):
    _check_angles(ns)
    conf = classify(gas, ns.v2, ns.theta1, ns.theta2)
    ca = critical_angles(gas, ns.v2)
    row = {"theta1_rad": ns.theta1, "theta2_rad": ns.theta2, "kind": conf.label,
           "theta_s": ca.theta_s, "theta_d": ca.theta_d, "theta_cr": ca.theta_cr}
    emit([row], CSV_HEADER, ns)


def cmd_sweep(ns, gas):
    check_v2(gas, ns.v2)
    emit(sweep_phase_diagram(gas, ns.v2, ns.n), CSV_HEADER, ns)


def cmd_simulate(ns, gas):
    _check_angles(ns)
    setup = build_states(gas, ns.v2, ns.theta1, ns.theta2)
    ny = ns.ny if ns.ny is not None else ns.nx // 2
    grid = fv.FvGrid.symmetric(ns.nx, ny, ns.half_width, ns.height)
    field, rec = fv.run(setup, grid, fv.SimConfig(cfl=ns.cfl, t_final=ns.t_final))
    if ns.dump:
        fv.write_dump(ns.dump, field, grid, setup)
    row = {"nx": grid.nx, "ny": grid.ny, "t": rec.t, "steps": rec.steps, "retries": rec.retries,
           "mass_drift": rec.mass_drift, "min_rho": rec.min_rho, "vorticity": rec.vorticity}
    emit([row], SIMULATE_HEADER, ns)


def cmd_verify(ns) -> int:
    fn = SUITES[ns.suite]
    kwargs = {}
    if ns.suite in ("fv-normal", "fv-case1") and ns.nx is not None:
        kwargs["nx"] = ns.nx
    if ns.suite == "fv-normal" and ns.no_refine:
        kwargs["refine"] = False
    checks = fn(**kwargs)
    for c in checks:
        print(c.line())
    ok = all(c.passed for c in checks)
    print(f"{ns.suite}: {'PASS' if ok else 'FAIL'} ({sum(c.passed for c in checks)}/{len(checks)})")
    return 0 if ok else 1


COMMANDS = {
    "states": cmd_states, "polar": cmd_polar, "critical": cmd_critical, "classify": cmd_classify,
    "sweep": cmd_sweep, "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    ns = parse_args(argv)
    try:
        if ns.command == "verify":
            return cmd_verify(ns)
        COMMANDS[ns.command](ns, GasModel(ns.gamma))
    except (FourShockError, ValueError, OSError, ArithmeticError) as e:
        print(f"fourshock: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
