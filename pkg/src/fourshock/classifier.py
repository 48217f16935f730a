"""Configuration taxonomy over (theta1, theta2) and phase-diagram sweeps."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterDomainError
from .local_reflection import CriticalAngles, critical_angles
from .riemann_setup import check_v2
from .thermo import GasModel


class Kind(str, Enum):
    NORMAL = "NormalReflection"
    UNILATERAL_NORMAL = "UnilateralNormal"
    SUPERSONIC_SUPERSONIC = "SupersonicSupersonic"
    SUPERSONIC_SUBSONIC = "SupersonicSubsonic"
    SUBSONIC_SUBSONIC = "SubsonicSubsonic"
    NO_REGULAR = "NoRegularReflection"
    VACUUM_EXCEEDED = "VacuumExceeded"


@dataclass(frozen=True)
class Configuration:
    """kind plus the sides it refers to (1 = right/S12, 2 = left/S32), empty when symmetric."""

    kind: Kind
    sides: tuple[int, ...] = ()

    @property
    def label(self) -> str:
        if not self.sides:
            return self.kind.value
        return f"{self.kind.value}({','.join(str(s) for s in self.sides)})"

    def mirrored(self) -> "Configuration":
        return Configuration(self.kind, tuple(sorted(3 - s for s in self.sides)))


def _regime(theta: float, ca: CriticalAngles) -> str:
    # closed-left intervals: [theta_s, theta_d) is subsonic
    if theta >= ca.theta_cr:
        return "vacuum"
    if theta >= ca.theta_d:
        return "detached"
    if theta == 0.0:
        return "zero"
    if theta < ca.theta_s:
        return "super"
    return "sub"


def classify_with(ca: CriticalAngles, theta1: float, theta2: float) -> Configuration:
    if theta1 < 0.0 or theta2 < 0.0:
        raise ParameterDomainError("incident angles must be >= 0")
    r = (_regime(float(theta1), ca), _regime(float(theta2), ca))
    sides = lambda tag: tuple(i + 1 for i in range(2) if r[i] == tag)  # noqa: E731
    if "vacuum" in r:
        return Configuration(Kind.VACUUM_EXCEEDED, sides("vacuum"))
    if "detached" in r:
        return Configuration(Kind.NO_REGULAR, sides("detached"))
    if r == ("zero", "zero"):
        return Configuration(Kind.NORMAL)
    if "zero" in r:
        return Configuration(Kind.UNILATERAL_NORMAL, sides("zero"))
    if r == ("super", "super"):
        return Configuration(Kind.SUPERSONIC_SUPERSONIC)
    if r == ("sub", "sub"):
        return Configuration(Kind.SUBSONIC_SUBSONIC)
    return Configuration(Kind.SUPERSONIC_SUBSONIC, sides("sub"))


def classify(gas: GasModel, v2: float, theta1: float, theta2: float) -> Configuration:
    check_v2(gas, v2)
    return classify_with(critical_angles(gas, v2), theta1, theta2)


CSV_HEADER = ("theta1_rad", "theta2_rad", "kind", "theta_s", "theta_d", "theta_cr")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def sweep_phase_diagram(gas: GasModel, v2: float, n: int) -> list[dict]:
    """Row-major n x n grid theta_i = i theta_cr / n over [0, theta_cr)^2."""
    if n < 2:
        raise ParameterDomainError("grid size must be >= 2")
    ca = critical_angles(gas, v2)
    grid = np.arange(n) * (ca.theta_cr / n)
    rows = []
    for t1 in grid:
        for t2 in grid:
            rows.append(
                {
                    "theta1_rad": float(t1),
                    "theta2_rad": float(t2),
                    "kind": classify_with(ca, t1, t2).label,
                    "theta_s": ca.theta_s,
                    "theta_d": ca.theta_d,
                    "theta_cr": ca.theta_cr,
                }
            )
    return rows


def rows_to_csv(rows: list[dict], header=CSV_HEADER) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([r[k] if isinstance(r[k], str) else fmt(r[k]) for k in header])
    return buf.getvalue()
