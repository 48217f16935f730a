"""Acceptance criteria 1-8, one test each, at the stated tolerances and time budgets.

Each test prints one PASS/FAIL line (also collected in the pytest terminal summary).
Run directly with `python3 tests/test_acceptance.py` for the lines alone.
"""

import pytest

from fourshock import verify

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

CRITERIA = [
    (1, "closed-form spot checks", verify.closed_form),
    (2, "monotonicity", verify.monotonicity),
    (3, "limits at M = 1e4 and M -> 1", verify.limits),
    (4, "reflection algebra on 100 samples", verify.reflection_algebra),
    (5, "trichotomy and P_I limit", verify.trichotomy),
    (6, "dual-formula equivalence", verify.dual_route),
    (7, "FV normal reflection 400x200 with refinement to 800x400", verify.fv_normal),
    (8, "FV Case I 800x400", verify.fv_case1),
]


def evaluate(num, title, fn):
    checks = fn()
    failed = [c for c in checks if not c.passed]
    line = f"criterion {num}: {'PASS' if not failed else 'FAIL'}  {title}"
    if failed:
        line += "  [" + "; ".join(f"{c.name} value={c.value:.3e} tol={c.tol:.1e}" for c in failed) + "]"
    return line, checks, failed


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn):
    line, checks, failed = evaluate(num, title, fn)
    print(line)
    for c in checks:
        print("   ", c.line())
    ACCEPTANCE_LINES.append(line)
    assert not failed, line


if __name__ == "__main__":
    for crit in CRITERIA:
        print(evaluate(*crit)[0], flush=True)
