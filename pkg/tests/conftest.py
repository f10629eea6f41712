from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def solve2(a, b):
    """Intersection point of two lines a.x + c = 0 given as (a1, a2, c); None if parallel."""
    det = a[0] * b[1] - a[1] * b[0]
    if det == 0:
        return None
    x = (-a[2] * b[1] + b[2] * a[1]) / Fraction(det)
    y = (-a[0] * b[2] + b[0] * a[2]) / Fraction(det)
    return (x, y)


def vertices2(rows):
    """Vertices of {x in R^2 : a.x + c >= 0} by brute force over constraint pairs."""
    out = set()
    for a, b in combinations(rows, 2):
        p = solve2(a, b)
        if p is not None and all(r[0] * p[0] + r[1] * p[1] + r[2] >= 0 for r in rows):
            out.add(p)
    return out


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
