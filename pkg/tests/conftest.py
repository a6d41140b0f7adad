import math

import numpy as np
import pytest

from alphaperim.alpha_shape import build_alpha_shape
from alphaperim.domains import Annulus

CORONA = Annulus(0.25, 1.0)


def reference_alpha_edges(points, alpha, eps=1e-9):
    """Independent all-pairs oracle.

    Centers come from the chord midpoint shifted along the unit normal by
    sqrt(alpha^2 - (d/2)^2); emptiness is checked point by point in plain Python.
    Returns {(i, j): (empty_left, empty_right)}.
    """
    pts = [(float(x), float(y)) for x, y in points]
    out = {}
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            (xi, yi), (xj, yj) = pts[i], pts[j]
            d = math.hypot(xj - xi, yj - yi)
            if d > 2 * alpha + eps:
                continue
            mx, my = (xi + xj) / 2, (yi + yj) / 2
            off = math.sqrt(max(alpha * alpha - d * d / 4, 0.0)) if d < 2 * alpha - eps else 0.0
            nx, ny = -(yj - yi) / d, (xj - xi) / d
            flags = []
            for sgn in (1, -1):
                cx, cy = mx + sgn * off * nx, my + sgn * off * ny
                flags.append(
                    all(math.hypot(pts[k][0] - cx, pts[k][1] - cy) >= alpha - eps for k in range(n) if k not in (i, j))
                )
            if any(flags):
                out[(i, j)] = tuple(flags)
    return out


def corona_sample(n, seed):
    return CORONA.sample_uniform(n, np.random.default_rng(seed))


@pytest.fixture(scope="session")
def corona_shapes_10k():
    """alpha=0.2 shapes on 20 pinned corona samples of size 10000."""
    return [build_alpha_shape(corona_sample(10_000, seed), 0.2) for seed in range(20)]


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number, ok, detail):
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
