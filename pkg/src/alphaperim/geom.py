"""Planar geometry primitives: points, circumscribing centers, angles, caps and arcs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

EPS_GEOM = 1e-9


class Point2(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    a: Point2
    b: Point2

    @property
    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)


@dataclass(frozen=True)
class DiskCenterPair:
    """Centers of the two radius-alpha circles through a chord.

    ``plus`` is obtained by rotating the chord direction counter-clockwise,
    ``minus`` clockwise. For a diameter chord both collapse to the midpoint.
    """

    plus: Point2
    minus: Point2
    degenerate: bool


def as_point(p: Sequence[float]) -> Point2:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite point {p!r}")
    return Point2(x, y)


def as_points(points) -> np.ndarray:
    """Coerce to a float (n, 2) array, rejecting NaN and infinities."""
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("points must have finite coordinates")
    return arr


def disk_centers(a, b, alpha: float, eps: float = EPS_GEOM) -> DiskCenterPair:
    """Centers of the radius-``alpha`` circles passing through ``a`` and ``b``.

    The center is ``a + alpha * R(+-theta) u`` where ``u`` is the unit chord
    direction and ``theta = acos(|a - b| / (2 alpha))``. Chords within ``eps``
    of the diameter are flagged degenerate and get the midpoint as center.
    """
    a, b = as_point(a), as_point(b)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    dx, dy = b.x - a.x, b.y - a.y
    d = math.hypot(dx, dy)
    if d == 0.0:
        raise ValueError("coincident points have no circumscribing chord")
    if d > 2.0 * alpha + eps:
        raise ValueError(f"chord length {d} exceeds 2*alpha = {2.0 * alpha}")
    if d >= 2.0 * alpha - eps:
        mid = Point2(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
        return DiskCenterPair(mid, mid, True)
    ux, uy = dx / d, dy / d
    theta = math.acos(d / (2.0 * alpha))
    c, s = math.cos(theta), math.sin(theta)
    plus = Point2(a.x + alpha * (c * ux - s * uy), a.y + alpha * (s * ux + c * uy))
    minus = Point2(a.x + alpha * (c * ux + s * uy), a.y + alpha * (-s * ux + c * uy))
    return DiskCenterPair(plus, minus, False)


def disk_centers_many(a: np.ndarray, b: np.ndarray, alpha: float, eps: float = EPS_GEOM):
    """Vectorized :func:`disk_centers` over rows of ``a`` and ``b``.

    Returns ``(plus, minus, degenerate)``. Callers must pre-filter chords longer
    than ``2 alpha + eps`` and zero-length chords.
    """
    diff = b - a
    d = np.hypot(diff[:, 0], diff[:, 1])
    u = diff / d[:, None]
    degenerate = d >= 2.0 * alpha - eps
    theta = np.arccos(np.minimum(d / (2.0 * alpha), 1.0))
    c, s = np.cos(theta), np.sin(theta)
    plus = np.column_stack(
        (a[:, 0] + alpha * (c * u[:, 0] - s * u[:, 1]), a[:, 1] + alpha * (s * u[:, 0] + c * u[:, 1]))
    )
    minus = np.column_stack(
        (a[:, 0] + alpha * (c * u[:, 0] + s * u[:, 1]), a[:, 1] + alpha * (-s * u[:, 0] + c * u[:, 1]))
    )
    if np.any(degenerate):
        mid = 0.5 * (a[degenerate] + b[degenerate])
        plus[degenerate] = mid
        minus[degenerate] = mid
    return plus, minus, degenerate


def angle_between_lines(u, v) -> float:
    """Acute angle in [0, pi/2] between the undirected lines spanned by u and v."""
    ux, uy = float(u[0]), float(u[1])
    vx, vy = float(v[0]), float(v[1])
    nu, nv = math.hypot(ux, uy), math.hypot(vx, vy)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("zero-length direction")
    cross = abs(ux * vy - uy * vx)
    dot = abs(ux * vx + uy * vy)
    return math.atan2(cross, dot)


def cap_area(alpha: float, h: float) -> float:
    """Area of the circular cap of height ``h`` cut from a disk of radius ``alpha``."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not 0.0 <= h <= 2.0 * alpha:
        raise ValueError(f"cap height {h} outside [0, {2.0 * alpha}]")
    return alpha * alpha * math.acos(1.0 - h / alpha) - (alpha - h) * math.sqrt(2.0 * alpha * h - h * h)


def cap_area_lower_bound(alpha: float, h: float) -> float:
    """Lower bound ``32 sqrt(2 alpha) h^{3/2} / (3 pi^2)`` on twice the cap area (alpha <= 1, h <= alpha)."""
    return 32.0 * math.sqrt(2.0 * alpha) / (3.0 * math.pi**2) * h**1.5


def arc_length_for_chord(alpha: float, ell: float) -> float:
    """Length of the minor radius-``alpha`` arc over a chord of length ``ell``."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if ell < 0 or ell > 2.0 * alpha + EPS_GEOM:
        raise ValueError(f"chord length {ell} outside [0, {2.0 * alpha}]")
    return 2.0 * alpha * math.asin(min(ell / (2.0 * alpha), 1.0))


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from points ``p`` (m, 2) to the segments ``[a_k b_k]`` (broadcast)."""
    ab = b - a
    ap = p - a
    denom = np.einsum("...i,...i->...", ab, ab)
    t = np.clip(np.einsum("...i,...i->...", ap, ab) / np.where(denom > 0, denom, 1.0), 0.0, 1.0)
    proj = a + t[..., None] * ab
    return np.linalg.norm(p - proj, axis=-1)
