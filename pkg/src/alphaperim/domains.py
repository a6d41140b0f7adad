"""Analytic planar supports satisfying the rolling condition on both sides.

Each domain knows its exact perimeter, membership, a uniform sampler, the
metric projection onto its boundary and the rolling radius ``r`` for which
both the set and its complement admit rolling balls.
"""

from __future__ import annotations

import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .geom import EPS_GEOM, Point2, as_point, as_points


class AmbiguousProjectionError(ValueError):
    """The point has more than one nearest boundary point."""


@dataclass(frozen=True)
class BoundaryPoint:
    position: Point2
    outward_normal: Point2
    tangent: Point2
    component_id: int


@dataclass(frozen=True)
class BoundarySample:
    """Dense arc-length sampling of the boundary, one row per point."""

    positions: np.ndarray
    normals: np.ndarray
    component_ids: np.ndarray


def _boundary_point(pos, normal, component_id: int) -> BoundaryPoint:
    nx, ny = float(normal[0]), float(normal[1])
    return BoundaryPoint(
        Point2(float(pos[0]), float(pos[1])), Point2(nx, ny), Point2(-ny, nx), int(component_id)
    )


def _sample_disk(rng: np.random.Generator, n: int, r_in: float, r_out: float) -> np.ndarray:
    # Inverse CDF of the radial law on the ring r_in <= |x| <= r_out.
    u = rng.random(n)
    theta = rng.random(n) * (2.0 * math.pi)
    rho = np.sqrt(u * (r_out**2 - r_in**2) + r_in**2)
    return np.column_stack((rho * np.cos(theta), rho * np.sin(theta)))


@dataclass(frozen=True)
class _Circle:
    center: tuple[float, float]
    radius: float
    # +1 when S lies inside the circle, -1 when S lies outside (a hole).
    side: int


class Domain(ABC):
    kind: str

    @property
    @abstractmethod
    def rolling_r(self) -> float: ...

    @property
    @abstractmethod
    def n_components(self) -> int:
        """Number of connected components of the boundary."""

    @abstractmethod
    def area(self) -> float: ...

    @abstractmethod
    def exact_perimeter(self) -> float: ...

    @abstractmethod
    def bounding_box(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax)"""

    @abstractmethod
    def contains_many(self, pts: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def distance_to_boundary_many(self, pts: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def project_to_boundary(self, p) -> BoundaryPoint: ...

    @abstractmethod
    def sample_uniform(self, n: int, rng: np.random.Generator) -> np.ndarray: ...

    @abstractmethod
    def boundary_sample(self, resolution: float) -> BoundarySample:
        """Boundary points spaced at most ``1/resolution`` apart in arc length."""

    @abstractmethod
    def spec(self) -> str:
        """Round-trippable specification string, see :func:`parse_domain`."""

    def contains(self, p) -> bool:
        return bool(self.contains_many(np.array([as_point(p)]))[0])

    def distance_to_boundary(self, p) -> float:
        return float(self.distance_to_boundary_many(np.array([as_point(p)]))[0])

    def __str__(self) -> str:
        return self.spec()


class _CircleDomain(Domain):
    """Domains whose boundary is a union of disjoint circles."""

    circles: tuple[_Circle, ...]

    @property
    def n_components(self) -> int:
        return len(self.circles)

    def exact_perimeter(self) -> float:
        return 2.0 * math.pi * math.fsum(c.radius for c in self.circles)

    def _radial(self, pts: np.ndarray) -> np.ndarray:
        """Signed distances ``|p - c| - R`` for every circle, shape (n, k)."""
        cols = [np.hypot(pts[:, 0] - c.center[0], pts[:, 1] - c.center[1]) - c.radius for c in self.circles]
        return np.column_stack(cols)

    def distance_to_boundary_many(self, pts: np.ndarray) -> np.ndarray:
        pts = as_points(pts)
        return np.abs(self._radial(pts)).min(axis=1)

    def project_to_boundary(self, p) -> BoundaryPoint:
        p = as_point(p)
        dists = np.abs(self._radial(np.array([p]))[0])
        order = np.argsort(dists, kind="stable")
        k = int(order[0])
        if len(order) > 1 and dists[order[1]] - dists[k] <= EPS_GEOM:
            raise AmbiguousProjectionError(f"{p} is equidistant from boundary components {k} and {int(order[1])}")
        c = self.circles[k]
        vx, vy = p.x - c.center[0], p.y - c.center[1]
        norm = math.hypot(vx, vy)
        if norm <= EPS_GEOM:
            raise AmbiguousProjectionError(f"{p} is the center of boundary circle {k}")
        ux, uy = vx / norm, vy / norm
        pos = (c.center[0] + c.radius * ux, c.center[1] + c.radius * uy)
        return _boundary_point(pos, (c.side * ux, c.side * uy), k)

    def boundary_sample(self, resolution: float) -> BoundarySample:
        pos, nrm, ids = [], [], []
        for k, c in enumerate(self.circles):
            m = max(8, math.ceil(2.0 * math.pi * c.radius * resolution))
            t = np.arange(m) * (2.0 * math.pi / m)
            u = np.column_stack((np.cos(t), np.sin(t)))
            pos.append(np.asarray(c.center) + c.radius * u)
            nrm.append(c.side * u)
            ids.append(np.full(m, k))
        return BoundarySample(np.vstack(pos), np.vstack(nrm), np.concatenate(ids))


@dataclass(frozen=True, eq=True)
class Disk(_CircleDomain):
    radius: float
    kind = "disk"

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disk radius must be positive, got {self.radius}")

    @property
    def circles(self):
        return (_Circle((0.0, 0.0), self.radius, +1),)

    @property
    def rolling_r(self) -> float:
        return self.radius

    def area(self) -> float:
        return math.pi * self.radius**2

    def bounding_box(self):
        return (-self.radius, self.radius, -self.radius, self.radius)

    def contains_many(self, pts):
        pts = as_points(pts)
        return np.hypot(pts[:, 0], pts[:, 1]) <= self.radius

    def sample_uniform(self, n, rng):
        return _sample_disk(rng, n, 0.0, self.radius)

    def spec(self):
        return f"disk:{self.radius!r}"


@dataclass(frozen=True, eq=True)
class Annulus(_CircleDomain):
    """The ring ``r_in <= |x| <= r_out``; component 0 is the inner circle, 1 the outer."""

    r_in: float
    r_out: float
    kind = "annulus"

    def __post_init__(self):
        if not 0 < self.r_in < self.r_out:
            raise ValueError(f"annulus needs 0 < r_in < r_out, got ({self.r_in}, {self.r_out})")

    @property
    def circles(self):
        return (_Circle((0.0, 0.0), self.r_in, -1), _Circle((0.0, 0.0), self.r_out, +1))

    @property
    def rolling_r(self) -> float:
        # Inner balls must also fit across the ring.
        return min(self.r_in, 0.5 * (self.r_out - self.r_in))

    def area(self) -> float:
        return math.pi * (self.r_out**2 - self.r_in**2)

    def bounding_box(self):
        return (-self.r_out, self.r_out, -self.r_out, self.r_out)

    def contains_many(self, pts):
        pts = as_points(pts)
        rho = np.hypot(pts[:, 0], pts[:, 1])
        return (rho >= self.r_in) & (rho <= self.r_out)

    def sample_uniform(self, n, rng):
        return _sample_disk(rng, n, self.r_in, self.r_out)

    def spec(self):
        return f"annulus:{self.r_in!r},{self.r_out!r}"


@dataclass(frozen=True, eq=True)
class DisjointDisks(_CircleDomain):
    c1: tuple[float, float]
    r1: float
    c2: tuple[float, float]
    r2: float
    kind = "disjoint_disks"

    def __post_init__(self):
        if not (self.r1 > 0 and self.r2 > 0):
            raise ValueError("disk radii must be positive")
        if not self.gap > 0:
            raise ValueError(f"disks overlap or touch: gap {self.gap}")

    @property
    def circles(self):
        return (_Circle(tuple(self.c1), self.r1, +1), _Circle(tuple(self.c2), self.r2, +1))

    @property
    def gap(self) -> float:
        return math.dist(self.c1, self.c2) - self.r1 - self.r2

    @property
    def rolling_r(self) -> float:
        # Exterior balls must also fit between the two disks.
        return min(self.r1, self.r2, 0.5 * self.gap)

    def area(self) -> float:
        return math.pi * (self.r1**2 + self.r2**2)

    def bounding_box(self):
        return (
            min(self.c1[0] - self.r1, self.c2[0] - self.r2),
            max(self.c1[0] + self.r1, self.c2[0] + self.r2),
            min(self.c1[1] - self.r1, self.c2[1] - self.r2),
            max(self.c1[1] + self.r1, self.c2[1] + self.r2),
        )

    def contains_many(self, pts):
        pts = as_points(pts)
        return (self._radial(pts) <= 0).any(axis=1)

    def sample_uniform(self, n, rng):
        w1 = self.r1**2 / (self.r1**2 + self.r2**2)
        first = rng.random(n) < w1
        disk = _sample_disk(rng, n, 0.0, 1.0)
        scale = np.where(first, self.r1, self.r2)[:, None]
        shift = np.where(first[:, None], np.asarray(self.c1, float), np.asarray(self.c2, float))
        return disk * scale + shift

    def spec(self):
        (x1, y1), (x2, y2) = self.c1, self.c2
        return f"disks:({x1!r},{y1!r}),{self.r1!r},({x2!r},{y2!r}),{self.r2!r}"


@dataclass(frozen=True, eq=True)
class Stadium(Domain):
    """Rectangle ``[-L, L] x [-rho, rho]`` capped by half-disks of radius ``rho`` at ``x = +-L``."""

    half_length: float
    cap_radius: float
    kind = "stadium"

    def __post_init__(self):
        if not (self.half_length > 0 and self.cap_radius > 0):
            raise ValueError("stadium half_length and cap_radius must be positive")

    @property
    def rolling_r(self) -> float:
        return self.cap_radius

    @property
    def n_components(self) -> int:
        return 1

    def area(self) -> float:
        return 4.0 * self.half_length * self.cap_radius + math.pi * self.cap_radius**2

    def exact_perimeter(self) -> float:
        return 2.0 * math.pi * self.cap_radius + 4.0 * self.half_length

    def bounding_box(self):
        L, r = self.half_length, self.cap_radius
        return (-L - r, L + r, -r, r)

    def contains_many(self, pts):
        pts = as_points(pts)
        L, r = self.half_length, self.cap_radius
        cx = np.clip(pts[:, 0], -L, L)
        return np.hypot(pts[:, 0] - cx, pts[:, 1]) <= r

    def distance_to_boundary_many(self, pts):
        # Distance to the segment [-L, L] x {0} minus the cap radius, in absolute value.
        pts = as_points(pts)
        L, r = self.half_length, self.cap_radius
        cx = np.clip(pts[:, 0], -L, L)
        return np.abs(np.hypot(pts[:, 0] - cx, pts[:, 1]) - r)

    def project_to_boundary(self, p) -> BoundaryPoint:
        p = as_point(p)
        L, r = self.half_length, self.cap_radius
        cx = min(max(p.x, -L), L)
        vx, vy = p.x - cx, p.y
        norm = math.hypot(vx, vy)
        if norm <= EPS_GEOM:
            raise AmbiguousProjectionError(f"{p} lies on the stadium spine; projection is not unique")
        ux, uy = vx / norm, vy / norm
        return _boundary_point((cx + r * ux, r * uy), (ux, uy), 0)

    def sample_uniform(self, n, rng):
        L, r = self.half_length, self.cap_radius
        rect = 4.0 * L * r
        in_rect = rng.random(n) < rect / (rect + math.pi * r * r)
        u = rng.random((n, 2))
        box = np.column_stack((L * (2.0 * u[:, 0] - 1.0), r * (2.0 * u[:, 1] - 1.0)))
        # The two half-disk caps together form one disk; shift each half outward.
        cap = _sample_disk(rng, n, 0.0, r)
        cap[:, 0] += np.where(cap[:, 0] >= 0, L, -L)
        return np.where(in_rect[:, None], box, cap)

    def _at_arclength(self, s: np.ndarray):
        L, r = self.half_length, self.cap_radius
        arc = math.pi * r
        pos = np.empty((len(s), 2))
        nrm = np.empty((len(s), 2))
        # Right cap (angles -pi/2..pi/2), top side, left cap, bottom side.
        b1, b2, b3 = arc, arc + 2 * L, 2 * arc + 2 * L
        m = s < b1
        t = -math.pi / 2 + s[m] / r
        nrm[m] = np.column_stack((np.cos(t), np.sin(t)))
        pos[m] = np.array([L, 0.0]) + r * nrm[m]
        m = (s >= b1) & (s < b2)
        pos[m] = np.column_stack((L - (s[m] - b1), np.full(m.sum(), r)))
        nrm[m] = (0.0, 1.0)
        m = (s >= b2) & (s < b3)
        t = math.pi / 2 + (s[m] - b2) / r
        nrm[m] = np.column_stack((np.cos(t), np.sin(t)))
        pos[m] = np.array([-L, 0.0]) + r * nrm[m]
        m = s >= b3
        pos[m] = np.column_stack((-L + (s[m] - b3), np.full(m.sum(), -r)))
        nrm[m] = (0.0, -1.0)
        return pos, nrm

    def boundary_sample(self, resolution: float) -> BoundarySample:
        per = self.exact_perimeter()
        m = max(8, math.ceil(per * resolution))
        pos, nrm = self._at_arclength(np.arange(m) * (per / m))
        return BoundarySample(pos, nrm, np.zeros(m, dtype=int))

    def spec(self):
        return f"stadium:{self.half_length!r},{self.cap_radius!r}"


_NUM = r"\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*"
_PAIR = rf"\({_NUM},{_NUM}\)"


def parse_domain(spec: str) -> Domain:
    """Parse ``disk:R``, ``annulus:r_in,R_out``, ``stadium:L,rho`` or ``disks:(x,y),R,(x,y),R``."""
    kind, _, args = spec.strip().partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "disk":
            return Disk(float(args))
        if kind in ("annulus", "corona"):
            r_in, r_out = (float(v) for v in args.split(","))
            return Annulus(r_in, r_out)
        if kind == "stadium":
            L, r = (float(v) for v in args.split(","))
            return Stadium(L, r)
        if kind in ("disks", "disjoint_disks"):
            m = re.fullmatch(rf"\s*{_PAIR}\s*,{_NUM},\s*{_PAIR}\s*,{_NUM}", args)
            if m is None:
                raise ValueError("expected (x,y),R,(x,y),R")
            x1, y1, r1, x2, y2, r2 = (float(g) for g in m.groups())
            return DisjointDisks((x1, y1), r1, (x2, y2), r2)
    except ValueError as exc:
        raise ValueError(f"bad domain spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown domain kind in {spec!r}")
