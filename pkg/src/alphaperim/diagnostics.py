"""Empirical checks of the geometric events that control the estimator.

These measure, on one realized sample, how far the alpha-edges sit from the
true boundary, how well they align with it, whether they form one simple
cycle per boundary component, and whether the length-ratio sandwich
``1 - H/r <= len(C)/len(boundary) <= (1 + H/r) / cos(angle)`` holds.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import asdict, dataclass, fields

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .alpha_shape import AlphaShape, classify_sidedness, isolated_points, shape_perimeter
from .domains import AmbiguousProjectionError, Domain
from .geom import angle_between_lines

K_SUB = 16
DEFAULT_RESOLUTION = 2000


class ProbeError(ValueError):
    """A probe point on an edge could not be projected onto the boundary."""


@dataclass(frozen=True)
class EdgeDiagnostics:
    max_edge_length: float
    max_boundary_dist: float
    max_deviation_angle: float
    all_one_sided: bool
    isolated_count: int


@dataclass(frozen=True)
class SandwichReport:
    hausdorff: float
    deviation_angle: float
    ratio: float
    lower_bound: float
    upper_bound: float
    # None when the precondition hausdorff < rolling_r fails.
    holds: bool | None

    @property
    def evaluated(self) -> bool:
        return self.holds is not None


@dataclass(frozen=True)
class PolygonReport:
    all_degree_two: bool
    cycle_count: int
    boundary_components: int
    cycles_single_component: bool
    component_count_match: bool
    degree_histogram: dict[int, int]


def _probe_points(shape: AlphaShape, k_sub: int = K_SUB) -> np.ndarray:
    """``k_sub + 1`` equispaced points on every edge, shape (m, k_sub + 1, 2)."""
    p = shape.pairs
    a, b = shape.points[p[:, 0]], shape.points[p[:, 1]]
    t = np.linspace(0.0, 1.0, k_sub + 1)
    return a[:, None, :] + t[None, :, None] * (b - a)[:, None, :]


def deviation_angles(shape: AlphaShape, domain: Domain) -> np.ndarray:
    """Angle between each edge and the boundary tangent at its midpoint's projection."""
    out = np.empty(len(shape.edges))
    for k, e in enumerate(shape.edges):
        a, b = shape.points[e.i], shape.points[e.j]
        try:
            bp = domain.project_to_boundary(0.5 * (a + b))
        except AmbiguousProjectionError as exc:
            raise ProbeError(f"edge {e.pair}: midpoint projection failed: {exc}") from exc
        out[k] = angle_between_lines(b - a, bp.tangent)
    return out


def edge_diagnostics(shape: AlphaShape, domain: Domain) -> EdgeDiagnostics:
    if not shape.edges:
        return EdgeDiagnostics(0.0, 0.0, 0.0, True, len(isolated_points(shape.points, shape.alpha)))
    probes = _probe_points(shape)
    dist = domain.distance_to_boundary_many(probes.reshape(-1, 2)).reshape(probes.shape[:2])
    angles = deviation_angles(shape, domain)
    return EdgeDiagnostics(
        max_edge_length=float(shape.edge_lengths().max()),
        max_boundary_dist=float(dist.max()),
        max_deviation_angle=float(angles.max()),
        all_one_sided=all(classify_sidedness(e).one_sided for e in shape.edges),
        isolated_count=len(isolated_points(shape.points, shape.alpha)),
    )


def _edge_samples(shape: AlphaShape, resolution: float) -> np.ndarray:
    chunks = []
    for e in shape.edges:
        a, b = shape.points[e.i], shape.points[e.j]
        m = max(2, math.ceil(math.dist(a, b) * resolution) + 1)
        t = np.linspace(0.0, 1.0, m)[:, None]
        chunks.append(a + t * (b - a))
    return np.vstack(chunks)


def hausdorff_to_boundary(shape: AlphaShape, domain: Domain, resolution: float = DEFAULT_RESOLUTION) -> float:
    """Hausdorff distance between the union of edges and the boundary, plus ``1/resolution``.

    Both sets are sampled at ``resolution`` points per unit length. The edge
    side uses exact distances to the boundary; the boundary side uses nearest
    edge samples. The added ``1/resolution`` covers the discretization, so the
    result is an upper estimate.
    """
    if not shape.edges:
        raise ValueError("Hausdorff distance of an empty alpha-shape is undefined")
    edge_pts = _edge_samples(shape, resolution)
    to_boundary = domain.distance_to_boundary_many(edge_pts).max()
    bnd = domain.boundary_sample(resolution).positions
    to_edges, _ = cKDTree(edge_pts).query(bnd)
    return float(max(to_boundary, to_edges.max()) + 1.0 / resolution)


def sandwich_check(shape: AlphaShape, domain: Domain, resolution: float = DEFAULT_RESOLUTION) -> SandwichReport:
    """Evaluate the length-ratio bounds implied by Hausdorff distance and deviation angle.

    The angle is probed at edge midpoints only, which approximates the
    supremum over the whole polygon.
    """
    h = hausdorff_to_boundary(shape, domain, resolution)
    ratio = shape_perimeter(shape) / domain.exact_perimeter()
    r = domain.rolling_r
    if not h < r:
        return SandwichReport(h, float("nan"), ratio, float("nan"), float("nan"), None)
    angle = float(deviation_angles(shape, domain).max())
    lower = 1.0 - h / r
    upper = (1.0 + h / r) / math.cos(angle)
    return SandwichReport(h, angle, ratio, lower, upper, bool(lower <= ratio <= upper))


def polygon_structure(shape: AlphaShape, domain: Domain) -> PolygonReport:
    """Check that the edges form one simple cycle per boundary component."""
    pairs = shape.pairs
    n_bnd = domain.n_components
    if len(pairs) == 0:
        return PolygonReport(False, 0, n_bnd, False, n_bnd == 0, {})
    verts, inv = np.unique(pairs, return_inverse=True)
    inv = inv.reshape(-1, 2)
    deg = np.bincount(inv.ravel(), minlength=len(verts))
    hist = dict(sorted(Counter(int(d) for d in deg).items()))
    m = len(verts)
    g = coo_matrix((np.ones(len(inv)), (inv[:, 0], inv[:, 1])), shape=(m, m))
    n_comp, labels = connected_components(g, directed=False)

    cycles = [c for c in range(n_comp) if np.all(deg[labels == c] == 2)]
    seen: list[int] = []
    single = True
    for c in cycles:
        ids = set()
        for v in verts[labels == c]:
            try:
                ids.add(domain.project_to_boundary(shape.points[v]).component_id)
            except AmbiguousProjectionError:
                ids.add(-1)
        if len(ids) != 1 or -1 in ids:
            single = False
        seen.extend(ids)
    all_two = bool(np.all(deg == 2))
    distinct = len(set(seen)) == len(seen)
    match = all_two and len(cycles) == n_bnd and single and distinct
    return PolygonReport(all_two, len(cycles), n_bnd, single and bool(cycles), match, hist)


def to_keyvalue(report) -> str:
    """Line-oriented ``key=value`` serialization of a report dataclass."""
    lines = []
    for k, v in asdict(report).items():
        if isinstance(v, dict):
            v = ";".join(f"{a}:{b}" for a, b in v.items())
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{k}={v}")
    return "\n".join(lines) + "\n"


def csv_header(report_type) -> list[str]:
    return [f.name for f in fields(report_type)]


def to_csv_row(report) -> str:
    """One CSV data row (no header) for a report dataclass; see :func:`csv_header`."""
    buf = io.StringIO()
    row = []
    for v in asdict(report).values():
        if isinstance(v, dict):
            v = ";".join(f"{a}:{b}" for a, b in v.items())
        elif isinstance(v, float):
            v = repr(v)
        row.append(v)
    csv.writer(buf, lineterminator="\n").writerow(row)
    return buf.getvalue()
