"""Alpha-edges of a planar sample and the two perimeter estimators built on them.

A pair ``(X_i, X_j)`` is an alpha-edge when some open disk of radius alpha has
both points on its boundary and no sample point inside. There are at most two
such disks per pair; an edge is *one-sided* when exactly one of them is empty
and *two-sided* when both are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay, QhullError, cKDTree

from .geom import EPS_GEOM, DiskCenterPair, Point2, arc_length_for_chord, as_points, disk_centers_many

# Bound on the (candidates x points) block held in memory by the brute-force scan.
_BLOCK = 2_000_000


@dataclass(frozen=True)
class AlphaEdge:
    i: int
    j: int
    centers: DiskCenterPair
    empty_plus: bool
    empty_minus: bool

    def __post_init__(self):
        if not self.i < self.j:
            raise ValueError(f"edge indices must satisfy i < j, got ({self.i}, {self.j})")
        if not (self.empty_plus or self.empty_minus):
            raise ValueError(f"edge ({self.i}, {self.j}) has no empty circumscribing disk")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class EdgeSidedness:
    one_sided: bool
    two_sided: bool


@dataclass
class AlphaShape:
    alpha: float
    points: np.ndarray
    edges: list[AlphaEdge] = field(default_factory=list)

    @property
    def pairs(self) -> np.ndarray:
        """Edge index pairs as an (m, 2) integer array."""
        if not self.edges:
            return np.empty((0, 2), dtype=np.intp)
        return np.array([e.pair for e in self.edges], dtype=np.intp)

    def edge_lengths(self) -> np.ndarray:
        p = self.pairs
        if len(p) == 0:
            return np.empty(0)
        d = self.points[p[:, 1]] - self.points[p[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    def pair_set(self) -> set[tuple[int, int]]:
        return {e.pair for e in self.edges}


def _validate(points, alpha: float) -> np.ndarray:
    pts = as_points(points)
    if not alpha > 0 or not math.isfinite(alpha):
        raise ValueError(f"alpha must be positive and finite, got {alpha}")
    if len(pts) != len(np.unique(pts, axis=0)):
        raise ValueError("sample contains duplicate points")
    return pts


def _candidate_centers(pts: np.ndarray, pairs: np.ndarray, alpha: float):
    """Drop pairs longer than 2*alpha and compute both centers for the rest."""
    a, b = pts[pairs[:, 0]], pts[pairs[:, 1]]
    d = np.hypot(*(b - a).T)
    keep = d <= 2.0 * alpha + EPS_GEOM
    pairs, a, b = pairs[keep], a[keep], b[keep]
    plus, minus, degenerate = disk_centers_many(a, b, alpha)
    return pairs, plus, minus, degenerate


def _blocked_bruteforce(pts: np.ndarray, centers: np.ndarray, pairs: np.ndarray, alpha: float) -> np.ndarray:
    """True where some point other than the pair lies strictly inside the open disk."""
    n = len(pts)
    out = np.zeros(len(centers), dtype=bool)
    step = max(1, _BLOCK // max(n, 1))
    for lo in range(0, len(centers), step):
        c = centers[lo : lo + step]
        pr = pairs[lo : lo + step]
        dist = np.hypot(c[:, None, 0] - pts[None, :, 0], c[:, None, 1] - pts[None, :, 1])
        rows = np.arange(len(c))
        dist[rows, pr[:, 0]] = np.inf
        dist[rows, pr[:, 1]] = np.inf
        out[lo : lo + step] = dist.min(axis=1) < alpha - EPS_GEOM
    return out


def _assemble(pts, alpha, pairs, plus, minus, degenerate, blocked_plus, blocked_minus) -> list[AlphaEdge]:
    edges = []
    empty_plus = ~blocked_plus
    # A degenerate pair has a single disk; both flags describe it.
    empty_minus = np.where(degenerate, empty_plus, ~blocked_minus)
    keep = np.flatnonzero(empty_plus | empty_minus)
    for k in keep:
        i, j = int(pairs[k, 0]), int(pairs[k, 1])
        centers = DiskCenterPair(
            Point2(float(plus[k, 0]), float(plus[k, 1])),
            Point2(float(minus[k, 0]), float(minus[k, 1])),
            bool(degenerate[k]),
        )
        edges.append(AlphaEdge(i, j, centers, bool(empty_plus[k]), bool(empty_minus[k])))
    return edges


def _edges_for_pairs(pts: np.ndarray, pairs: np.ndarray, alpha: float) -> list[AlphaEdge]:
    pairs, plus, minus, degenerate = _candidate_centers(pts, pairs, alpha)
    bp = _blocked_bruteforce(pts, plus, pairs, alpha)
    bm = _blocked_bruteforce(pts, minus, pairs, alpha)
    return _assemble(pts, alpha, pairs, plus, minus, degenerate, bp, bm)


def alpha_edges_bruteforce(points, alpha: float) -> list[AlphaEdge]:
    """All alpha-edges by testing every pair against every point. O(n^3)."""
    pts = _validate(points, alpha)
    n = len(pts)
    if n < 2:
        return []
    i, j = np.triu_indices(n, k=1)
    return _edges_for_pairs(pts, np.column_stack((i, j)).astype(np.intp), alpha)


def _delaunay_pairs(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unique sorted Delaunay edges and the indices qhull left out of the triangulation."""
    tri = Delaunay(pts)
    s = tri.simplices
    e = np.concatenate((s[:, [0, 1]], s[:, [1, 2]], s[:, [0, 2]]))
    e.sort(axis=1)
    e = np.unique(e, axis=0)
    dropped = np.unique(tri.coplanar[:, 0]) if len(tri.coplanar) else np.empty(0, dtype=np.intp)
    return e.astype(np.intp), dropped.astype(np.intp)


def _min_other_distance(tree: cKDTree, centers: np.ndarray, pairs: np.ndarray, alpha: float) -> np.ndarray:
    """Distance from each center to its nearest sample point outside the generating pair.

    With three neighbours at least one lies outside the pair, so the smallest
    such distance is exact. Points beyond ``alpha + eps`` report ``inf``.
    """
    k = min(3, tree.n)
    dist, idx = tree.query(centers, k=k, distance_upper_bound=alpha + 2 * EPS_GEOM)
    dist = dist.reshape(len(centers), k)
    idx = idx.reshape(len(centers), k)
    own = (idx == pairs[:, [0]]) | (idx == pairs[:, [1]])
    dist = np.where(own, np.inf, dist)
    return dist.min(axis=1)


def alpha_edges_fast(points, alpha: float) -> list[AlphaEdge]:
    """Alpha-edges restricted to Delaunay candidates, emptiness tested with a k-d tree.

    Pairs whose disk has another sample point within ``eps`` of its circle
    (near-cocircular configurations) are re-verified by brute force together
    with every pair among those boundary points.
    """
    pts = _validate(points, alpha)
    n = len(pts)
    if n < 2:
        return []
    try:
        cand, dropped = _delaunay_pairs(pts)
    except (QhullError, ValueError):
        # Too few or collinear points: the triangulation is undefined.
        return alpha_edges_bruteforce(pts, alpha)

    tree = cKDTree(pts)
    extra: set[tuple[int, int]] = set()
    for q in map(int, dropped):
        for k in tree.query_ball_point(pts[q], 2.0 * alpha + EPS_GEOM):
            if k != q:
                extra.add((min(q, k), max(q, k)))

    pairs, plus, minus, degenerate = _candidate_centers(pts, cand, alpha)
    dp = _min_other_distance(tree, plus, pairs, alpha)
    dm = _min_other_distance(tree, minus, pairs, alpha)
    blocked_plus = dp < alpha - EPS_GEOM
    blocked_minus = dm < alpha - EPS_GEOM

    lo, hi = alpha - EPS_GEOM, alpha + EPS_GEOM
    near = ((dp >= lo) & (dp <= hi)) | ((dm >= lo) & (dm <= hi))
    for k in np.flatnonzero(near):
        group = {int(pairs[k, 0]), int(pairs[k, 1])}
        for c in (plus[k], minus[k]):
            for q in tree.query_ball_point(c, hi):
                if abs(math.hypot(*(pts[q] - c)) - alpha) <= EPS_GEOM:
                    group.add(q)
        g = sorted(group)
        extra.update((g[a], g[b]) for a in range(len(g)) for b in range(a + 1, len(g)))

    edges = _assemble(pts, alpha, pairs, plus, minus, degenerate, blocked_plus, blocked_minus)
    if extra:
        # Brute-force verdicts replace fast-pass verdicts for every re-checked pair.
        merged = {e.pair: e for e in edges if e.pair not in extra}
        recheck = np.array(sorted(extra), dtype=np.intp)
        merged.update((e.pair, e) for e in _edges_for_pairs(pts, recheck, alpha))
        edges = list(merged.values())
    edges.sort(key=lambda e: e.pair)
    return edges


def build_alpha_shape(points, alpha: float, method: str = "fast") -> AlphaShape:
    if method == "fast":
        edges = alpha_edges_fast(points, alpha)
    elif method == "bruteforce":
        edges = alpha_edges_bruteforce(points, alpha)
    else:
        raise ValueError(f"unknown method {method!r}")
    return AlphaShape(float(alpha), as_points(points), edges)


def shape_perimeter(shape: AlphaShape) -> float:
    """Total length of the alpha-edges (the alpha-shape perimeter estimator)."""
    return float(math.fsum(shape.edge_lengths()))


def hull_perimeter(shape: AlphaShape) -> float:
    """Perimeter of the alpha-convex hull: each edge replaced by its radius-alpha arc."""
    return float(math.fsum(arc_length_for_chord(shape.alpha, ell) for ell in shape.edge_lengths()))


def isolated_points(points, alpha: float) -> list[int]:
    """Indices of points with no other sample point closer than 2*alpha."""
    pts = as_points(points)
    if len(pts) == 0:
        return []
    if len(pts) == 1:
        return [0]
    dist, _ = cKDTree(pts).query(pts, k=2)
    return [int(i) for i in np.flatnonzero(dist[:, 1] >= 2.0 * alpha)]


def classify_sidedness(edge: AlphaEdge) -> EdgeSidedness:
    if not (edge.empty_plus or edge.empty_minus):
        raise ValueError(f"edge {edge.pair} has no empty disk; not an alpha-edge")
    if edge.centers.degenerate:
        return EdgeSidedness(one_sided=True, two_sided=False)
    two = edge.empty_plus and edge.empty_minus
    return EdgeSidedness(one_sided=not two, two_sided=two)
