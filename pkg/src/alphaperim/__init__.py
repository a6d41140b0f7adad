"""Perimeter estimation of planar supports from uniform samples via the alpha-shape."""

from .alpha_shape import (
    AlphaEdge,
    AlphaShape,
    EdgeSidedness,
    alpha_edges_bruteforce,
    alpha_edges_fast,
    build_alpha_shape,
    classify_sidedness,
    hull_perimeter,
    isolated_points,
    shape_perimeter,
)
from .domains import Annulus, Disk, DisjointDisks, Domain, Stadium, parse_domain
from .geom import EPS_GEOM, DiskCenterPair, Point2, Segment, angle_between_lines, arc_length_for_chord, cap_area, disk_centers

__version__ = "0.1.0"
