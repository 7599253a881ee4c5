"""Planar predicates and vector helpers used throughout the package.

Points and vectors are plain length-2 numpy arrays (or anything np.asarray
accepts). All predicates take relative tolerances: an area comparison is
scaled by the square of the local coordinate magnitude, so results are
invariant under uniform rescaling of the input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerances: geometric predicates, rank cutoff, stress support."""

    eps_geom: float = 1e-9
    eps_rank: float = 1e-9
    eps_stress: float = 1e-8

    def __post_init__(self):
        if not (self.eps_geom > 0 and self.eps_rank > 0 and self.eps_stress > 0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def _pt(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (2,):
        raise ValueError(f"expected a 2d point, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite coordinate")
    return a


def cross2(u, v) -> float:
    """z-component of the cross product of two plane vectors."""
    return u[0] * v[1] - u[1] * v[0]


def orientation(p, q, r, tol: Tolerance = DEFAULT_TOL) -> int:
    """Sign of twice the signed area of triangle pqr: +1 ccw, -1 cw, 0 degenerate.

    Zero is returned when |area| <= eps_geom * scale^2 with scale the largest
    coordinate magnitude among the three points.
    """
    p, q, r = _pt(p), _pt(q), _pt(r)
    det = cross2(q - p, r - p)
    scale = max(np.abs(p).max(), np.abs(q).max(), np.abs(r).max())
    if abs(det) <= 2.0 * tol.eps_geom * scale * scale:
        return 0
    return 1 if det > 0 else -1


def points_coincide(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    a, b = _pt(a), _pt(b)
    scale = max(np.abs(a).max(), np.abs(b).max(), 1.0)
    return bool(np.max(np.abs(a - b)) <= tol.eps_geom * scale)


def _on_segment(p, a, b, tol: Tolerance) -> bool:
    # collinearity assumed; checks p within the closed axis-aligned box of a,b
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    scale = max(np.abs(a).max(), np.abs(b).max(), 1.0)
    pad = tol.eps_geom * scale
    return bool(np.all(p >= lo - pad) and np.all(p <= hi + pad))


def segments_properly_intersect(a1, a2, b1, b2, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff closed segments a1a2, b1b2 share a point other than a common endpoint.

    Touching at a shared endpoint does not count; a T-junction (an endpoint in
    the other segment's relative interior) does, and so does collinear overlap
    of positive length.
    """
    a1, a2, b1, b2 = _pt(a1), _pt(a2), _pt(b1), _pt(b2)
    if points_coincide(a1, a2, tol) or points_coincide(b1, b2, tol):
        raise ValueError("zero-length segment")

    shared = [
        (i, j)
        for i, p in enumerate((a1, a2))
        for j, q in enumerate((b1, b2))
        if points_coincide(p, q, tol)
    ]
    o1 = orientation(a1, a2, b1, tol)
    o2 = orientation(a1, a2, b2, tol)
    o3 = orientation(b1, b2, a1, tol)
    o4 = orientation(b1, b2, a2, tol)

    if shared:
        if len(shared) > 1:
            return True  # both endpoints shared: identical or reversed segment
        i, j = shared[0]
        pa = (a1, a2)[1 - i]  # free endpoint of segment a
        pb = (b1, b2)[1 - j]
        s = (a1, a2)[i]
        if orientation(s, pa, pb, tol) != 0:
            return False
        # collinear spokes from the shared endpoint: crossing iff they overlap
        return float(np.dot(pa - s, pb - s)) > 0.0

    if o1 != o2 and o3 != o4 and o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        return True
    # collinear / touching cases
    if o1 == 0 and _on_segment(b1, a1, a2, tol):
        return True
    if o2 == 0 and _on_segment(b2, a1, a2, tol):
        return True
    if o3 == 0 and _on_segment(a1, b1, b2, tol):
        return True
    if o4 == 0 and _on_segment(a2, b1, b2, tol):
        return True
    # proper crossing with one endpoint exactly on the other segment is caught
    # above; remaining mixed-sign cases with a zero are non-crossing
    return o1 != o2 and o3 != o4 and (o1 * o2 < 0 and o3 * o4 < 0)


def point_on_segment_interior(p, a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff p lies on segment ab strictly between (not within tol of) its ends."""
    p, a, b = _pt(p), _pt(a), _pt(b)
    if points_coincide(p, a, tol) or points_coincide(p, b, tol):
        return False
    if orientation(a, b, p, tol) != 0:
        return False
    return _on_segment(p, a, b, tol)


def ccw_angle(u, v) -> float:
    """Counter-clockwise rotation angle in [0, 2*pi) taking direction u to v."""
    ux, uy = float(u[0]), float(u[1])
    vx, vy = float(v[0]), float(v[1])
    if not all(map(math.isfinite, (ux, uy, vx, vy))):
        raise ValueError("non-finite direction")
    if (ux == 0.0 and uy == 0.0) or (vx == 0.0 and vy == 0.0):
        raise ValueError("zero vector has no direction")
    ang = math.atan2(ux * vy - uy * vx, ux * vx + uy * vy)
    if ang < 0.0:
        ang += TWO_PI
    return ang


def rotate90(v) -> np.ndarray:
    """Fixed counter-clockwise quarter turn (dx, dy) -> (-dy, dx)."""
    v = np.asarray(v, dtype=float)
    return np.array([-v[1], v[0]])


def polygon_signed_area(points) -> float:
    """Signed area of a polygon given as an (n, 2) array; ccw positive."""
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def point_in_polygon(p, polygon, tol: Tolerance = DEFAULT_TOL) -> int:
    """Locate p against a simple polygon: +1 inside, 0 on boundary, -1 outside."""
    p = _pt(p)
    poly = np.asarray(polygon, dtype=float)
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if points_coincide(p, a, tol) or point_on_segment_interior(p, a, b, tol):
            return 0
    # winding by crossing number against a horizontal ray
    inside = False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if (a[1] > p[1]) != (b[1] > p[1]):
            xcross = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if xcross > p[0]:
                inside = not inside
    return 1 if inside else -1


def polygon_is_simple(points, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the closed polygon has no self-intersections (incl. overlaps)."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 3:
        return False
    for i in range(n):
        a1, a2 = pts[i], pts[(i + 1) % n]
        if points_coincide(a1, a2, tol):
            return False
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                # adjacent sides share an endpoint; overlap is still a failure
                a1, a2 = pts[i], pts[(i + 1) % n]
                b1, b2 = pts[j], pts[(j + 1) % n]
                if segments_properly_intersect(a1, a2, b1, b2, tol):
                    return False
                continue
            if segments_properly_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n], tol):
                return False
    return True
