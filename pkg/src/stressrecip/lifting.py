"""Polyhedral liftings of self-stressed frameworks and their surface checks.

The standard lift puts the outer face in the plane z = 0 and propagates face
gradients across each edge p->q (left face L, right face R) by
a_R = a_L + w * rotate90(q - p); offsets follow by continuity. With this rule
an edge is a valley exactly when its stress is negative, so the global sign
is flipped once, if needed, to make the boundary cycle valleys.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .geometry import DEFAULT_TOL, Tolerance, ccw_angle, point_in_polygon, polygon_is_simple, rotate90
from .plane_graph import Framework, PlaneEmbedding, classify_vertices, h_head, h_tail
from .reciprocal import ReciprocalDiagram
from .rigidity import SupportRestriction, restrict_to_support


class LiftingError(ValueError):
    """Lifting construction failed (closure defect above tolerance)."""


@dataclass
class Lifting:
    gradients: np.ndarray          # (faces, 2) plane gradient a_f per support face
    offsets: np.ndarray            # (faces,) plane offset b_f
    heights: np.ndarray            # per support vertex
    flip_applied: bool
    boundary_sign_mixed: bool      # boundary edges disagreed; no valley convention
    omega: np.ndarray              # stress actually lifted (after any flip)
    support: SupportRestriction
    max_closure_defect: float

    @property
    def embedding(self) -> PlaneEmbedding:
        return self.support.embedding

    @property
    def framework(self) -> Framework:
        return self.support.framework

    def face_height_at(self, f: int, p) -> float:
        return float(np.dot(self.gradients[f], p) + self.offsets[f])

    def peak_height(self) -> float:
        return float(self.heights.max())


def maxwell_lifting(fw: Framework, emb: PlaneEmbedding, omega,
                    tol: Tolerance = DEFAULT_TOL,
                    apply_valley_convention: bool = True) -> Lifting:
    """Standard lift of a self-stress: outer face at height zero, boundary valleys."""
    sup = restrict_to_support(fw, np.asarray(omega, dtype=float), tol)
    semb, sfw = sup.embedding, sup.framework
    som = sup.omega.copy()

    boundary = sorted({h >> 1 for h in semb.faces[semb.outer_face]})
    bsigns = {1 if som[e] > 0 else -1 for e in boundary}
    mixed = len(bsigns) != 1
    flip = apply_valley_convention and (not mixed) and bsigns == {1}
    if flip:
        som = -som

    nf = len(semb.faces)
    grads = np.full((nf, 2), np.nan)
    offs = np.full(nf, np.nan)
    grads[semb.outer_face] = 0.0
    offs[semb.outer_face] = 0.0

    incident = [[] for _ in range(nf)]
    for e in range(sfw.m):
        incident[semb.face_of[2 * e]].append(e)
        incident[semb.face_of[2 * e + 1]].append(e)
    stack = [semb.outer_face]
    seen = {semb.outer_face}
    while stack:
        f = stack.pop()
        for e in incident[f]:
            fl, fr = semb.face_of[2 * e], semb.face_of[2 * e + 1]
            other = fr if f == fl else fl
            if other in seen:
                continue
            i, j = sfw.edges[e]
            step = som[e] * rotate90(sfw.points[j] - sfw.points[i])
            if f == fl:
                grads[other] = grads[f] + step
            else:
                grads[other] = grads[f] - step
            offs[other] = offs[f] + float(np.dot(grads[f] - grads[other], sfw.points[i]))
            seen.add(other)
            stack.append(other)
    if np.isnan(offs).any():
        raise LiftingError("dual graph is disconnected")

    # closure: the gradient step equation must hold on every edge (values alone
    # can agree along an edge line while the cross-edge slope is wrong), and
    # the two planes must agree at the endpoints
    scale = sfw.scale()
    defect = 0.0
    for e in range(sfw.m):
        fl, fr = semb.face_of[2 * e], semb.face_of[2 * e + 1]
        i, j = sfw.edges[e]
        step = som[e] * rotate90(sfw.points[j] - sfw.points[i])
        gd = float(np.linalg.norm(grads[fr] - grads[fl] - step))
        defect = max(defect, gd * scale)
        for v in (i, j):
            p = sfw.points[v]
            d = abs(float(np.dot(grads[fl], p)) + offs[fl]
                    - float(np.dot(grads[fr], p)) - offs[fr])
            defect = max(defect, d)
    limit = tol.eps_stress * scale ** 2 * float(np.abs(som).max())
    if defect > limit:
        raise LiftingError(f"face planes do not close (defect {defect:.3e} > {limit:.3e})")

    heights = np.zeros(sfw.n)
    counts = np.zeros(sfw.n)
    for f in range(nf):
        for h in semb.faces[f]:
            v = h_tail(sfw, h)
            heights[v] += float(np.dot(grads[f], sfw.points[v])) + offs[f]
            counts[v] += 1
    heights /= counts
    return Lifting(grads, offs, heights, flip, mixed, som, sup, defect)


def coplanarity_check(lift: Lifting) -> float:
    """Max |face plane at vertex - vertex height| over all face-vertex incidences."""
    semb, sfw = lift.embedding, lift.framework
    worst = 0.0
    for f in range(len(semb.faces)):
        for h in semb.faces[f]:
            v = h_tail(sfw, h)
            worst = max(worst, abs(lift.face_height_at(f, sfw.points[v]) - lift.heights[v]))
    return worst


@dataclass
class ExtremumReport:
    local_maxima: tuple            # vertex components, each a sorted tuple
    local_minima: tuple            # vertex components strictly below their rim
    outer_face_is_min: bool
    peak_vertex: int | None        # single-vertex unique maximum, if any
    peak_is_distinguished: bool | None
    degenerate: bool               # flat lifting


def extremum_report(lift: Lifting, distinguished: int | None = None,
                    tol: Tolerance = DEFAULT_TOL) -> ExtremumReport:
    """Local extrema of the lifted surface with plateau components merged."""
    semb, sfw = lift.embedding, lift.framework
    z = lift.heights
    zscale = max(float(np.abs(z).max()), 1.0)
    htol = tol.eps_stress * zscale
    if float(np.abs(z).max()) <= htol:
        return ExtremumReport((), (), True, None, None, True)

    parent = list(range(sfw.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in sfw.edges:
        if abs(z[i] - z[j]) <= htol:
            parent[find(i)] = find(j)
    comps = {}
    for v in range(sfw.n):
        comps.setdefault(find(v), []).append(v)

    adj = sfw.adjacency()
    maxima, minima = [], []
    boundary = {h_tail(sfw, h) for h in semb.faces[semb.outer_face]}
    outer_comp = find(next(iter(boundary)))
    outer_is_min = True
    for root, verts in comps.items():
        vs = set(verts)
        outside = [z[w] - z[verts[0]] for v in verts for w, _ in adj[v] if w not in vs]
        if root == outer_comp:
            # the boundary plateau extends into the flat outer face
            outer_is_min = all(d > htol for d in outside)
            continue
        if outside and all(d < -htol for d in outside):
            maxima.append(tuple(sorted(verts)))
        if outside and all(d > htol for d in outside):
            minima.append(tuple(sorted(verts)))
    peak = None
    if len(maxima) == 1 and len(maxima[0]) == 1:
        peak = maxima[0][0]
    return ExtremumReport(tuple(maxima), tuple(minima), outer_is_min, peak,
                          None if distinguished is None else peak == distinguished,
                          False)


def _sector_directions(lift: Lifting, v: int, samples_per_sector: int = 12):
    """Sampled 3d directions spanning the lifted surface cone at v."""
    semb, sfw = lift.embedding, lift.framework
    dirs = []
    for h in semb.rotations[v]:
        aid = semb.angle_at[(v, h)]
        ang = semb.angles[aid]
        w0 = sfw.points[h_head(sfw, h)] - sfw.points[v]
        phi0 = math.atan2(w0[1], w0[0])
        f = ang.face
        for k in range(samples_per_sector + 1):
            phi = phi0 + ang.measure * k / samples_per_sector
            w = np.array([math.cos(phi), math.sin(phi)])
            dirs.append(np.array([w[0], w[1], float(np.dot(lift.gradients[f], w))]))
        # the edge direction itself, with the exact edge slope
        u = w0 / np.linalg.norm(w0)
        dirs.append(np.array([u[0], u[1], float(np.dot(lift.gradients[f], u))]))
    return np.array(dirs)


def pointedness_at_peak(lift: Lifting, tol: Tolerance = DEFAULT_TOL) -> list:
    """Vertices whose lifted neighborhood fits strictly in an open half-space.

    Feasibility is tested by maximizing the margin delta subject to
    m . u <= -delta over sampled cone directions u, |m|_inf <= 1; a strictly
    positive optimum certifies a supporting plane through the lifted vertex.
    """
    sfw = lift.framework
    zscale = max(float(np.abs(lift.heights).max()), 1.0)
    out = []
    for v in range(sfw.n):
        dirs = _sector_directions(lift, v)
        norms = np.linalg.norm(dirs, axis=1)
        dirs = dirs / norms[:, None]
        nc = len(dirs)
        # maximize delta: variables (m1, m2, m3, delta)
        c = np.array([0.0, 0.0, 0.0, -1.0])
        A = np.hstack([dirs, np.ones((nc, 1))])
        res = linprog(c, A_ub=A, b_ub=np.zeros(nc),
                      bounds=[(-1, 1), (-1, 1), (-1, 1), (0, None)],
                      method="highs")
        if res.status == 0 and res.x is not None and res.x[3] > 1e-6:
            out.append(v)
    return out


@dataclass
class LevelCurve:
    z: float
    points: np.ndarray
    closed: bool
    simple: bool
    n_components: int


def level_curve(lift: Lifting, z: float, tol: Tolerance = DEFAULT_TOL) -> LevelCurve:
    """Intersection polyline of the lifted surface with the plane at height z."""
    semb, sfw = lift.embedding, lift.framework
    peak = lift.peak_height()
    if not (0.0 < z < peak):
        raise ValueError(f"z must lie strictly between 0 and the peak {peak}")
    zscale = max(float(np.abs(lift.heights).max()), 1.0)
    nudge = 1e-12 * zscale
    while np.min(np.abs(lift.heights - z)) <= nudge:
        z += 2.0 * nudge

    crossings = {}
    for e, (i, j) in enumerate(sfw.edges):
        zi, zj = lift.heights[i], lift.heights[j]
        if (zi - z) * (zj - z) < 0:
            t = (z - zi) / (zj - zi)
            crossings[e] = sfw.points[i] + t * (sfw.points[j] - sfw.points[i])
    if not crossings:
        raise ValueError("no surface crossing at this height")

    # pair crossings within each face along the level line of its plane
    partner = {}
    for f in range(len(semb.faces)):
        on_face = [h >> 1 for h in semb.faces[f] if (h >> 1) in crossings]
        if not on_face:
            continue
        direction = rotate90(lift.gradients[f])
        on_face.sort(key=lambda e: float(np.dot(direction, crossings[e])))
        assert len(on_face) % 2 == 0, "odd number of level crossings in a face"
        for a, b in zip(on_face[0::2], on_face[1::2]):
            partner[(f, a)] = b
            partner[(f, b)] = a

    unused = set(crossings)
    components = []
    while unused:
        start = min(unused)
        pts = []
        e = start
        f = semb.face_of[2 * e]
        closed = False
        while True:
            pts.append(crossings[e])
            unused.discard(e)
            nxt = partner.get((f, e))
            if nxt is None:
                break
            e = nxt
            fl, fr = semb.face_of[2 * e], semb.face_of[2 * e + 1]
            f = fr if f == fl else fl
            if e == start:
                closed = True
                break
        components.append((np.array(pts), closed))

    pts, closed = components[0]
    simple = closed and len(pts) >= 3 and polygon_is_simple(pts, tol)
    return LevelCurve(z, pts, closed, simple, len(components))


@dataclass
class SaddleReport:
    direction: np.ndarray
    located_vertex: int | None     # vertex whose reciprocal face contains the direction
    pieces: dict                   # vertex -> piece count (None where degenerate)
    peak_vertex: int
    matches_prediction: bool


def saddle_analysis(lift: Lifting, recip: ReciprocalDiagram, direction,
                    tol: Tolerance = DEFAULT_TOL) -> SaddleReport:
    """Pieces a plane with the given gradient cuts each vertex neighborhood into.

    The count is the number of transversal sign changes of
    (a_F - direction) . w(phi) around the link of the vertex: 2 for an
    ordinary cut, 4 for a twisted saddle, 0 when the neighborhood stays on one
    side. The gradient identification is the Maxwell-reciprocal one, so the
    direction can be located inside a bounded reciprocal face or in its outer
    face.
    """
    if recip.mode != "maxwell":
        raise ValueError("saddle analysis expects the maxwell reciprocal")
    d = np.asarray(direction, dtype=float)
    semb, sfw = lift.embedding, lift.framework
    gscale = max(float(np.abs(lift.gradients).max()), 1.0)

    pieces = {}
    for v in range(sfw.n):
        count = 0
        degenerate = False
        for h in semb.rotations[v]:
            ang = semb.angles[semb.angle_at[(v, h)]]
            c = lift.gradients[ang.face] - d
            if float(np.linalg.norm(c)) <= tol.eps_geom * gscale:
                degenerate = True   # cutting plane parallel to a face at v
                break
            w0 = sfw.points[h_head(sfw, h)] - sfw.points[v]
            phi0 = math.atan2(w0[1], w0[0])
            theta = math.atan2(c[1], c[0])
            # zeros of cos(phi - theta) at theta +/- pi/2 within the open sector
            for zero in (theta + math.pi / 2, theta - math.pi / 2):
                rel = (zero - phi0) % (2.0 * math.pi)
                if min(rel, abs(rel - ang.measure), 2.0 * math.pi - rel) <= tol.eps_geom:
                    degenerate = True   # plane contains an edge at v
                    break
                if rel < ang.measure:
                    count += 1
            if degenerate:
                break
        pieces[v] = None if degenerate else count

    # locate the direction: the dual face of vertex v is the polygon of the
    # gradients of its incident faces; the peak's dual face is the unbounded one
    peak = int(np.argmax(lift.heights))
    located = None
    for v in range(sfw.n):
        if v == peak:
            continue
        poly = np.array([lift.gradients[semb.angles[semb.angle_at[(v, h)]].face]
                         for h in semb.rotations[v]])
        side = point_in_polygon(d, poly, tol)
        if side == 0:
            raise ValueError("direction lies on a reciprocal edge; perturb it")
        if side > 0:
            located = v
            break
    ok = True
    for v, cnt in pieces.items():
        if cnt is None:
            continue
        if located is None:
            want = 2
        elif v == located:
            want = 4
        elif v == peak:
            want = 0
        else:
            want = 2
        if cnt != want:
            ok = False
    return SaddleReport(d, located, pieces, peak, ok)


def gradient_diagram(lift: Lifting, tol: Tolerance = DEFAULT_TOL) -> Framework:
    """One point per face at its plane gradient, joined by dual adjacency.

    Coincides with the Maxwell reciprocal of the same stress: both anchor the
    outer face at the origin and use the same quarter-turn convention.
    """
    semb, sfw = lift.embedding, lift.framework
    edges = [(semb.face_of[2 * e], semb.face_of[2 * e + 1]) for e in range(sfw.m)]
    pts = lift.gradients.copy()
    pts.setflags(write=False)
    # bypass coincidence validation: a flat lifting collapses every gradient
    return Framework(pts, tuple(tuple(sorted(e)) for e in edges))
