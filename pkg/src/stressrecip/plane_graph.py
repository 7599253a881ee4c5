"""Combinatorial structure of a non-crossing framework.

The embedding is always derived from the coordinates: neighbors are sorted by
angle around each vertex and faces are traced from that rotation system.
Directed edges are encoded as half-edge ids (2*e for u->v, 2*e+1 for v->u,
where (u, v) = edges[e]) so parallel edges in derived dual structures are
handled uniformly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    DEFAULT_TOL,
    Tolerance,
    ccw_angle,
    cross2,
    point_on_segment_interior,
    points_coincide,
    polygon_signed_area,
    segments_properly_intersect,
)


class FrameworkError(ValueError):
    """Invalid framework input (bad indices, duplicates, coincident points)."""


class EmbeddingError(ValueError):
    """Framework cannot be embedded as required (crossing, disconnected, ...)."""


@dataclass(frozen=True)
class Framework:
    """Straight-line framework: vertex coordinates plus undirected edges."""

    points: np.ndarray            # (n, 2) float
    edges: tuple                  # tuple of (i, j) with i < j

    @staticmethod
    def make(points, edges, tol: Tolerance = DEFAULT_TOL, allow_multi: bool = False) -> "Framework":
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise FrameworkError("points must be an (n, 2) array")
        if not np.all(np.isfinite(pts)):
            raise FrameworkError("non-finite coordinate")
        n = len(pts)
        norm = []
        seen = set()
        for k, (i, j) in enumerate(edges):
            i, j = int(i), int(j)
            if i == j:
                raise FrameworkError(f"edge {k} is a self-loop on vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise FrameworkError(f"edge {k} has endpoint out of range")
            key = (min(i, j), max(i, j))
            if key in seen and not allow_multi:
                raise FrameworkError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        if n > 1:
            scale = max(float(np.abs(pts).max()), 1.0)
            gap = np.abs(pts[:, None, :] - pts[None, :, :]).max(axis=2)
            gap[np.diag_indices(n)] = np.inf
            i, j = np.unravel_index(int(np.argmin(gap)), gap.shape)
            if gap[i, j] <= tol.eps_geom * scale:
                raise FrameworkError(f"vertices {i} and {j} coincide")
        pts.setflags(write=False)
        return Framework(pts, tuple(norm))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        return len(self.edges)

    def scale(self) -> float:
        return max(float(np.abs(self.points).max()), 1e-300) if self.n else 1.0

    def edge_vector(self, e: int) -> np.ndarray:
        i, j = self.edges[e]
        return self.points[j] - self.points[i]

    def adjacency(self):
        adj = [[] for _ in range(self.n)]
        for e, (i, j) in enumerate(self.edges):
            adj[i].append((j, e))
            adj[j].append((i, e))
        return adj

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w, _ in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


# half-edge helpers: h = 2*e + d, d=0 runs i->j for edge (i, j), d=1 runs j->i

def h_edge(h: int) -> int:
    return h >> 1


def h_reverse(h: int) -> int:
    return h ^ 1


def h_tail(fw: Framework, h: int) -> int:
    i, j = fw.edges[h >> 1]
    return i if (h & 1) == 0 else j


def h_head(fw: Framework, h: int) -> int:
    i, j = fw.edges[h >> 1]
    return j if (h & 1) == 0 else i


def h_vector(fw: Framework, h: int) -> np.ndarray:
    v = fw.edge_vector(h >> 1)
    return v if (h & 1) == 0 else -v


CONVEX, FLAT, REFLEX = "convex", "flat", "reflex"


@dataclass(frozen=True)
class Angle:
    """Sector at `vertex` swept ccw from out-half-edge `h_from` to `h_to`."""

    vertex: int
    h_from: int
    h_to: int
    face: int
    measure: float
    kind: str        # convex / flat / reflex; flat counts as convex downstream

    @property
    def is_corner(self) -> bool:
        return self.kind != REFLEX


@dataclass(frozen=True)
class FaceInfo:
    face: int
    klass: str                   # pseudo-triangle / pseudo-quadrangle / pseudo-k-gon / convex / non-convex
    corners: int
    size: int
    simple: bool
    corner_angles: tuple         # angle indices that are corners, in boundary order
    angle_ids: tuple             # all angle indices in boundary order


@dataclass(frozen=True)
class VertexInfo:
    vertex: int
    pointed: bool
    reflex_angle: int | None     # angle index of the big angle, if any
    degree: int
    on_hull: bool


@dataclass
class PlaneEmbedding:
    framework: Framework
    rotations: list              # per vertex: out-half-edges ccw by angle
    faces: list                  # per face: list of half-edge ids (boundary walk)
    outer_face: int
    face_of: dict                # half-edge -> face id
    angles: list                 # list[Angle]
    angle_at: dict = field(default_factory=dict)   # (vertex, h_from) -> angle index
    tol: Tolerance = DEFAULT_TOL

    def face_vertices(self, f: int) -> list:
        return [h_tail(self.framework, h) for h in self.faces[f]]

    def face_polygon(self, f: int) -> np.ndarray:
        return self.framework.points[self.face_vertices(f)]

    def interior_faces(self) -> list:
        return [f for f in range(len(self.faces)) if f != self.outer_face]

    def vertex_angles(self, v: int) -> list:
        rot = self.rotations[v]
        return [self.angle_at[(v, h)] for h in rot]


def is_non_crossing(fw: Framework, tol: Tolerance = DEFAULT_TOL) -> bool:
    """No two edges properly intersect and no vertex sits inside an edge.

    Disjoint edge pairs and vertex-on-edge incidences are screened with
    vectorized orientation tests; pairs sharing an endpoint can only overlap
    collinearly and are handled by the careful scalar predicate.
    """
    pts = fw.points
    m = fw.m
    if m == 0:
        return True
    E = np.array(fw.edges)
    A1 = pts[E[:, 0]]
    A2 = pts[E[:, 1]]
    ai, bi = np.triu_indices(m, k=1)
    shared = (E[ai][:, :, None] == E[bi][:, None, :]).any(axis=(1, 2))

    def cross3(p, q, r):
        return (q[:, 0] - p[:, 0]) * (r[:, 1] - p[:, 1]) \
            - (q[:, 1] - p[:, 1]) * (r[:, 0] - p[:, 0])

    def near_zero(det, p, q, r):
        scale = np.maximum(np.abs(p), np.maximum(np.abs(q), np.abs(r))).max(axis=1)
        return np.abs(det) <= 2.0 * tol.eps_geom * scale * scale

    p1, p2 = A1[ai], A2[ai]
    q1, q2 = A1[bi], A2[bi]
    d1 = cross3(p1, p2, q1)
    d2 = cross3(p1, p2, q2)
    d3 = cross3(q1, q2, p1)
    d4 = cross3(q1, q2, p2)
    z1 = near_zero(d1, p1, p2, q1)
    z2 = near_zero(d2, p1, p2, q2)
    z3 = near_zero(d3, q1, q2, p1)
    z4 = near_zero(d4, q1, q2, p2)
    proper = (d1 * d2 < 0) & (d3 * d4 < 0) & ~(z1 | z2 | z3 | z4)

    pad = tol.eps_geom * np.maximum(np.abs(pts).max(), 1.0)

    def in_box(r, p, q):
        lo = np.minimum(p, q) - pad
        hi = np.maximum(p, q) + pad
        return ((r >= lo) & (r <= hi)).all(axis=1)

    touch = (z1 & in_box(q1, p1, p2)) | (z2 & in_box(q2, p1, p2)) \
        | (z3 & in_box(p1, q1, q2)) | (z4 & in_box(p2, q1, q2))
    if np.any(~shared & (proper | touch)):
        return False

    # pairs with a common endpoint can only overlap collinearly beyond it
    sk = np.flatnonzero(shared)
    if len(sk):
        Ea, Eb = E[ai[sk]], E[bi[sk]]
        match = Ea[:, :, None] == Eb[:, None, :]
        if np.any(match.sum(axis=(1, 2)) > 1):
            return False   # duplicate segment
        a_pos = match.any(axis=2).argmax(axis=1)
        b_pos = match.any(axis=1).argmax(axis=1)
        s = pts[np.take_along_axis(Ea, a_pos[:, None], axis=1).ravel()]
        fa = pts[np.take_along_axis(Ea, (1 - a_pos)[:, None], axis=1).ravel()]
        fb = pts[np.take_along_axis(Eb, (1 - b_pos)[:, None], axis=1).ravel()]
        det = (fa[:, 0] - s[:, 0]) * (fb[:, 1] - s[:, 1]) \
            - (fa[:, 1] - s[:, 1]) * (fb[:, 0] - s[:, 0])
        if np.any(near_zero(det, s, fa, fb)
                  & (((fa - s) * (fb - s)).sum(axis=1) > 0)):
            return False

    # vertices in the relative interior of non-incident edges
    for e, (i, j) in enumerate(fw.edges):
        det = (pts[j, 0] - pts[i, 0]) * (pts[:, 1] - pts[i, 1]) \
            - (pts[j, 1] - pts[i, 1]) * (pts[:, 0] - pts[i, 0])
        scale = np.maximum(np.abs(pts), max(abs(pts[i]).max(), abs(pts[j]).max())).max(axis=1)
        online = np.abs(det) <= 2.0 * tol.eps_geom * scale * scale
        lo = np.minimum(pts[i], pts[j]) - pad
        hi = np.maximum(pts[i], pts[j]) + pad
        inside = online & ((pts >= lo) & (pts <= hi)).all(axis=1)
        inside[i] = inside[j] = False
        hits = np.flatnonzero(inside)
        for v in hits:
            if point_on_segment_interior(pts[v], pts[i], pts[j], tol):
                return False
    return True


def _rotation_system(fw: Framework):
    rot = []
    for v in range(fw.n):
        rot.append([])
    for e, (i, j) in enumerate(fw.edges):
        rot[i].append(2 * e)
        rot[j].append(2 * e + 1)
    for v in range(fw.n):
        rot[v].sort(key=lambda h: math.atan2(*h_vector(fw, h)[::-1]))
    return rot


def build_embedding(fw: Framework, tol: Tolerance = DEFAULT_TOL,
                    check_crossings: bool = True) -> PlaneEmbedding:
    """Trace faces of the straight-line embedding given by the coordinates.

    After arriving at v along a directed edge, the walk leaves along the
    rotation predecessor of the reversed edge; interior faces come out
    counter-clockwise and the outer face is the unique clockwise cycle.
    """
    if fw.n < 2 or fw.m < 1:
        raise EmbeddingError("framework too small to embed")
    if not fw.is_connected():
        raise EmbeddingError("framework is disconnected")
    if check_crossings and not is_non_crossing(fw, tol):
        raise EmbeddingError("framework has crossing edges")

    rot = _rotation_system(fw)
    pos_in_rot = {}
    for v in range(fw.n):
        for idx, h in enumerate(rot[v]):
            pos_in_rot[h] = (v, idx)

    def next_half_edge(h: int) -> int:
        rev = h_reverse(h)
        v, idx = pos_in_rot[rev]
        return rot[v][(idx - 1) % len(rot[v])]

    faces = []
    face_of = {}
    for start in range(2 * fw.m):
        if start in face_of:
            continue
        cycle = []
        h = start
        while True:
            face_of[h] = len(faces)
            cycle.append(h)
            h = next_half_edge(h)
            if h == start:
                break
        faces.append(cycle)

    # outer face: unique negative signed area; a tree has one (area ~0) face
    areas = []
    pts = fw.points
    for cyc in faces:
        poly = np.array([pts[h_tail(fw, h)] for h in cyc])
        areas.append(polygon_signed_area(poly))
    scale = fw.scale()
    if len(faces) == 1:
        outer = 0
    else:
        neg = [f for f, a in enumerate(areas) if a < -tol.eps_geom * scale * scale]
        if len(neg) != 1:
            raise EmbeddingError(f"expected one clockwise face cycle, found {len(neg)}")
        outer = neg[0]

    # angles: walking transition (arrive u->v, leave v->w) owns the sector
    # swept ccw from ray v->w to ray v->u
    angles = []
    angle_at = {}
    for f, cyc in enumerate(faces):
        k = len(cyc)
        for idx in range(k):
            h_in = cyc[idx]
            h_out = cyc[(idx + 1) % k]
            v = h_head(fw, h_in)
            a_from = h_out
            a_to = h_reverse(h_in)
            if a_from == a_to:   # degree-1 vertex: full turn
                measure = 2.0 * math.pi
            else:
                measure = ccw_angle(h_vector(fw, a_from), h_vector(fw, a_to))
            if abs(measure - math.pi) <= tol.eps_geom:
                kind = FLAT
            elif measure < math.pi:
                kind = CONVEX
            else:
                kind = REFLEX
            if measure <= tol.eps_geom and a_from != a_to:
                raise EmbeddingError(f"zero angle at vertex {v}")
            angle_at[(v, a_from)] = len(angles)
            angles.append(Angle(v, a_from, a_to, f, measure, kind))

    emb = PlaneEmbedding(fw, rot, faces, outer, face_of, angles, angle_at, tol)

    for v in range(fw.n):
        flats = [a for a in emb.vertex_angles(v) if angles[a].kind == FLAT]
        if len(flats) >= 2:
            raise EmbeddingError(f"vertex {v} has two flat angles")

    if fw.n - fw.m + len(faces) != 2:
        raise EmbeddingError("Euler relation violated (input not planar as drawn?)")
    return emb


def classify_vertices(emb: PlaneEmbedding) -> list:
    """Pointedness per vertex: pointed iff one incident angle is strictly reflex."""
    fw = emb.framework
    out = []
    hull = set(h_tail(fw, h) for h in emb.faces[emb.outer_face])
    for v in range(fw.n):
        ids = emb.vertex_angles(v)
        reflex = [a for a in ids if emb.angles[a].kind == REFLEX]
        pointed = len(reflex) == 1
        out.append(VertexInfo(v, pointed, reflex[0] if pointed else None,
                              len(emb.rotations[v]), v in hull))
    return out


def _face_klass(corners: int, interior: bool, all_convex: bool) -> str:
    if not interior:
        return "convex" if all_convex else "non-convex"
    if corners == 3:
        return "pseudo-triangle"
    if corners == 4:
        return "pseudo-quadrangle"
    return f"pseudo-{corners}-gon"


def classify_faces(emb: PlaneEmbedding) -> list:
    """Corner counts and pseudo-polygon class per face.

    For the outer face a corner is a reflex sector of the walk, i.e. a strictly
    convex vertex of the hull polygon; its class reports the convexity of the
    boundary instead of a pseudo-k-gon label.
    """
    fw = emb.framework
    out = []
    for f, cyc in enumerate(emb.faces):
        ids = []
        for idx in range(len(cyc)):
            h_in = cyc[idx]
            h_out = cyc[(idx + 1) % len(cyc)]
            v = h_head(fw, h_in)
            ids.append(emb.angle_at[(v, h_out)])
        verts = emb.face_vertices(f)
        simple = len(set(verts)) == len(verts)
        if f == emb.outer_face:
            # a hull vertex is strictly convex iff its outer sector is reflex
            corner_ids = tuple(a for a in ids if emb.angles[a].kind == REFLEX)
            all_convex = len(corner_ids) == len(ids)
            out.append(FaceInfo(f, _face_klass(len(corner_ids), False, all_convex),
                                len(corner_ids), len(cyc), simple, corner_ids, tuple(ids)))
        else:
            corner_ids = tuple(a for a in ids if emb.angles[a].is_corner)
            out.append(FaceInfo(f, _face_klass(len(corner_ids), True, False),
                                len(corner_ids), len(cyc), simple, corner_ids, tuple(ids)))
    return out


def is_pseudo_triangulation(emb: PlaneEmbedding) -> bool:
    faces = classify_faces(emb)
    if faces[emb.outer_face].klass != "convex":
        return False
    return all(faces[f].klass == "pseudo-triangle" for f in emb.interior_faces())


def is_pseudo_quadrangulation(emb: PlaneEmbedding) -> bool:
    faces = classify_faces(emb)
    if faces[emb.outer_face].klass != "convex":
        return False
    return all(faces[f].klass in ("pseudo-triangle", "pseudo-quadrangle")
               for f in emb.interior_faces())


@dataclass(frozen=True)
class CountingCheck:
    e: int
    t: int
    q: int
    x: int
    y: int
    holds: bool
    applicable: bool   # interior faces all pt/pq and outer boundary convex


def counting_check(emb: PlaneEmbedding) -> CountingCheck:
    """Angle count identity 2e = t + 3y + 4x - 4 for pseudo-quadrangulations."""
    faces = classify_faces(emb)
    verts = classify_vertices(emb)
    t = sum(1 for f in emb.interior_faces() if faces[f].klass == "pseudo-triangle")
    q = sum(1 for f in emb.interior_faces() if faces[f].klass == "pseudo-quadrangle")
    x = sum(1 for vi in verts if not vi.pointed)
    y = sum(1 for vi in verts if vi.pointed)
    e = emb.framework.m
    holds = 2 * e == t + 3 * y + 4 * x - 4
    applicable = (faces[emb.outer_face].klass == "convex"
                  and t + q == len(emb.faces) - 1)
    return CountingCheck(e, t, q, x, y, holds, applicable)


@dataclass(frozen=True)
class DualGraph:
    n: int                       # number of faces of the primal embedding
    edges: tuple                 # dual edge per primal edge: (face_left, face_right)
    outer_vertex: int            # dual vertex of the primal outer face

    def simple_edges(self):
        return [(min(a, b), max(a, b)) for a, b in self.edges]


def dual_graph(emb: PlaneEmbedding) -> DualGraph:
    """Combinatorial dual: a vertex per face, an edge per primal edge.

    The dual edge of primal edge e is oriented (left face, right face) of the
    directed half-edge 2e; a bridge (same face on both sides) is rejected.
    """
    fw = emb.framework
    dual_edges = []
    for e in range(fw.m):
        fl = emb.face_of[2 * e]       # face left of i->j is traced with i->j in it
        fr = emb.face_of[2 * e + 1]
        if fl == fr:
            raise EmbeddingError(f"edge {fw.edges[e]} is a bridge; dual would have a loop")
        dual_edges.append((fl, fr))
    return DualGraph(len(emb.faces), tuple(dual_edges), emb.outer_face)
