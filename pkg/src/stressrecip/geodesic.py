"""Shortest paths in simple polygons and pseudo-quadrangle diagonals.

The diagonal of a pseudo-quadrangle is found along the geodesic between a
pair of opposite corners: triangulate the face by ear clipping, walk the
triangle path, run a funnel over the portals, and take the unique segment of
the result that leaves the boundary.
"""
from __future__ import annotations

import numpy as np

from .geometry import DEFAULT_TOL, Tolerance, cross2
from .plane_graph import (
    EmbeddingError,
    Framework,
    PlaneEmbedding,
    build_embedding,
    classify_faces,
    classify_vertices,
    h_head,
)


class DiagonalError(ValueError):
    """No valid pseudo-quadrangle diagonal could be constructed."""


def _area2(pts, i, j, k) -> float:
    return cross2(pts[j] - pts[i], pts[k] - pts[i])


def triangulate_polygon(pts: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> list:
    """Ear-clipping triangulation of a simple ccw polygon; index triples."""
    n = len(pts)
    if n < 3:
        raise ValueError("polygon needs at least 3 vertices")
    idx = list(range(n))
    tris = []
    scale = max(float(np.abs(pts).max()), 1.0)
    eps = tol.eps_geom * scale * scale
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 2 * n * n:
            raise ValueError("ear clipping failed; polygon may not be simple")
        clipped = False
        m = len(idx)
        for pos in range(m):
            a, b, c = idx[(pos - 1) % m], idx[pos], idx[(pos + 1) % m]
            if _area2(pts, a, b, c) <= eps:
                continue  # reflex or degenerate corner
            ear = True
            for other in idx:
                if other in (a, b, c):
                    continue
                # inside-or-on test against the open ear triangle
                d1 = _area2(pts, a, b, other)
                d2 = _area2(pts, b, c, other)
                d3 = _area2(pts, c, a, other)
                if d1 >= -eps and d2 >= -eps and d3 >= -eps:
                    ear = False
                    break
            if ear:
                tris.append((a, b, c))
                idx.pop(pos)
                clipped = True
                break
        if not clipped:
            raise ValueError("no ear found; polygon may not be simple")
    tris.append(tuple(idx))
    return tris


def _triangle_path(tris, src, dst):
    """Path of triangle indices between one containing src and one containing dst."""
    adj = {}
    edge_owner = {}
    for t, tri in enumerate(tris):
        for k in range(3):
            e = frozenset((tri[k], tri[(k + 1) % 3]))
            if e in edge_owner:
                adj.setdefault(t, []).append((edge_owner[e], e))
                adj.setdefault(edge_owner[e], []).append((t, e))
            else:
                edge_owner[e] = t
    starts = [t for t, tri in enumerate(tris) if src in tri]
    goals = {t for t, tri in enumerate(tris) if dst in tri}
    best = None
    for s in starts:
        prev = {s: (None, None)}
        queue = [s]
        while queue:
            t = queue.pop(0)
            if t in goals:
                path = []
                node = t
                while node is not None:
                    path.append(node)
                    node = prev[node][0]
                path.reverse()
                if best is None or len(path) < len(best):
                    best = path
                break
            for nxt, e in adj.get(t, []):
                if nxt not in prev:
                    prev[nxt] = (t, e)
                    queue.append(nxt)
    if best is None:
        raise ValueError("triangles containing the endpoints are not connected")
    portals = []
    for a, b in zip(best, best[1:]):
        shared = set(tris[a]) & set(tris[b])
        portals.append(tuple(shared))
    return best, portals


def shortest_path_in_polygon(pts: np.ndarray, src: int, dst: int,
                             tol: Tolerance = DEFAULT_TOL) -> list:
    """Geodesic between two vertices of a simple ccw polygon, as vertex indices."""
    if src == dst:
        return [src]
    tris = triangulate_polygon(pts, tol)
    path, portals = _triangle_path(tris, src, dst)

    # orient each portal (left, right) as seen walking out of its first triangle
    oriented = []
    for t, portal in zip(path, portals):
        tri = tris[t]
        a, b = portal
        # portal appears as a ccw-directed side (u -> v) of triangle t; then
        # v is on the walker's left when crossing
        for k in range(3):
            u, v = tri[k], tri[(k + 1) % 3]
            if {u, v} == {a, b}:
                oriented.append((v, u))  # (left, right)
                break
    portals = oriented + [(dst, dst)]

    scale = max(float(np.abs(pts).max()), 1.0)
    eps = tol.eps_geom * scale * scale
    apex, left, right = src, src, src
    apex_i = left_i = right_i = 0
    out = [src]
    i = 0
    while i < len(portals):
        pl, pr = portals[i]
        if _area2(pts, apex, right, pr) >= -eps:
            if apex == right or _area2(pts, apex, left, pr) < eps:
                right, right_i = pr, i
            else:
                out.append(left)
                apex, apex_i = left, left_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        if _area2(pts, apex, left, pl) <= eps:
            if apex == left or _area2(pts, apex, right, pl) > -eps:
                left, left_i = pl, i
            else:
                out.append(right)
                apex, apex_i = right, right_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        i += 1
    if out[-1] != dst:
        out.append(dst)
    # collapse accidental repeats
    dedup = [out[0]]
    for v in out[1:]:
        if v != dedup[-1]:
            dedup.append(v)
    return dedup


def pseudo_quad_diagonal(emb: PlaneEmbedding, face: int,
                         tol: Tolerance = DEFAULT_TOL) -> tuple:
    """Diagonal splitting a pseudo-quadrangle face into two pseudo-triangles.

    Computes the geodesic between each pair of opposite corners, extracts its
    unique interior segment, validates that inserting it keeps the framework
    non-crossing and creates no new non-pointed vertex, and returns the
    lexicographically smaller valid endpoint pair.
    """
    fw = emb.framework
    if face == emb.outer_face:
        raise DiagonalError("outer face cannot be split")
    fi = classify_faces(emb)[face]
    if fi.klass != "pseudo-quadrangle":
        raise DiagonalError(f"face {face} is a {fi.klass}, not a pseudo-quadrangle")
    if not fi.simple:
        raise DiagonalError("face boundary is not a simple polygon")

    boundary = emb.face_vertices(face)
    pts = fw.points[boundary]
    corner_pos = []
    for pos in range(len(boundary)):
        h_in = emb.faces[face][pos]
        h_out = emb.faces[face][(pos + 1) % len(boundary)]
        aid = emb.angle_at[(h_head(fw, h_in), h_out)]
        if emb.angles[aid].is_corner:
            corner_pos.append((pos + 1) % len(boundary))
    corner_pos.sort()
    assert len(corner_pos) == 4

    n = len(boundary)
    before = sum(1 for v in classify_vertices(emb) if not v.pointed)
    candidates = []
    for c_src, c_dst in ((corner_pos[0], corner_pos[2]), (corner_pos[1], corner_pos[3])):
        try:
            path = shortest_path_in_polygon(pts, c_src, c_dst, tol)
        except ValueError:
            continue
        interior = [(a, b) for a, b in zip(path, path[1:])
                    if (a - b) % n not in (1, n - 1)]
        if len(interior) != 1:
            continue
        a, b = interior[0]
        vi, vj = boundary[a], boundary[b]
        pair = (min(vi, vj), max(vi, vj))
        try:
            fw2 = Framework.make(fw.points, list(fw.edges) + [pair], tol)
            emb2 = build_embedding(fw2, tol)
        except (ValueError, EmbeddingError):
            continue
        faces2 = classify_faces(emb2)
        new_faces = [f for f in emb2.interior_faces()
                     if pair in {tuple(sorted((fw2.edges[h >> 1]))) for h in emb2.faces[f]}]
        if len(new_faces) != 2:
            continue
        if any(faces2[f].klass != "pseudo-triangle" for f in new_faces):
            continue
        after = sum(1 for v in classify_vertices(emb2) if not v.pointed)
        if after != before:
            continue
        candidates.append(pair)
    if not candidates:
        raise DiagonalError(f"no valid diagonal found for face {face}")
    return min(candidates)
