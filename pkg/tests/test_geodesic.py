import heapq
import math

import numpy as np
import pytest

from stressrecip.geodesic import (
    DiagonalError,
    pseudo_quad_diagonal,
    shortest_path_in_polygon,
    triangulate_polygon,
)
from stressrecip.geometry import (
    point_in_polygon,
    point_on_segment_interior,
    polygon_signed_area,
    segments_properly_intersect,
)
from stressrecip.plane_graph import Framework, build_embedding, classify_faces


def visibility_shortest_path_length(pts, src, dst):
    """Independent oracle: Dijkstra over the visibility graph."""
    n = len(pts)

    def visible(i, j):
        if (i - j) % n in (1, n - 1):
            return True
        a, b = pts[i], pts[j]
        for k in range(n):
            c, d = pts[k], pts[(k + 1) % n]
            if k in (i, j) or (k + 1) % n in (i, j):
                if segments_properly_intersect(a, b, c, d):
                    return False
                continue
            if segments_properly_intersect(a, b, c, d):
                return False
        for k in range(n):
            if k not in (i, j) and point_on_segment_interior(pts[k], a, b):
                return False
        mid = 0.5 * (a + b)
        return point_in_polygon(mid, pts) >= 0

    dist = {src: 0.0}
    heap = [(0.0, src)]
    while heap:
        d, v = heapq.heappop(heap)
        if v == dst:
            return d
        if d > dist.get(v, math.inf):
            continue
        for w in range(n):
            if w != v and visible(v, w):
                nd = d + float(np.linalg.norm(pts[v] - pts[w]))
                if nd < dist.get(w, math.inf) - 1e-12:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
    raise AssertionError("no path")


def path_length(pts, path):
    return sum(float(np.linalg.norm(pts[a] - pts[b])) for a, b in zip(path, path[1:]))


def star_polygon(rng, n):
    angles = np.sort(rng.uniform(0, 2 * math.pi, n))
    while np.min(np.diff(angles)) < 0.05:
        angles = np.sort(rng.uniform(0, 2 * math.pi, n))
    radii = rng.uniform(0.5, 2.0, n)
    return np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])


def test_triangulation_covers_polygon():
    rng = np.random.default_rng(2)
    for _ in range(25):
        n = int(rng.integers(4, 12))
        pts = star_polygon(rng, n)
        tris = triangulate_polygon(pts)
        assert len(tris) == n - 2
        area = sum(abs(polygon_signed_area(pts[list(t)])) for t in tris)
        assert area == pytest.approx(abs(polygon_signed_area(pts)), rel=1e-9)


def test_shortest_path_convex_is_direct():
    sq = np.array([(0, 0), (2, 0), (2, 2), (0, 2)], float)
    assert shortest_path_in_polygon(sq, 0, 2) == [0, 2]
    assert shortest_path_in_polygon(sq, 1, 3) == [1, 3]


def test_shortest_path_wraps_reflex():
    # deep dent at vertex 1 forces the geodesic around it
    pent = np.array([(0, 0), (2, 3), (4, 0), (4, 4), (0, 4)], float)
    assert shortest_path_in_polygon(pent, 0, 3) == [0, 1, 3]
    assert shortest_path_in_polygon(pent, 2, 4) == [2, 1, 4]


def test_shortest_path_matches_visibility_oracle():
    rng = np.random.default_rng(17)
    checked = 0
    for _ in range(30):
        n = int(rng.integers(5, 11))
        pts = star_polygon(rng, n)
        src, dst = rng.choice(n, size=2, replace=False)
        path = shortest_path_in_polygon(pts, int(src), int(dst))
        want = visibility_shortest_path_length(pts, int(src), int(dst))
        assert path_length(pts, path) == pytest.approx(want, rel=1e-9)
        checked += 1
    assert checked == 30


def quad_with_dent():
    pts = [(0, 0), (2, 3), (4, 0), (4, 4), (0, 4)]
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
    return Framework.make(pts, edges)


def test_diagonal_convex_quad():
    fw = Framework.make([(0, 0), (3, 0), (3, 3), (0, 3)],
                        [(0, 1), (1, 2), (2, 3), (3, 0)])
    emb = build_embedding(fw)
    inner = emb.interior_faces()[0]
    assert pseudo_quad_diagonal(emb, inner) == (0, 2)  # lex-smaller of the two


def test_diagonal_wraps_reflex_chain():
    emb = build_embedding(quad_with_dent())
    inner = emb.interior_faces()[0]
    assert classify_faces(emb)[inner].klass == "pseudo-quadrangle"
    pair = pseudo_quad_diagonal(emb, inner)
    assert pair == (1, 3)
    # inserting it yields two pseudo-triangles and keeps vertex 1 pointed
    fw2 = Framework.make(emb.framework.points, list(emb.framework.edges) + [pair])
    emb2 = build_embedding(fw2)
    klasses = sorted(classify_faces(emb2)[f].klass for f in emb2.interior_faces())
    assert klasses == ["pseudo-triangle", "pseudo-triangle"]


def test_diagonal_rejects_non_quad():
    fw = Framework.make([(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 2), (0, 2)])
    emb = build_embedding(fw)
    with pytest.raises(DiagonalError):
        pseudo_quad_diagonal(emb, emb.interior_faces()[0])
    with pytest.raises(DiagonalError):
        pseudo_quad_diagonal(emb, emb.outer_face)
