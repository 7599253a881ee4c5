"""Seeded instance generators used by tests, the acceptance suite and the CLI.

Every generator verifies its advertised classification before returning and
retries with fresh randomness on failure, so outputs are deterministic per
seed and always valid. Laman-circuit pseudo-triangulations come from two
families: wheels (convex rim plus an interior hub) and serpentine circuits
(Hamiltonian polygon triangulation plus the ear-to-ear edge) grown by
repeated edge splits starting from a wheel on three rim vertices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DEFAULT_TOL, Tolerance, rotate90
from .pebble import is_laman_circuit
from .plane_graph import (
    EmbeddingError,
    Framework,
    FrameworkError,
    PlaneEmbedding,
    build_embedding,
    classify_faces,
    classify_vertices,
    counting_check,
    is_non_crossing,
    is_pseudo_triangulation,
)
from .rigidity import check_vertex_conditions, reciprocal_vertex_polygon, self_stress_space
from .geometry import polygon_is_simple


class GenerationError(RuntimeError):
    """Search budget exhausted without a valid instance."""


@dataclass
class CircuitInstance:
    framework: Framework
    embedding: PlaneEmbedding
    omega: np.ndarray              # normalized circuit stress, boundary negative
    kind: str
    seed: int


def fix_k4() -> Framework:
    """The fixed K4 instance: triangle with an interior hub, rational stress."""
    return Framework.make([(0.0, 0.0), (4.0, 0.0), (2.0, 3.0), (2.0, 1.0)],
                          [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2)])


def _circuit_pt_checks(fw: Framework, tol: Tolerance, min_margin: float = 1e-5,
                       geometry_only: bool = False) -> CircuitInstance | None:
    """Validate a candidate Laman-circuit pseudo-triangulation; None if invalid.

    geometry_only skips the matroid and stress checks; intermediate stages of
    an edge-split growth are circuits by construction.
    """
    try:
        emb = build_embedding(fw, tol)
    except (FrameworkError, EmbeddingError):
        return None
    if not is_pseudo_triangulation(emb):
        return None
    vinfos = classify_vertices(emb)
    if sum(1 for v in vinfos if not v.pointed) != 1:
        return None
    if geometry_only:
        return CircuitInstance(fw, emb, np.zeros(fw.m), "", 0)
    if not is_laman_circuit(fw.edges, fw.n):
        return None
    basis = self_stress_space(fw, tol, emb)
    if len(basis) != 1:
        return None
    st = basis[0]
    if np.min(np.abs(st.omega)) < min_margin:
        return None   # too close to a singular stratum
    if not counting_check(emb).holds:
        return None
    return CircuitInstance(fw, emb, st.omega, "", 0)


def wheel(k: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> CircuitInstance:
    """Wheel with k rim vertices on a random circle and an interior hub."""
    if k < 3:
        raise ValueError("wheel needs at least 3 rim vertices")
    rng = np.random.default_rng((seed, 0x77EE1, k))
    for _ in range(200):
        angles = np.sort(rng.uniform(0, 2 * math.pi, k))
        if np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))) < 0.15:
            continue
        radius = rng.uniform(1.0, 5.0)
        rim = radius * np.column_stack([np.cos(angles), np.sin(angles)])
        hub = rim.mean(axis=0) * rng.uniform(0.2, 0.8) \
            + radius * rng.uniform(-0.15, 0.15, 2)
        pts = np.vstack([rim, hub])
        edges = [(i, (i + 1) % k) for i in range(k)] + [(k, i) for i in range(k)]
        try:
            fw = Framework.make(pts, edges, tol)
        except FrameworkError:
            continue
        inst = _circuit_pt_checks(fw, tol)
        if inst is not None:
            return CircuitInstance(fw, inst.embedding, inst.omega, f"wheel-{k}", seed)
    raise GenerationError(f"no wheel instance for k={k}, seed={seed}")


def _split_edge_candidate(fw: Framework, u: int, w: int, c: int, t: float,
                          delta: float, side: int) -> Framework | None:
    """Henneberg-II proposal: new vertex near segment (u, w), joined to u, w, c."""
    pu, pw = fw.points[u], fw.points[w]
    base = pu + t * (pw - pu)
    normal = rotate90(pw - pu)
    nn = np.linalg.norm(normal)
    if nn == 0:
        return None
    z = base + side * delta * np.linalg.norm(pw - pu) * normal / nn
    edges = [e for e in fw.edges if set(e) != {u, w}]
    zid = fw.n
    edges += [(u, zid), (w, zid), (c, zid)]
    try:
        return Framework.make(np.vstack([fw.points, z]), edges)
    except FrameworkError:
        return None


def serpentine_circuit(n: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> CircuitInstance:
    """Hamiltonian-triangulation circuit on n vertices, grown by ear-edge splits.

    Starting from a wheel on three rim vertices (= K4), each step splits the
    current ear-to-ear edge with a new vertex joined to a neighbor of the old
    ear, which is exactly how the serpentine family grows.
    """
    if n < 4:
        raise ValueError("circuits need at least 4 vertices")
    rng = np.random.default_rng((seed, 0x5E49, n))
    for _attempt in range(60):
        inst = wheel(3, int(rng.integers(1 << 30)))
        fw = inst.framework
        # K4 = snake on the 4-cycle u-b1-w-b2 plus diagonal (b1,b2) and ear edge (u,w)
        u, w = 3, 0            # hub and a rim vertex; any adjacent pair works
        snake_nbrs = (1, 2)
        ok = True
        while fw.n < n:
            grown = None
            for _try in range(80):
                c = int(rng.choice(snake_nbrs))
                t = rng.uniform(0.25, 0.75)
                delta = rng.uniform(0.03, 0.35)
                side = int(rng.choice([-1, 1]))
                cand = _split_edge_candidate(fw, u, w, c, t, delta, side)
                if cand is None:
                    continue
                check = _circuit_pt_checks(cand, tol, geometry_only=True)
                if check is not None:
                    grown = cand
                    break
            if grown is None:
                ok = False
                break
            z = grown.n - 1
            snake_nbrs = (w, c)
            w = z
            fw = grown
        if not ok:
            continue
        final = _circuit_pt_checks(fw, tol)
        if final is not None:
            return CircuitInstance(fw, final.embedding, final.omega,
                                   f"serpentine-{n}", seed)
    raise GenerationError(f"no serpentine circuit for n={n}, seed={seed}")


def circuit_pt(n: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> CircuitInstance:
    """A Laman-circuit pseudo-triangulation on n vertices, family by seed parity."""
    if n >= 5 and seed % 2 == 0:
        return serpentine_circuit(n, seed, tol)
    return wheel(n - 1, seed, tol)


def singular_concurrent() -> Framework:
    """Laman circuit whose stress provably drops one edge.

    Two triangles ABC (outer) and DEF joined by the matching AD, BF, CE plus
    the extra edge CF. The integer coordinates put A, D; B, F; and C, E on
    three lines through the origin, so the matching lines are exactly
    concurrent and the prism subgraph is degenerate: the unique self-stress
    vanishes on CF. Edge order: the triangles, the matching, then CF (last).
    """
    pts = [(-30, 0), (6, 30), (30, -15), (5, 0), (10, -5), (2, 10)]
    edges = [(0, 1), (1, 2), (0, 2),       # ABC
             (3, 4), (4, 5), (3, 5),       # DEF
             (0, 3), (1, 5), (2, 4),       # AD BF CE
             (2, 5)]                       # CF
    return Framework.make(pts, edges)


SINGULAR_DROPPED_EDGE = 9   # index of CF in singular_concurrent()


def singular_concurrent_perturbed(eps: float = 1e-3, seed: int = 0) -> Framework:
    """Same instance with vertices jittered off the concurrence stratum."""
    fw = singular_concurrent()
    rng = np.random.default_rng((seed, 0x5196))
    pts = fw.points + eps * fw.scale() * rng.uniform(-1, 1, fw.points.shape)
    return Framework.make(pts, fw.edges)


def nonconvex_wheel() -> Framework:
    """Wheel with a reflex rim vertex: non-crossing but its reciprocal crosses."""
    pts = [(0.0, 0.0), (4.0, 0.0), (1.0, 1.0), (0.0, 4.0), (0.8, 0.8)]
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)]
    return Framework.make(pts, edges)


def pointed_pt(n: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> Framework:
    """Pointed pseudo-triangulation: random triangulation of a convex polygon."""
    if n < 3:
        raise ValueError("need at least 3 vertices")
    rng = np.random.default_rng((seed, 0xF01D7ED, n))
    for _ in range(100):
        angles = np.sort(rng.uniform(0, 2 * math.pi, n))
        if np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))) < 0.1:
            continue
        radius = rng.uniform(1.0, 4.0)
        pts = radius * np.column_stack([np.cos(angles), np.sin(angles)])
        edges = [(i, (i + 1) % n) for i in range(n)]
        edges += _random_polygon_diagonals(list(range(n)), rng)
        fw = Framework.make(pts, edges, tol)
        emb = build_embedding(fw, tol)
        if is_pseudo_triangulation(emb) and \
                all(v.pointed for v in classify_vertices(emb)):
            return fw
    raise GenerationError(f"no pointed pt for n={n}, seed={seed}")


def _random_polygon_diagonals(ring, rng) -> list:
    """Diagonals of a random recursive triangulation of a convex polygon."""
    if len(ring) <= 3:
        return []
    i, j = ring[0], ring[-1]   # split along the "closing" edge
    k = int(rng.integers(1, len(ring) - 1))
    out = []
    if k != 1:
        out.append((min(i, ring[k]), max(i, ring[k])))
    if k != len(ring) - 2:
        out.append((min(j, ring[k]), max(j, ring[k])))
    out += _random_polygon_diagonals(ring[:k + 1], rng)
    out += _random_polygon_diagonals(ring[k:], rng)
    return out


def almost_pointed_noncircuit(n: int, seed: int, tol: Tolerance = DEFAULT_TOL):
    """Almost-pointed framework with e = 2n-2 whose graph is not a Laman circuit.

    A convex polygon is triangulated with an ear at vertex 1; pulling that
    vertex inside across its ear diagonal keeps a pointed pseudo-triangulation,
    and joining it to the apex of the face it landed in makes it the single
    non-pointed vertex. The new edge closes a K4 on four vertices, so the
    unique stress lives on that proper subgraph and the graph is no circuit.
    """
    if n < 5:
        raise ValueError("need at least 5 vertices")
    rng = np.random.default_rng((seed, 0xA1A0, n))
    for _ in range(200):
        angles = np.sort(rng.uniform(0, 2 * math.pi, n))
        if np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))) < 0.12:
            continue
        radius = rng.uniform(1.0, 4.0)
        pts = radius * np.column_stack([np.cos(angles), np.sin(angles)])
        # ear at vertex 1 with diagonal (0, 2); triangulate the remaining ring
        ring = list(range(2, n)) + [0]
        k = int(rng.integers(1, len(ring) - 1))
        x = ring[k]   # apex of the triangle resting on the diagonal (0, 2)
        edges = [(i, (i + 1) % n) for i in range(n)] + [(0, 2)]
        if k != 1:
            edges.append((min(2, x), max(2, x)))
        if k != len(ring) - 2:
            edges.append((min(0, x), max(0, x)))
        edges += _random_polygon_diagonals(ring[:k + 1], rng)
        edges += _random_polygon_diagonals(ring[k:], rng)
        # pull the ear vertex inside, past the diagonal, toward the apex
        mid = 0.5 * (pts[0] + pts[2])
        depth = rng.uniform(0.15, 0.5)
        pts = pts.copy()
        pts[1] = mid + depth * (pts[x] - mid)
        try:
            fw = Framework.make(pts, edges + [(min(1, x), max(1, x))], tol)
            emb = build_embedding(fw, tol)
        except (FrameworkError, EmbeddingError):
            continue
        vinfos = classify_vertices(emb)
        nonpointed = [v.vertex for v in vinfos if not v.pointed]
        if nonpointed != [1] or not is_pseudo_triangulation(emb):
            continue
        if is_laman_circuit(fw.edges, fw.n):
            continue
        basis = self_stress_space(fw, tol, emb)
        if len(basis) != 1 or basis[0].full_support:
            continue
        return fw, emb, basis[0]
    raise GenerationError(f"no almost-pointed non-circuit for n={n}, seed={seed}")


def two_nonpointed_pt() -> Framework:
    """Pseudo-triangulation with two non-pointed degree-3 vertices.

    No self-stress on it can satisfy the vertex conditions: a non-pointed
    degree-3 vertex admits only zero sign changes, and there can be just one
    such distinguished vertex. A face-condition-satisfying sign pattern still
    exists (all apex edges one sign, the rest the other).
    """
    pts = [(0.0, 0.0), (8.0, 0.0), (8.0, 6.0), (0.0, 6.0), (5.0, 2.0), (2.5, 3.8)]
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2),
             (4, 0), (4, 1), (4, 2), (5, 0), (5, 2), (5, 3)]
    return Framework.make(pts, edges)


def two_nonpointed_face_pattern(fw: Framework) -> np.ndarray:
    """Sign pattern: negative on edges at the interior apexes, else positive."""
    apexes = {4, 5}
    return np.array([-1.0 if (i in apexes or j in apexes) else 1.0
                     for i, j in fw.edges])


def bad_quadrangle_star(seed: int, want_bad: bool = True,
                        tol: Tolerance = DEFAULT_TOL):
    """Five-spoke star whose head-to-tail stress polygon self-intersects (or not).

    Returns (framework, omega): the center is vertex 0, spokes carry a closing
    stress with four sign changes around the vertex. want_bad selects whether
    the reciprocal pentagon is self-intersecting.
    """
    rng = np.random.default_rng((seed, 0xBADC0DE, int(want_bad)))
    for _ in range(5000):
        angles = np.sort(rng.uniform(0, 2 * math.pi, 5))
        if np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))) < 0.2:
            continue
        if np.max(np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))) > math.pi - 0.1:
            continue   # keep the center non-pointed
        radii = rng.uniform(0.5, 2.0, 5)
        spokes = radii[:, None] * np.column_stack([np.cos(angles), np.sin(angles)])
        # closing stresses: null space of the 2x5 matrix of spoke vectors
        _, _, vt = np.linalg.svd(spokes.T, full_matrices=True)
        basis = vt[2:]
        coef = rng.normal(size=3)
        omega_c = coef @ basis
        if np.min(np.abs(omega_c)) < 0.05 * np.max(np.abs(omega_c)):
            continue
        signs = np.sign(omega_c)
        changes = sum(signs[i] != signs[(i + 1) % 5] for i in range(5))
        if changes != 4:
            continue
        pts = np.vstack([[0.0, 0.0], spokes])
        fw = Framework.make(pts, [(0, i + 1) for i in range(5)], tol)
        emb = build_embedding(fw, tol)
        if classify_vertices(emb)[0].pointed:
            continue
        poly = reciprocal_vertex_polygon(emb, omega_c, 0)
        if polygon_is_simple(poly, tol) != want_bad:
            return fw, omega_c
    raise GenerationError(f"no bad-quadrangle star for seed={seed}")


def bad_quadrangle_witness(seed: int, want_bad: bool = True,
                           tol: Tolerance = DEFAULT_TOL):
    """Framework + stress passing the vertex conditions, reciprocal pentagon bad.

    A vertex needs degree at least five for its reciprocal cycle to
    self-intersect: with four sign changes around a degree-4 vertex every
    turning angle has the same sense and the cycle is convex. The graph here
    is a 4-wheel (hull 0..3, hub 4) plus vertex 5 inside the wedge (0, 4, 1)
    joined to 0, 1, 4, so the hub has degree five and the stress space is the
    two-dimensional span of the wheel stress and the K4(0,1,4,5) stress.
    Combinations with the wheel part positive and a large enough K4 part
    always satisfy the vertex conditions; the geometry decides whether the
    hub's reciprocal pentagon self-intersects.
    """
    rng = np.random.default_rng((seed, 0xBADF, int(want_bad)))
    edges = [(0, 1), (1, 2), (2, 3), (0, 3),              # hull
             (0, 4), (1, 4), (2, 4), (3, 4),              # hub spokes
             (0, 5), (1, 5), (4, 5)]                      # wedge vertex
    for _ in range(4000):
        angles = np.sort(rng.uniform(0, 2 * math.pi, 4))
        if np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))) < 0.3:
            continue
        hull = rng.uniform(1.0, 3.0) * np.column_stack([np.cos(angles), np.sin(angles)])
        hub = hull.mean(axis=0) + rng.uniform(-0.25, 0.25, 2)
        wgt = rng.dirichlet(np.full(3, rng.uniform(0.8, 3.0)))
        v = wgt @ np.array([hull[0], hub, hull[1]])
        pts = np.vstack([hull, hub, v])
        try:
            fw = Framework.make(pts, edges, tol)
            if not is_non_crossing(fw, tol):
                continue
            emb = build_embedding(fw, tol)
        except (FrameworkError, EmbeddingError):
            continue
        vinfos = classify_vertices(emb)
        if sorted(w_.vertex for w_ in vinfos if not w_.pointed) != [4, 5]:
            continue
        basis = self_stress_space(fw, tol, emb)
        if len(basis) != 2:
            continue
        for lam in np.geomspace(0.05, 50.0, 40):
            for b0, b1 in ((basis[0].omega, basis[1].omega),
                           (basis[1].omega, basis[0].omega)):
                for s0 in (1.0, -1.0):
                    for s1 in (1.0, -1.0):
                        omega = s0 * b0 + lam * s1 * b1
                        peak = np.max(np.abs(omega))
                        if np.min(np.abs(omega)) < 1e-4 * peak:
                            continue
                        if not check_vertex_conditions(emb, omega, tol).ok:
                            continue
                        poly = reciprocal_vertex_polygon(emb, omega, 4)
                        if polygon_is_simple(poly, tol) != want_bad:
                            return fw, emb, omega / peak
    raise GenerationError(f"no bad-quadrangle witness for seed={seed}")
