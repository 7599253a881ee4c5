"""Reciprocal diagrams: construction, verification, and the circuit theorems.

The Cremona reciprocal places one vertex per face of the stress-support
embedding. A primal edge oriented i->j with its left face L maps to the dual
edge from L* to R* with vector omega * (p_j - p_i); the outer-face vertex is
anchored at the origin. Closure of every dual cycle is exactly vertex
equilibrium of the stress.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geodesic import pseudo_quad_diagonal
from .geometry import DEFAULT_TOL, Tolerance, cross2, points_coincide, rotate90
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
    h_head,
    h_tail,
    is_pseudo_quadrangulation,
    is_pseudo_triangulation,
    is_non_crossing,
)
from .rigidity import (
    SupportRestriction,
    is_good_self_stress,
    restrict_to_support,
    self_stress_space,
)


class ReciprocalError(ValueError):
    """Reciprocal construction failed (closure defect, degenerate dual)."""


@dataclass
class ReciprocalDiagram:
    mode: str                      # cremona | maxwell
    positions: np.ndarray          # (num support faces, 2); anchor at origin
    dual_edges: tuple              # per support edge: (face tail=left, face head=right)
    anchor: int                    # support outer face id
    support: SupportRestriction    # primal restriction the diagram was built on
    fused_faces: tuple             # groups of original faces merged by dropped edges
    max_closure_defect: float

    @property
    def num_vertices(self) -> int:
        return len(self.positions)

    def framework(self, tol: Tolerance = DEFAULT_TOL) -> Framework:
        """Dual positions and edges as a framework (parallel edges permitted)."""
        return Framework.make(self.positions, self.dual_edges, tol, allow_multi=True)

    def edge_vector(self, e: int) -> np.ndarray:
        a, b = self.dual_edges[e]
        return self.positions[b] - self.positions[a]


def _fused_face_groups(fw: Framework, emb: PlaneEmbedding, sup: SupportRestriction,
                       sup_emb: PlaneEmbedding):
    """Original-face groups covered by each support face (singular diagnostics)."""
    orig_to_sup = {}
    vmap = {v: k for k, v in enumerate(sup.vertex_map)}
    for es, eo in enumerate(sup.edge_map):
        for d in (0, 1):
            orig_to_sup[emb.face_of[2 * eo + d]] = sup_emb.face_of[2 * es + d]
    groups = {}
    for orig_f, sup_f in orig_to_sup.items():
        groups.setdefault(sup_f, []).append(orig_f)
    return tuple(tuple(sorted(v)) for _, v in sorted(groups.items()) if len(v) > 1)


def cremona_reciprocal(fw: Framework, emb: PlaneEmbedding, omega,
                       tol: Tolerance = DEFAULT_TOL) -> ReciprocalDiagram:
    """Reciprocal with corresponding edges parallel, one vertex per support face."""
    omega = np.asarray(omega, dtype=float)
    sup = restrict_to_support(fw, omega, tol)
    semb, sfw, som = sup.embedding, sup.framework, sup.omega
    nf = len(semb.faces)
    pos = np.full((nf, 2), np.nan)
    pos[semb.outer_face] = 0.0

    dual_edges = []
    for e in range(sfw.m):
        dual_edges.append((semb.face_of[2 * e], semb.face_of[2 * e + 1]))

    # integrate dual edge vectors over a spanning tree of the dual graph
    stack = [semb.outer_face]
    seen = {semb.outer_face}
    incident = [[] for _ in range(nf)]
    for e, (fl, fr) in enumerate(dual_edges):
        incident[fl].append(e)
        incident[fr].append(e)
    while stack:
        f = stack.pop()
        for e in incident[f]:
            fl, fr = dual_edges[e]
            other = fr if f == fl else fl
            if other in seen:
                continue
            vec = som[e] * sfw.edge_vector(e)
            pos[other] = pos[f] + (vec if f == fl else -vec)
            seen.add(other)
            stack.append(other)
    if np.isnan(pos).any():
        raise ReciprocalError("dual graph is disconnected")

    defect = 0.0
    for e, (fl, fr) in enumerate(dual_edges):
        d = pos[fr] - pos[fl] - som[e] * sfw.edge_vector(e)
        defect = max(defect, float(np.linalg.norm(d)))
    limit = tol.eps_stress * sfw.scale() * float(np.abs(som).max())
    if defect > limit:
        raise ReciprocalError(f"dual cycles do not close (defect {defect:.3e} > {limit:.3e}); "
                              "stress is not an equilibrium")
    fused = _fused_face_groups(fw, emb, sup, semb)
    return ReciprocalDiagram("cremona", pos, tuple(dual_edges), semb.outer_face,
                             sup, fused, defect)


def maxwell_reciprocal(fw: Framework, emb: PlaneEmbedding, omega,
                       tol: Tolerance = DEFAULT_TOL) -> ReciprocalDiagram:
    """Cremona reciprocal rotated a quarter turn about the anchor."""
    rec = cremona_reciprocal(fw, emb, omega, tol)
    rotated = np.column_stack([-rec.positions[:, 1], rec.positions[:, 0]])
    return ReciprocalDiagram("maxwell", rotated, rec.dual_edges, rec.anchor,
                             rec.support, rec.fused_faces, rec.max_closure_defect)


def is_reciprocal_pair(fw1: Framework, emb1: PlaneEmbedding, fw2: Framework,
                       correspondence, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Corresponding edges parallel within tolerance (Cremona convention)."""
    pairs = list(correspondence.items()) if isinstance(correspondence, dict) \
        else list(enumerate(correspondence))
    if sorted(e1 for e1, _ in pairs) != list(range(fw1.m)) or \
            sorted(e2 for _, e2 in pairs) != list(range(fw2.m)):
        raise ValueError("correspondence is not a bijection between edge sets")
    for e1, e2 in pairs:
        u = fw1.edge_vector(e1)
        v = fw2.edge_vector(e2)
        if abs(cross2(u, v)) > tol.eps_geom * np.linalg.norm(u) * np.linalg.norm(v):
            return False
    return True


def _cyclic_orientation(seq_a, seq_b):
    """'preserved' / 'reversed' / None comparing two cyclic sequences."""
    if len(seq_a) != len(seq_b) or set(seq_a) != set(seq_b):
        return None
    n = len(seq_a)
    doubled = seq_b + seq_b
    for s in range(n):
        if doubled[s:s + n] == seq_a:
            return "preserved"
    rev = seq_b[::-1]
    doubled = rev + rev
    for s in range(n):
        if doubled[s:s + n] == seq_a:
            return "reversed"
    return None


@dataclass
class NoncrossingReport:
    noncrossing: bool
    orientation: str | None            # reversed / preserved / inconsistent / None
    dual_embedding_consistent: bool
    diagram: ReciprocalDiagram
    dual_embedding: PlaneEmbedding | None


def reciprocal_noncrossing_report(fw: Framework, emb: PlaneEmbedding, omega,
                                  tol: Tolerance = DEFAULT_TOL) -> NoncrossingReport:
    """Geometric non-crossing test plus dual-embedding and orientation checks.

    The reciprocal's own derived embedding must reproduce the combinatorial
    dual of the support embedding; a valid non-crossing reciprocal reverses
    the cyclic order of every face (preserving it is impossible).
    """
    rec = cremona_reciprocal(fw, emb, omega, tol)
    semb = rec.support.embedding

    try:
        dual_fw = rec.framework(tol)
    except FrameworkError:
        return NoncrossingReport(False, None, False, rec, None)
    if not is_non_crossing(dual_fw, tol):
        return NoncrossingReport(False, None, False, rec, None)

    try:
        demb = build_embedding(dual_fw, tol)
    except EmbeddingError:
        return NoncrossingReport(True, None, False, rec, None)

    # rotation at each dual vertex must be the primal face cycle, reversed
    orientations = set()
    consistent = True
    for f in range(len(semb.faces)):
        primal_cycle = [h >> 1 for h in semb.faces[f]]
        dual_rot = [h >> 1 for h in demb.rotations[f]]
        o = _cyclic_orientation(primal_cycle, dual_rot)
        if o is None:
            consistent = False
            break
        orientations.add(o)

    # derived dual faces must be the primal vertex cocycles
    if consistent:
        sfw = rec.support.framework
        primal_stars = sorted(sorted(h >> 1 for h in semb.rotations[v])
                              for v in range(sfw.n))
        dual_faces = sorted(sorted(h >> 1 for h in cyc) for cyc in demb.faces)
        consistent = primal_stars == dual_faces

    if not consistent:
        return NoncrossingReport(True, "inconsistent", False, rec, demb)
    orientation = orientations.pop() if len(orientations) == 1 else "inconsistent"
    return NoncrossingReport(True, orientation, orientation == "reversed", rec, demb)


@dataclass
class FaceVertexCounts:
    n: int
    e: int
    t: int
    q: int
    x: int
    y: int


def embedding_counts(emb: PlaneEmbedding) -> FaceVertexCounts:
    cc = counting_check(emb)
    return FaceVertexCounts(emb.framework.n, cc.e, cc.t, cc.q, cc.x, cc.y)


def count_corollaries_check(fw: Framework, emb: PlaneEmbedding, omega,
                            report: NoncrossingReport | None = None,
                            tol: Tolerance = DEFAULT_TOL) -> bool:
    """Count identities between a framework and its non-crossing reciprocal.

    Geometric circuit: t, q, y, x agree on both sides. Pseudo-triangulation
    with x non-pointed vertices: the reciprocal has one non-pointed vertex,
    x-1 pseudo-quadrangles, n-x pseudo-triangles. Almost-pointed with q
    pseudo-quadrangles: the reciprocal is a pseudo-triangulation with q+1
    non-pointed vertices.
    """
    if report is None:
        report = reciprocal_noncrossing_report(fw, emb, omega, tol)
    if not (report.noncrossing and report.dual_embedding_consistent):
        raise ValueError("count corollaries require a non-crossing reciprocal")
    semb = report.diagram.support.embedding
    sfw = report.diagram.support.framework
    pc = embedding_counts(semb)
    rc = embedding_counts(report.dual_embedding)
    ok = True
    if is_laman_circuit(sfw.edges, sfw.n) and len(report.diagram.support.dropped_edges) == 0 \
            and fw.m == sfw.m:
        ok = ok and (pc.t, pc.q, pc.x, pc.y) == (rc.t, rc.q, rc.x, rc.y)
    if is_pseudo_triangulation(semb):
        ok = ok and rc.x == 1 and rc.q == pc.x - 1 and rc.t == pc.n - pc.x
    if pc.x == 1:
        ok = ok and is_pseudo_triangulation(report.dual_embedding) \
            and rc.x == pc.q + 1
    return ok


@dataclass
class SingularCircuitReport:
    stress_dimension: int
    support_edges: tuple           # original edge indices in the support
    dropped_edges: tuple
    k: int
    support_counts: FaceVertexCounts
    support_is_pq: bool
    support_expected_q: int        # 2n_s - 2 - e_s
    reciprocal_report: NoncrossingReport
    reciprocal_counts: FaceVertexCounts
    spanning: bool                 # support spans every vertex
    merged_quads_ok: bool | None   # each support pq is a union of two primal faces
    boundary_in_support: bool | None
    ok: bool


def singular_circuit_report(fw: Framework, emb: PlaneEmbedding,
                            tol: Tolerance = DEFAULT_TOL) -> SingularCircuitReport:
    """Support, reciprocal and counts for a (possibly singular) circuit embedding."""
    if not is_laman_circuit(fw.edges, fw.n):
        raise ValueError("framework graph is not a Laman circuit")
    if not is_pseudo_triangulation(emb):
        raise ValueError("framework is not embedded as a pseudo-triangulation")
    basis = self_stress_space(fw, tol, emb)
    if len(basis) != 1:
        raise ReciprocalError(f"stress space has dimension {len(basis)} at tolerance; "
                              "cannot pick the circuit stress")
    st = basis[0]
    rep = reciprocal_noncrossing_report(fw, emb, st.omega, tol)
    sup = rep.diagram.support
    semb, sfw = sup.embedding, sup.framework
    sc = embedding_counts(semb)
    rc = embedding_counts(rep.dual_embedding) if rep.dual_embedding else None
    k = len(sup.dropped_edges)
    expected_q = 2 * sfw.n - 2 - sfw.m
    support_is_pq = is_pseudo_quadrangulation(semb)
    spanning = len(sup.dropped_vertices) == 0

    merged_ok = None
    boundary_ok = None
    if spanning and k > 0:
        groups = rep.diagram.fused_faces
        # dropped edges merge primal faces pairwise in the support embedding
        merged_ok = len(groups) == k and all(len(g) == 2 for g in groups)
        outer_edges = {h >> 1 for h in emb.faces[emb.outer_face]}
        boundary_ok = outer_edges.issubset(set(sup.edge_map))

    ok = (support_is_pq and sc.x == 1 and sc.q == expected_q
          and rep.noncrossing and rep.dual_embedding_consistent
          and rc is not None and is_pseudo_triangulation(rep.dual_embedding)
          and rc.t == sfw.n - 1 and rc.x == sc.q + 1)
    if spanning:
        ok = ok and sc.t == fw.n - 1 - 2 * k and sc.q == k
        if k > 0:
            ok = ok and bool(merged_ok) and bool(boundary_ok)
    return SingularCircuitReport(len(basis), sup.edge_map, sup.dropped_edges, k,
                                 sc, support_is_pq, expected_q, rep, rc,
                                 spanning, merged_ok, boundary_ok, ok)


def complete_to_laman_circuit(fw: Framework, emb: PlaneEmbedding, omega,
                              tol: Tolerance = DEFAULT_TOL) -> Framework:
    """Reciprocal of a good pseudo-triangulation stress, completed by diagonals.

    The reciprocal is an almost-pointed pseudo-quadrangulation; splitting each
    pseudo-quadrangle along a diagonal yields the almost-pointed
    pseudo-triangulation (a possibly singular Laman circuit) whose stress is
    supported on the pre-split edges.
    """
    if not is_pseudo_triangulation(emb):
        raise ValueError("input must be a pseudo-triangulation")
    good = is_good_self_stress(fw, emb, omega, tol)
    if not good.good:
        raise ValueError("stress is not good; reciprocal would cross")
    rec = cremona_reciprocal(fw, emb, omega, tol)
    dual_fw = rec.framework(tol)
    while True:
        demb = build_embedding(dual_fw, tol)
        quads = [f for f in demb.interior_faces()
                 if classify_faces(demb)[f].klass == "pseudo-quadrangle"]
        if not quads:
            break
        pair = pseudo_quad_diagonal(demb, quads[0], tol)
        dual_fw = Framework.make(dual_fw.points, list(dual_fw.edges) + [pair], tol)
    return dual_fw


def fit_translation_scale(src: np.ndarray, dst: np.ndarray):
    """Least-squares signed scale s and translation t with dst ~ s*src + t."""
    src = np.asarray(src, float)
    dst = np.asarray(dst, float)
    cs, cd = src.mean(axis=0), dst.mean(axis=0)
    a = src - cs
    b = dst - cd
    denom = float((a * a).sum())
    s = float((a * b).sum()) / denom if denom > 0 else 1.0
    t = cd - s * cs
    return s, t
