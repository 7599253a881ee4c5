"""Rigidity matrix, self-stress space, sign patterns and condition checkers.

Sign-pattern checkers (face conditions, vertex conditions, bad quadrangles)
operate on an explicit per-edge vector: only its signs matter except for the
bad-quadrangle polygon, which uses the actual magnitudes. Checks on stresses
with zero entries must be run on the support subframework; use
restrict_to_support first.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import DEFAULT_TOL, Tolerance, polygon_is_simple
from .plane_graph import (
    Framework,
    PlaneEmbedding,
    build_embedding,
    classify_faces,
    classify_vertices,
    counting_check,
    is_pseudo_quadrangulation,
    is_pseudo_triangulation,
)


def rigidity_matrix(fw: Framework) -> np.ndarray:
    """|E| x 2|V| matrix; row of edge {i,j} carries p_i - p_j in i's columns."""
    R = np.zeros((fw.m, 2 * fw.n))
    for e, (i, j) in enumerate(fw.edges):
        d = fw.points[i] - fw.points[j]
        R[e, 2 * i:2 * i + 2] = d
        R[e, 2 * j:2 * j + 2] = -d
    return R


def rigidity_rank(fw: Framework, tol: Tolerance = DEFAULT_TOL) -> int:
    R = rigidity_matrix(fw)
    if R.size == 0:
        return 0
    s = np.linalg.svd(R, compute_uv=False)
    return int(np.sum(s > tol.eps_rank * s[0])) if s[0] > 0 else 0


@dataclass(frozen=True)
class SelfStress:
    """Per-edge scalars in vertex equilibrium, normalized to unit max-norm."""

    omega: np.ndarray
    residual: float               # max per-vertex equilibrium violation
    support: tuple                # edge indices with |omega| above threshold

    @property
    def full_support(self) -> bool:
        return len(self.support) == len(self.omega)


def equilibrium_residual(fw: Framework, omega) -> float:
    """Max over vertices of the norm of the weighted edge-vector sum."""
    omega = np.asarray(omega, dtype=float)
    force = np.zeros((fw.n, 2))
    for e, (i, j) in enumerate(fw.edges):
        d = fw.points[i] - fw.points[j]
        force[i] += omega[e] * d
        force[j] -= omega[e] * d
    return float(np.linalg.norm(force, axis=1).max()) if fw.n else 0.0


def _boundary_sign_fix(fw: Framework, omega: np.ndarray, emb: PlaneEmbedding | None,
                       tol: Tolerance) -> np.ndarray:
    """Orient the representative: boundary-cycle entries negative when decisive."""
    if emb is not None:
        boundary = {h >> 1 for h in emb.faces[emb.outer_face]}
        s = sum(omega[e] for e in boundary)
        if abs(s) > tol.eps_stress:
            return -omega if s > 0 else omega
    nz = np.flatnonzero(np.abs(omega) > tol.eps_stress)
    if len(nz) and omega[nz[0]] < 0:
        return -omega
    return omega


def make_self_stress(fw: Framework, omega, tol: Tolerance = DEFAULT_TOL,
                     emb: PlaneEmbedding | None = None) -> SelfStress:
    omega = np.asarray(omega, dtype=float).copy()
    peak = np.abs(omega).max()
    if peak > 0:
        omega /= peak
    omega = _boundary_sign_fix(fw, omega, emb, tol)
    support = tuple(int(e) for e in np.flatnonzero(np.abs(omega) > tol.eps_stress))
    return SelfStress(omega, equilibrium_residual(fw, omega), support)


def self_stress_space(fw: Framework, tol: Tolerance = DEFAULT_TOL,
                      emb: PlaneEmbedding | None = None) -> list:
    """Basis of the left null space of the rigidity matrix.

    Basis vectors are mutually orthogonal, scaled to unit max-norm and
    sign-fixed so that the boundary cycle (when an embedding is supplied and
    its boundary sum is decisively nonzero) comes out negative.
    """
    R = rigidity_matrix(fw)
    if fw.m == 0:
        return []
    U, s, _ = np.linalg.svd(R, full_matrices=True)
    cutoff = tol.eps_rank * (s[0] if len(s) and s[0] > 0 else 1.0)
    rank = int(np.sum(s > cutoff))
    basis = []
    for k in range(rank, fw.m):
        basis.append(make_self_stress(fw, U[:, k], tol, emb))
    return basis


def stress_dimension_bound_check(fw: Framework, emb: PlaneEmbedding,
                                 tol: Tolerance = DEFAULT_TOL) -> bool:
    """dim(stress space) <= #non-pointed vertices; equality for pseudo-triangulations."""
    dim = fw.m - rigidity_rank(fw, tol)
    x = sum(1 for vi in classify_vertices(emb) if not vi.pointed)
    if is_pseudo_triangulation(emb):
        return dim == x
    return dim <= x


@dataclass(frozen=True)
class SupportRestriction:
    framework: Framework
    embedding: PlaneEmbedding
    omega: np.ndarray             # per edge of the restricted framework
    edge_map: tuple               # restricted edge index -> original edge index
    vertex_map: tuple             # restricted vertex index -> original vertex index
    dropped_edges: tuple          # original edge indices dropped
    dropped_vertices: tuple


def restrict_to_support(fw: Framework, omega, tol: Tolerance = DEFAULT_TOL) -> SupportRestriction:
    """Subframework carrying the nonzero entries of omega, reindexed."""
    omega = np.asarray(omega, dtype=float)
    peak = np.abs(omega).max()
    if peak <= 0:
        raise ValueError("zero stress has no support")
    keep = [e for e in range(fw.m) if abs(omega[e]) > tol.eps_stress * peak]
    dropped = tuple(e for e in range(fw.m) if e not in set(keep))
    verts = sorted({v for e in keep for v in fw.edges[e]})
    vmap = {v: k for k, v in enumerate(verts)}
    sub = Framework.make(fw.points[verts], [(vmap[fw.edges[e][0]], vmap[fw.edges[e][1]]) for e in keep], tol)
    emb = build_embedding(sub, tol)
    return SupportRestriction(sub, emb, omega[keep].copy(), tuple(keep), tuple(verts),
                              dropped, tuple(v for v in range(fw.n) if v not in vmap))


FACE_PROPER, VERTEX_PROPER = "face-proper", "vertex-proper"


@dataclass
class AngleClassification:
    signs: np.ndarray                  # +/-1 per edge
    change: list                       # per angle id: signs differ across the sector
    proper: list                       # per angle id: FACE_PROPER or VERTEX_PROPER
    vertex_changes: list               # per vertex: number of sign changes
    vertex_change_at_big: list         # per vertex: change at the reflex angle
    face_changes: list                 # per face: number of sign changes
    face_corner_changes: list          # per face: changes located at corners
    near_threshold: tuple = ()         # edges whose magnitude sits near the cutoff


def classify_angles(emb: PlaneEmbedding, omega, tol: Tolerance = DEFAULT_TOL) -> AngleClassification:
    """Sign changes and face/vertex-properness of every angle.

    A sector is face-proper when it is a corner with a sign change or a reflex
    angle without one; the complementary sectors are vertex-proper. The stress
    must be nonzero on every edge of the embedding.
    """
    fw = emb.framework
    omega = np.asarray(omega, dtype=float)
    peak = np.abs(omega).max()
    if peak <= 0 or np.any(np.abs(omega) <= tol.eps_stress * peak):
        raise ValueError("stress vanishes on an edge; restrict to the support first")
    near = tuple(int(e) for e in np.flatnonzero(np.abs(omega) <= 10 * tol.eps_stress * peak))
    signs = np.where(omega > 0, 1, -1).astype(int)

    change = [False] * len(emb.angles)
    proper = [""] * len(emb.angles)
    for aid, ang in enumerate(emb.angles):
        s1 = signs[ang.h_from >> 1]
        s2 = signs[ang.h_to >> 1]
        change[aid] = s1 != s2
        if ang.is_corner:
            proper[aid] = FACE_PROPER if change[aid] else VERTEX_PROPER
        else:
            proper[aid] = VERTEX_PROPER if change[aid] else FACE_PROPER

    vertex_changes = []
    vertex_big = []
    for v in range(fw.n):
        ids = emb.vertex_angles(v)
        cnt = sum(1 for a in ids if change[a])
        big = any(change[a] and emb.angles[a].kind == "reflex" for a in ids)
        vertex_changes.append(cnt)
        vertex_big.append(big)

    face_changes = []
    face_corner = []
    for f in range(len(emb.faces)):
        ids = [a for a in range(len(emb.angles)) if emb.angles[a].face == f]
        face_changes.append(sum(1 for a in ids if change[a]))
        face_corner.append(sum(1 for a in ids if change[a] and emb.angles[a].is_corner))
    return AngleClassification(signs, change, proper, vertex_changes, vertex_big,
                               face_changes, face_corner, near)


@dataclass
class FaceConditionReport:
    ok: bool
    outer_ok: bool
    verdicts: dict                 # face id -> (ok, reason)


def check_face_conditions(emb: PlaneEmbedding, omega, tol: Tolerance = DEFAULT_TOL) -> FaceConditionReport:
    """Necessary face conditions for a non-crossing reciprocal.

    Outer boundary strictly convex with no sign changes; every interior face a
    pseudo-triangle with two corner sign changes, a pseudo-triangle with four
    changes (three at corners), or a pseudo-quadrangle with four corner changes.
    """
    ac = classify_angles(emb, omega, tol)
    faces = classify_faces(emb)
    verdicts = {}
    outer = emb.outer_face
    outer_ok = faces[outer].klass == "convex" and ac.face_changes[outer] == 0
    verdicts[outer] = (outer_ok, "outer convex, no sign changes" if outer_ok
                       else f"outer {faces[outer].klass}, {ac.face_changes[outer]} changes")
    ok = outer_ok
    for f in emb.interior_faces():
        fi = faces[f]
        ch, chc = ac.face_changes[f], ac.face_corner_changes[f]
        if fi.klass == "pseudo-triangle":
            good = (ch == 2 and chc == 2) or (ch == 4 and chc == 3)
        elif fi.klass == "pseudo-quadrangle":
            good = ch == 4 and chc == 4
        else:
            good = False
        verdicts[f] = (good, f"{fi.klass}: {ch} changes, {chc} at corners")
        ok = ok and good

    # equivalent formulation: one vertex-proper angle per pseudo-triangle,
    # none elsewhere; tracked as an internal consistency assertion
    alt = outer_ok
    for f in emb.interior_faces():
        vp = sum(1 for a, ang in enumerate(emb.angles)
                 if ang.face == f and ac.proper[a] == VERTEX_PROPER)
        want = 1 if faces[f].klass == "pseudo-triangle" else 0
        alt = alt and faces[f].klass in ("pseudo-triangle", "pseudo-quadrangle") and vp == want
    vp_outer = sum(1 for a, ang in enumerate(emb.angles)
                   if ang.face == outer and ac.proper[a] == VERTEX_PROPER)
    alt = alt and vp_outer == 0
    assert alt == ok, "face-condition formulations disagree"
    return FaceConditionReport(ok, outer_ok, verdicts)


@dataclass
class VertexConditionReport:
    ok: bool
    distinguished: int | None
    verdicts: dict                 # vertex id -> (ok, reason)


def check_vertex_conditions(emb: PlaneEmbedding, omega, tol: Tolerance = DEFAULT_TOL) -> VertexConditionReport:
    """Necessary and (with the bad-quadrangle test) sufficient vertex conditions.

    Exactly one non-pointed vertex carries no sign changes; every other vertex
    is pointed with two changes off the big angle, pointed with four changes
    (one at the big angle), or non-pointed with four changes.
    """
    ac = classify_angles(emb, omega, tol)
    vinfos = classify_vertices(emb)
    verdicts = {}
    distinguished = []
    ok = True
    for v in range(emb.framework.n):
        vi = vinfos[v]
        ch, big = ac.vertex_changes[v], ac.vertex_change_at_big[v]
        if not vi.pointed and ch == 0:
            distinguished.append(v)
            verdicts[v] = (True, "non-pointed, no sign changes (distinguished)")
            continue
        if vi.pointed and ch == 2 and not big:
            verdicts[v] = (True, "pointed, two changes off the big angle")
        elif vi.pointed and ch == 4 and big:
            verdicts[v] = (True, "pointed, four changes, one at the big angle")
        elif not vi.pointed and ch == 4:
            verdicts[v] = (True, "non-pointed, four changes")
        else:
            verdicts[v] = (False, f"{'pointed' if vi.pointed else 'non-pointed'}, "
                                  f"{ch} changes{', one at big angle' if big else ''}")
            ok = False
    if len(distinguished) != 1:
        ok = False
    return VertexConditionReport(ok, distinguished[0] if len(distinguished) == 1 else None,
                                 verdicts)


def reciprocal_vertex_polygon(emb: PlaneEmbedding, omega, v: int) -> np.ndarray:
    """Head-to-tail polygon of the scaled edge vectors leaving v, rotation order."""
    fw = emb.framework
    omega = np.asarray(omega, dtype=float)
    pts = [np.zeros(2)]
    for h in emb.rotations[v]:
        i, j = fw.edges[h >> 1]
        nbr = j if (h & 1) == 0 else i
        pts.append(pts[-1] + omega[h >> 1] * (fw.points[nbr] - fw.points[v]))
    return np.array(pts[:-1])


def check_bad_quadrangles(emb: PlaneEmbedding, omega, tol: Tolerance = DEFAULT_TOL) -> list:
    """Vertices whose reciprocal polygon self-intersects.

    Only non-pointed vertices with four sign changes can fail; the reciprocal
    cycles of all other admissible vertices are convex polygons or
    pseudo-triangles, which are simple by construction.
    """
    ac = classify_angles(emb, omega, tol)
    vinfos = classify_vertices(emb)
    bad = []
    for v in range(emb.framework.n):
        if vinfos[v].pointed or ac.vertex_changes[v] != 4:
            continue
        poly = reciprocal_vertex_polygon(emb, omega, v)
        if not polygon_is_simple(poly, tol):
            bad.append(v)
    return bad


@dataclass
class ConditionReport:
    good: bool
    nonzero_everywhere: bool
    face_conditions_ok: bool
    vertex_conditions_ok: bool
    distinguished_vertex: int | None
    bad_quadrangle_vertices: tuple
    opposite_sign_ok: bool | None   # distinguished-vertex signs opposite to boundary
    near_threshold_edges: tuple


def is_good_self_stress(fw: Framework, emb: PlaneEmbedding, omega,
                        tol: Tolerance = DEFAULT_TOL) -> ConditionReport:
    """Combinatorial-plus-polygon criterion for a non-crossing reciprocal.

    Good means: nonzero on all edges, vertex conditions hold, and no reciprocal
    pseudo-quadrangle self-intersects. Also verifies that the edges at the
    distinguished vertex carry the sign opposite to the boundary cycle.
    """
    omega = np.asarray(omega, dtype=float)
    peak = np.abs(omega).max()
    nonzero = bool(peak > 0 and np.all(np.abs(omega) > tol.eps_stress * peak))
    if not nonzero:
        return ConditionReport(False, False, False, False, None, (), None, ())
    ac = classify_angles(emb, omega, tol)
    fr = check_face_conditions(emb, omega, tol)
    vr = check_vertex_conditions(emb, omega, tol)
    bad = tuple(check_bad_quadrangles(emb, omega, tol)) if vr.ok else ()
    good = vr.ok and not bad
    opposite = None
    if vr.ok and vr.distinguished is not None:
        v = vr.distinguished
        spoke_signs = {int(ac.signs[h >> 1]) for h in emb.rotations[v]}
        boundary_signs = {int(ac.signs[h >> 1]) for h in emb.faces[emb.outer_face]}
        opposite = (len(spoke_signs) == 1 and len(boundary_signs) == 1
                    and spoke_signs != boundary_signs)
        if good:
            assert opposite, "distinguished vertex sign not opposite to boundary"
    return ConditionReport(good, nonzero, fr.ok, vr.ok, vr.distinguished, bad,
                           opposite, ac.near_threshold)


def proper_angle_count_check(emb: PlaneEmbedding, omega, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Equivalence of the five face-condition formulations on a pseudo-quadrangulation.

    face conditions <=> exactly t vertex-proper <=> at most t vertex-proper
    <=> exactly 3y+4x-4 face-proper <=> at least 3y+4x-4 face-proper.
    """
    if not is_pseudo_quadrangulation(emb):
        raise ValueError("support is not a pseudo-quadrangulation")
    ac = classify_angles(emb, omega, tol)
    cc = counting_check(emb)
    vp = sum(1 for p in ac.proper if p == VERTEX_PROPER)
    fp = sum(1 for p in ac.proper if p == FACE_PROPER)
    assert vp + fp == 2 * cc.e
    target_fp = 3 * cc.y + 4 * cc.x - 4
    face_ok = check_face_conditions(emb, omega, tol).ok
    conds = [face_ok, vp == cc.t, vp <= cc.t, fp == target_fp, fp >= target_fp]
    return all(c == conds[0] for c in conds)
