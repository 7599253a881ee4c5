import numpy as np
import pytest

from conftest import A, B, C, H, K4_STRESS, graphs_isomorphic
from stressrecip.geometry import cross2
from stressrecip.pebble import is_laman_circuit
from stressrecip.plane_graph import build_embedding, classify_vertices, is_pseudo_triangulation
from stressrecip.reciprocal import (
    ReciprocalError,
    complete_to_laman_circuit,
    count_corollaries_check,
    cremona_reciprocal,
    embedding_counts,
    fit_translation_scale,
    is_reciprocal_pair,
    maxwell_reciprocal,
    reciprocal_noncrossing_report,
)
from stressrecip.rigidity import self_stress_space


def k4_ab_edge_index(k4):
    return k4.edges.index((A, B))


def test_cremona_k4(k4, k4_emb):
    rec = cremona_reciprocal(k4, k4_emb, K4_STRESS)
    assert rec.num_vertices == 4
    assert np.allclose(rec.positions[rec.anchor], 0)
    assert rec.max_closure_defect < 1e-12
    e_ab = k4_ab_edge_index(k4)
    v = rec.edge_vector(e_ab)
    u = k4.edge_vector(e_ab)
    assert abs(cross2(u, v)) < 1e-12          # parallel to AB
    assert np.linalg.norm(v) == pytest.approx(4 / 3, abs=1e-12)  # |w|*|AB|
    # every dual edge parallel with matching length
    for e in range(k4.m):
        u, v = k4.edge_vector(e), rec.edge_vector(e)
        assert abs(cross2(u, v)) <= 1e-10 * np.linalg.norm(u) * np.linalg.norm(v)
        assert np.linalg.norm(v) == pytest.approx(
            abs(K4_STRESS[e]) * np.linalg.norm(u), rel=1e-10)


def test_maxwell_perpendicular(k4, k4_emb):
    rec = maxwell_reciprocal(k4, k4_emb, K4_STRESS)
    for e in range(k4.m):
        assert abs(np.dot(k4.edge_vector(e), rec.edge_vector(e))) < 1e-10
    # rotating twice = point reflection of the cremona positions
    crem = cremona_reciprocal(k4, k4_emb, K4_STRESS)
    twice = np.column_stack([-rec.positions[:, 1], rec.positions[:, 0]])
    assert np.allclose(twice, -crem.positions, atol=1e-12)


def test_is_reciprocal_pair(k4, k4_emb):
    rec = cremona_reciprocal(k4, k4_emb, K4_STRESS)
    dual = rec.framework()
    ident = list(range(k4.m))
    assert is_reciprocal_pair(k4, k4_emb, dual, ident)
    assert is_reciprocal_pair(dual, None, k4, ident)   # symmetry
    pts = dual.points.copy()
    pts[0] += (0.1, 0.0)
    from stressrecip.plane_graph import Framework
    moved = Framework.make(pts, dual.edges, allow_multi=True)
    assert not is_reciprocal_pair(k4, k4_emb, moved, ident)
    with pytest.raises(ValueError):
        is_reciprocal_pair(k4, k4_emb, dual, [0, 1, 2, 3, 4, 4])


def test_noncrossing_report_k4(k4, k4_emb):
    rep = reciprocal_noncrossing_report(k4, k4_emb, K4_STRESS)
    assert rep.noncrossing
    assert rep.orientation == "reversed"
    assert rep.dual_embedding_consistent
    dg_edges = rep.diagram.dual_edges
    assert graphs_isomorphic(dg_edges, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 4)


def test_bad_stress_closure_error(k4, k4_emb):
    with pytest.raises(ReciprocalError):
        cremona_reciprocal(k4, k4_emb, np.ones(6))


def test_scaling_and_negation(k4, k4_emb):
    rec = cremona_reciprocal(k4, k4_emb, K4_STRESS)
    rec2 = cremona_reciprocal(k4, k4_emb, 2.5 * K4_STRESS)
    assert np.allclose(rec2.positions, 2.5 * rec.positions, atol=1e-12)
    rec3 = cremona_reciprocal(k4, k4_emb, -K4_STRESS)
    assert np.allclose(rec3.positions, -rec.positions, atol=1e-12)


def test_involution_recovers_k4(k4, k4_emb):
    rec = cremona_reciprocal(k4, k4_emb, K4_STRESS)
    dual = rec.framework()
    demb = build_embedding(dual)
    induced = 1.0 / K4_STRESS
    rec2 = cremona_reciprocal(dual, demb, induced)
    # dual faces correspond to primal vertices: match by incident edge sets
    demb2 = rec2.support.embedding
    primal_star = {v: sorted(h >> 1 for h in k4_emb.rotations[v]) for v in range(4)}
    face_to_vertex = {}
    for f in range(len(demb2.faces)):
        star = sorted(h >> 1 for h in demb2.faces[f])
        match = [v for v, s in primal_star.items() if s == star]
        assert len(match) == 1
        face_to_vertex[f] = match[0]
    src = rec2.positions
    dst = np.array([k4.points[face_to_vertex[f]] for f in range(len(src))])
    s, t = fit_translation_scale(src, dst)
    aligned = s * src + t
    assert np.max(np.linalg.norm(aligned - dst, axis=1)) < 1e-6 * k4.scale()


def test_count_corollaries_k4(k4, k4_emb):
    rep = reciprocal_noncrossing_report(k4, k4_emb, K4_STRESS)
    assert count_corollaries_check(k4, k4_emb, K4_STRESS, rep)
    rc = embedding_counts(rep.dual_embedding)
    pc = embedding_counts(rep.diagram.support.embedding)
    assert (pc.t, pc.q, pc.x, pc.y) == (rc.t, rc.q, rc.x, rc.y) == (3, 0, 1, 3)


def test_complete_to_laman_circuit_k4(k4, k4_emb):
    out = complete_to_laman_circuit(k4, k4_emb, K4_STRESS)
    # K4's reciprocal is already a pseudo-triangulation: no diagonals added
    assert out.m == 6 and out.n == 4
    assert is_laman_circuit(out.edges, out.n)
    assert is_pseudo_triangulation(build_embedding(out))
    assert sum(1 for v in classify_vertices(build_embedding(out)) if not v.pointed) == 1
    # the completed framework has |E| = 2|V| - 2 and a stress on all edges
    basis = self_stress_space(out)
    assert len(basis) == 1 and basis[0].full_support
