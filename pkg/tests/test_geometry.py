import math

import numpy as np
import pytest

from stressrecip.geometry import (
    Tolerance,
    ccw_angle,
    orientation,
    point_in_polygon,
    point_on_segment_interior,
    polygon_is_simple,
    polygon_signed_area,
    rotate90,
    segments_properly_intersect,
)


def test_orientation_basic():
    assert orientation((0, 0), (1, 0), (0, 1)) == 1
    assert orientation((0, 0), (1, 0), (2, 0)) == 0
    assert orientation((0, 0), (0, 1), (1, 0)) == -1


def test_orientation_scale_invariance():
    # near-collinear at small scale stays classified the same after rescaling
    p, q, r = (0, 0), (1, 0), (2, 1e-12)
    assert orientation(p, q, r) == 0
    big = 1e8
    assert orientation((0, 0), (big, 0), (2 * big, 1e-12 * big)) == 0


def test_orientation_antisymmetry():
    rng = np.random.default_rng(7)
    for _ in range(200):
        p, q, r = rng.uniform(-10, 10, (3, 2))
        s = orientation(p, q, r)
        if s != 0:
            assert orientation(q, p, r) == -s
            assert orientation(p, r, q) == -s


def test_segments_cross():
    assert segments_properly_intersect((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_properly_intersect((0, 0), (1, 0), (1, 0), (2, 1))
    assert segments_properly_intersect((0, 0), (2, 0), (1, 0), (3, 0))


def test_segments_t_junction_and_disjoint():
    # endpoint of one segment interior to the other counts as a crossing
    assert segments_properly_intersect((0, 0), (2, 0), (1, 0), (1, 1))
    assert not segments_properly_intersect((0, 0), (1, 0), (0, 1), (1, 1))
    # collinear, disjoint
    assert not segments_properly_intersect((0, 0), (1, 0), (2, 0), (3, 0))
    # collinear sharing an endpoint without overlap
    assert not segments_properly_intersect((0, 0), (1, 0), (1, 0), (2, 0))
    # collinear sharing an endpoint with overlap
    assert segments_properly_intersect((0, 0), (2, 0), (2, 0), (1, 0))


def test_segments_symmetry():
    rng = np.random.default_rng(3)
    for _ in range(200):
        a1, a2, b1, b2 = rng.uniform(-5, 5, (4, 2))
        assert segments_properly_intersect(a1, a2, b1, b2) == \
            segments_properly_intersect(b1, b2, a1, a2)


def test_degenerate_segment_rejected():
    with pytest.raises(ValueError):
        segments_properly_intersect((0, 0), (0, 0), (1, 1), (2, 2))


def test_ccw_angle():
    assert ccw_angle((1, 0), (0, 1)) == pytest.approx(math.pi / 2)
    assert ccw_angle((1, 0), (1, 0)) == 0.0
    assert ccw_angle((1, 0), (-1, 0)) == pytest.approx(math.pi)
    with pytest.raises(ValueError):
        ccw_angle((0, 0), (1, 0))


def test_ccw_angle_complement():
    rng = np.random.default_rng(11)
    for _ in range(100):
        u, v = rng.normal(size=(2, 2))
        s = ccw_angle(u, v) + ccw_angle(v, u)
        assert min(abs(s), abs(s - 2 * math.pi)) < 1e-9


def test_rotate90():
    assert np.allclose(rotate90((1, 0)), (0, 1))
    assert np.allclose(rotate90((0, 0)), (0, 0))
    assert np.allclose(rotate90((3, -2)), (2, 3))
    v = np.array([1.7, -0.3])
    out = rotate90(rotate90(rotate90(rotate90(v))))
    assert np.array_equal(out, v)
    assert np.linalg.norm(rotate90(v)) == pytest.approx(np.linalg.norm(v), abs=1e-15)


def test_polygon_helpers():
    square = [(0, 0), (2, 0), (2, 2), (0, 2)]
    assert polygon_signed_area(square) == pytest.approx(4.0)
    assert polygon_is_simple(square)
    assert point_in_polygon((1, 1), square) == 1
    assert point_in_polygon((3, 1), square) == -1
    assert point_in_polygon((2, 1), square) == 0
    bowtie = [(0, 0), (2, 2), (2, 0), (0, 2)]
    assert not polygon_is_simple(bowtie)


def test_point_on_segment_interior():
    assert point_on_segment_interior((1, 0), (0, 0), (2, 0))
    assert not point_on_segment_interior((0, 0), (0, 0), (2, 0))
    assert not point_on_segment_interior((1, 0.1), (0, 0), (2, 0))


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(eps_geom=0.0)
