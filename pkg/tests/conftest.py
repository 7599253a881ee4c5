import numpy as np
import pytest

from stressrecip.plane_graph import Framework, build_embedding

# Fixed K4 instance: triangle A, B, C with H inside. The equilibrium at H has
# exactly equal spoke weights because (H-A) + (H-B) + (H-C) = 0 for these
# coordinates, giving the rational stress: spokes +1, rim -1/3.
K4_POINTS = np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 3.0], [2.0, 1.0]])
K4_EDGES = [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2)]  # AB BC CA HA HB HC
K4_STRESS = np.array([-1 / 3, -1 / 3, -1 / 3, 1.0, 1.0, 1.0])
A, B, C, H = 0, 1, 2, 3


@pytest.fixture
def k4():
    return Framework.make(K4_POINTS, K4_EDGES)


@pytest.fixture
def k4_emb(k4):
    return build_embedding(k4)


def graphs_isomorphic(edges1, edges2, n):
    """Brute-force isomorphism for tiny graphs (test helper)."""
    from itertools import permutations

    s1 = {frozenset(e) for e in edges1}
    s2 = {frozenset(e) for e in edges2}
    if len(s1) != len(s2):
        return False
    deg1 = sorted(sum(1 for e in s1 if v in e) for v in range(n))
    deg2 = sorted(sum(1 for e in s2 if v in e) for v in range(n))
    if deg1 != deg2:
        return False
    for perm in permutations(range(n)):
        if {frozenset((perm[i], perm[j])) for i, j in s1} == s2:
            return True
    return False
