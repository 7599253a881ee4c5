"""Self-stresses of planar frameworks, their reciprocal diagrams and liftings."""

from .geometry import DEFAULT_TOL, Tolerance, ccw_angle, orientation, rotate90, segments_properly_intersect
from .plane_graph import (
    Framework,
    FrameworkError,
    EmbeddingError,
    PlaneEmbedding,
    build_embedding,
    classify_faces,
    classify_vertices,
    counting_check,
    dual_graph,
    is_non_crossing,
    is_pseudo_quadrangulation,
    is_pseudo_triangulation,
)
from .pebble import is_laman, is_laman_circuit, pebble_game_rank
from .rigidity import (
    SelfStress,
    check_bad_quadrangles,
    check_face_conditions,
    check_vertex_conditions,
    classify_angles,
    equilibrium_residual,
    is_good_self_stress,
    proper_angle_count_check,
    restrict_to_support,
    rigidity_matrix,
    rigidity_rank,
    self_stress_space,
    stress_dimension_bound_check,
)

__version__ = "0.1.0"
