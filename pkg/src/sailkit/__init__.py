"""Exact computations with Klein polyhedra (sails) of simplicial cones."""

__version__ = "0.1.0"

from .errors import SailkitError
from .exact.algebraic import AlgebraicReal, NumberFieldElem, sign_of
from .lattice import (EdgeStar, FaceRecord, Segment, det_edge_star, det_face, integer_angle,
                      integer_distance, integer_length)
from .cone import ConeSpec, classify_point, cone_from_generators, cone_from_matrix, irrationality_check, rational_cone
from .sail import SailPatch, invariant_sail_patch, sail_patch
from .stars import AffineMap, affine_equivalence, complete_star, edge_star, equivalences
from .chains import Chain, auto_chain, build_chain_graph, colour_sequence, recover_shift_operator
from .operators import (check_properties, classify_unimodular_3d, is_hyperbolic, linearize_affine,
                        preserves_cone, spectral_filtration)
from .cf2d import cf_expand, klein_polygon_quotients, lagrange_roundtrip
from .diagnostics import build_face_vertex_graph, determinant_profile, norm_form_min, vertex_edge_colouring

__all__ = [name for name in dir() if not name.startswith("_")]
