"""Convex-geometric Demazure operators on string spaces."""
from .chain import Chain, Piece, add, evaluate, fibers, indicator, refine, scale, support_points
from .characters import (
    LaurentPolynomial,
    apply_T_word,
    chi,
    demazure_T,
    geometric_segment,
    project_blocks,
    project_degeneration,
)
from .constructions import (
    bott_samelson,
    bott_tower_space,
    degenerate,
    full_degeneration,
    gz_direct,
    gz_seed,
    gz_space,
    gz_word,
    space_from_word,
    sp4_example,
    tilde_word,
    twisted_cube,
)
from .errors import *  # noqa: F401,F403
from .operators import D, E, apply_D, apply_E, apply_word, expand_box, parse_word
from .polytope import HPolytope, Inequality, hull_vertices
from .roots import CartanData, cartan_type, freudenthal_multiplicities, positive_roots, weyl_dimension
from .string_space import StringSpace, eval_l, make_string_space, reflect, sigma, weight

__version__ = "0.1.0"
