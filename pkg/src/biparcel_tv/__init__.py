"""State-sum invariants of stratified 3-manifolds colored by biparcels of fusion type."""

from .biparcel import (
    BicategoryData,
    Biparcel,
    SimpleArrow,
    check_move_consistency,
    global_constant,
    tet_amplitude,
    validate,
)
from .complex import (
    GENERATORS,
    DirectedTriangulation,
    StratifiedComplex,
    barycentric_subdivide,
    boundary_4_simplex,
    canonical_form,
    direct,
    disjoint_union,
    sphere_join_unknot,
    sphere_join_unknot_disk,
    validate_flaglike,
)
from .constructions import (
    Cochain3,
    check_cocycle,
    fibonacci,
    fusion_biparcel,
    graded_vec,
    multifusion_sectors,
    pointed_biparcel,
    pullback,
    sharp_construction,
    standard_cocycle,
    trivial,
    vec_group_fusion,
)
from .errors import BiparcelError
from .gaunt import FiniteCategory, FiniteGroupoid, Functor, poset_chain
from .moves import pachner_move
from .statesum import Amplitude, dw_oracle, enumerate_colorings, invariance_check, invariant

__version__ = "0.1.0"
