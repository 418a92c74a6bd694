"""Exact computations for the degree filtration of convex chains on rational arrangements."""

from .affine import (
    AffCell,
    AffineArrangement,
    AffineFlat,
    AffineHyperplane,
    Polytope,
    aff_cells,
    aff_flats,
    normalized_volume,
    polytope_flags,
)
from .chains import ChainSpaces, ElementaryChain, FlagFunction, OrientedFlag, degree_filtration
from .constraints import (
    cocycle_check,
    period_system,
    reciprocity_system,
    solution_space,
    verify_descriptions,
)
from .hadwiger import (
    HadwigerLabel,
    flag_of_polytope,
    hadwiger_eval,
    indicator_chain,
    induced_label_map,
    one_flag_chain,
    valuation_decompose,
)
from .integration import IntegrationError, integrate_step, lift_to_chain, make_choice
from .scissors import Polygon, hadwiger_glur_2d, upsilon_line, zn_congruent
from .toric import (
    InvalidArrangement,
    ToricArrangement,
    ToricFlat,
    ToricHyperplane,
    flag_enumerate,
    h1_basis,
    intersection_index,
    relative_sign,
    restrict_to_flat,
    toric_cells,
    toric_flats,
    validate_toric,
)

__version__ = "0.1.0"
