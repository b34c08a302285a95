"""Matroid fans, their balancing and membership tests, and finite-field
realization counts."""

from .bergman import bergman_fan, circuit_membership, component_lattice, verify_degree_one
from .exactalg import GF, QQ, Matrix, lattice_index, rank_det_kernel, solve_nonneg
from .fan import Cone, QuotientVector, WeightedFan, check_balancing, fan_validate, lineality, support_contains
from .matroid import (
    Matroid,
    boolean,
    circuits,
    closure_of,
    column_matroid,
    connected_components,
    direct_sum,
    fano,
    flats,
    matroid_from_bases,
    non_fano,
    rank_of,
    uniform,
)
from .realization import (
    RealizationMatrix,
    arrangement_check,
    count_tropical_realizations,
    is_gamma_point,
    search_realizations,
    verify_torsor_count,
)

__version__ = "0.1.0"
