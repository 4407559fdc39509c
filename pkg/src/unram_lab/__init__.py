"""Exact unramified character tables and their congruences for small finite groups."""

from .chartab import CharacterTable, character_table, dixon_table, mn_table
from .congruence import (
    depth_matrix,
    explain_gap,
    semisimple_blocks,
    sim_m,
    verify_prop_3_2,
    verify_theorem_3_3,
)
from .cyclotomic import INFINITY, CycNumber, congruence_valuation, descend, galois_apply, root_of_unity
from .groups import (
    PermGroup,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    heisenberg,
    quaternion8,
    symmetric,
)
from .symtools import Partition, comb_equivalent, comb_normal_form, count_row_decompositions
from .unramified import UnramifiedTable, unramified_table

__version__ = "0.1.0"
