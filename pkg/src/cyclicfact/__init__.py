"""Exact cyclic factorization numbers, commutativity degrees and subgroup
lattice Möbius values of small finite groups."""

from .counting import (
    GroupAnalysis,
    cf2_bruteforce,
    cf2_coprime_product,
    cf2_mobius,
    csd,
    csd_from_subgroup_cf2,
    f2_bruteforce,
    f2_mobius,
    sd,
    sd_from_subgroup_f2,
)
from .errors import (
    CapacityError,
    ConsistencyError,
    CyclicFactError,
    SpecParseError,
    StructuralError,
    ValidationError,
)
from .families import Family, Gamma2, GroupSpec, build, parse_spec
from .formulas import FormulaId, FormulaResult, formula_for
from .group import FiniteGroup, Subgroup, direct_product
from .lattice import MobiusTable, SubgroupLattice, enumerate_subgroups, hall_mobius, mobius

__all__ = [
    "CapacityError", "ConsistencyError", "CyclicFactError", "FiniteGroup", "Family",
    "FormulaId", "FormulaResult", "Gamma2", "GroupAnalysis", "GroupSpec", "MobiusTable",
    "SpecParseError", "StructuralError", "Subgroup", "SubgroupLattice", "ValidationError",
    "build", "cf2_bruteforce", "cf2_coprime_product", "cf2_mobius", "csd",
    "csd_from_subgroup_cf2", "direct_product", "enumerate_subgroups", "f2_bruteforce",
    "f2_mobius", "formula_for", "hall_mobius", "mobius", "parse_spec", "sd",
    "sd_from_subgroup_f2",
]
