"""Factorization counts and commutativity degrees, by enumeration and by
Möbius inversion over the subgroup lattice.

All quotients are :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, ValidationError
from .group import FiniteGroup, Subgroup
from .lattice import (
    MobiusTable,
    SubgroupLattice,
    cyclic_subgroups,
    enumerate_subgroups,
    intersection_sizes,
    mobius,
)


class Method(str, enum.Enum):
    BRUTEFORCE = "bruteforce"
    MOBIUS = "mobius"
    FORMULA = "formula"


def _count_factorizations(subgroups: Sequence[Subgroup], n: int, target: int) -> int:
    """Ordered pairs (H, K) from ``subgroups`` with |HK| = target."""
    if not subgroups:
        return 0
    orders = np.array([h.order for h in subgroups], dtype=np.int64)
    inter = intersection_sizes(list(subgroups), n)
    return int(np.count_nonzero(orders[:, None] * orders[None, :] == target * inter))


def cf2_bruteforce(g: FiniteGroup, lat: SubgroupLattice | None = None) -> int:
    """Ordered pairs of cyclic subgroups (H, K) with HK = G.

    HK is a subset of G, so |HK| = |G| already forces HK = G. Without a lattice
    only the cyclic subgroups are enumerated.
    """
    cyc = [lat.subgroups[i] for i in lat.cyclic_indices] if lat is not None else cyclic_subgroups(g)
    return _count_factorizations(cyc, g.order, g.order)


def f2_bruteforce(g: FiniteGroup, lat: SubgroupLattice) -> int:
    """Ordered pairs of subgroups (H, K) with HK = G."""
    return _count_factorizations(lat.subgroups, g.order, g.order)


def cf2_pairs(g: FiniteGroup, lat: SubgroupLattice | None = None) -> list[tuple[int, int]]:
    """The factorizing pairs themselves, as indices into the cyclic subgroup list."""
    cyc = [lat.subgroups[i] for i in lat.cyclic_indices] if lat is not None else cyclic_subgroups(g)
    return [
        (i, j)
        for i, h in enumerate(cyc)
        for j, k in enumerate(cyc)
        if g.product_set_order(h, k) == g.order
    ]


def permutability_matrix(lat: SubgroupLattice) -> np.ndarray:
    """P[i, j] true iff S_i S_j = S_j S_i, decided on the literal product sets."""
    g = lat.group
    n = len(lat)
    out = np.ones((n, n), dtype=bool)
    subs = lat.subgroups
    for i in range(n):
        for j in range(i + 1, n):
            if not g.permutes(subs[i], subs[j]):
                out[i, j] = out[j, i] = False
    return out


def _pair_fraction(p: np.ndarray, idx: np.ndarray) -> Fraction:
    k = len(idx)
    return Fraction(int(p[np.ix_(idx, idx)].sum()), k * k)


def sd(g: FiniteGroup, lat: SubgroupLattice, perm: np.ndarray | None = None) -> Fraction:
    """Share of ordered subgroup pairs (H, K) with HK = KH."""
    perm = permutability_matrix(lat) if perm is None else perm
    return _pair_fraction(perm, np.arange(len(lat)))


def csd(g: FiniteGroup, lat: SubgroupLattice, perm: np.ndarray | None = None) -> Fraction:
    """Share of ordered cyclic-subgroup pairs (H, K) with HK = KH."""
    perm = permutability_matrix(lat) if perm is None else perm
    return _pair_fraction(perm, np.asarray(lat.cyclic_indices))


@dataclass
class LatticeInvariants:
    """Brute-force invariants of every subgroup H of G, read off the parent
    lattice restricted to H (no re-enumeration).

    Arrays are indexed like ``lattice.subgroups``.
    """

    lattice: SubgroupLattice
    lattice_size: np.ndarray
    cyclic_size: np.ndarray
    f2: np.ndarray
    cf2: np.ndarray
    sd: list[Fraction]
    csd: list[Fraction]
    perm: np.ndarray = field(repr=False)


def subgroup_invariants(lat: SubgroupLattice, perm: np.ndarray | None = None) -> LatticeInvariants:
    g = lat.group
    perm = permutability_matrix(lat) if perm is None else perm
    n = len(lat)
    orders = lat.orders
    inter = intersection_sizes(lat.subgroups, g.order)
    prod_order = orders[:, None] * orders[None, :] // inter
    cyclic = lat.is_cyclic
    lsize = np.zeros(n, dtype=np.int64)
    csize = np.zeros(n, dtype=np.int64)
    f2 = np.zeros(n, dtype=np.int64)
    cf2 = np.zeros(n, dtype=np.int64)
    sds, csds = [], []
    for h in range(n):
        sub = lat.below(h)
        cyc = sub[cyclic[sub]]
        lsize[h] = len(sub)
        csize[h] = len(cyc)
        f2[h] = np.count_nonzero(prod_order[np.ix_(sub, sub)] == orders[h])
        cf2[h] = np.count_nonzero(prod_order[np.ix_(cyc, cyc)] == orders[h])
        sds.append(_pair_fraction(perm, sub))
        csds.append(_pair_fraction(perm, cyc))
    return LatticeInvariants(lat, lsize, csize, f2, cf2, sds, csds, perm)


def _as_count(value: Fraction, what: str) -> int:
    if value.denominator != 1 or value < 0:
        raise ConsistencyError(f"{what} evaluated to {value}, not a non-negative integer")
    return int(value)


def cf2_mobius(
    g: FiniteGroup,
    lat: SubgroupLattice,
    mob: MobiusTable | None = None,
    inv: LatticeInvariants | None = None,
) -> int:
    """CF2(G) = Σ_{H <= G} csd(H) |L1(H)|^2 µ(H, G), summed exactly."""
    mob = mobius(lat) if mob is None else mob
    inv = subgroup_invariants(lat) if inv is None else inv
    mu = mob.to_top()
    total = sum(
        (inv.csd[h] * int(inv.cyclic_size[h]) ** 2 * int(mu[h]) for h in range(len(lat)) if mu[h]),
        Fraction(0),
    )
    return _as_count(total, f"cyclic Möbius sum for {g.name}")


def f2_mobius(
    g: FiniteGroup,
    lat: SubgroupLattice,
    mob: MobiusTable | None = None,
    inv: LatticeInvariants | None = None,
) -> int:
    """F2(G) = Σ_{H <= G} sd(H) |L(H)|^2 µ(H, G), summed exactly."""
    mob = mobius(lat) if mob is None else mob
    inv = subgroup_invariants(lat) if inv is None else inv
    mu = mob.to_top()
    total = sum(
        (inv.sd[h] * int(inv.lattice_size[h]) ** 2 * int(mu[h]) for h in range(len(lat)) if mu[h]),
        Fraction(0),
    )
    return _as_count(total, f"Möbius sum for {g.name}")


def sd_from_subgroup_f2(
    g: FiniteGroup, lat: SubgroupLattice, inv: LatticeInvariants | None = None
) -> Fraction:
    """sd(G) = Σ_{H <= G} F2(H) / |L(G)|^2."""
    inv = subgroup_invariants(lat) if inv is None else inv
    return Fraction(int(inv.f2.sum()), len(lat) ** 2)


def csd_from_subgroup_cf2(
    g: FiniteGroup, lat: SubgroupLattice, inv: LatticeInvariants | None = None
) -> Fraction:
    """csd(G) = Σ_{H <= G} CF2(H) / |L1(G)|^2."""
    inv = subgroup_invariants(lat) if inv is None else inv
    return Fraction(int(inv.cf2.sum()), len(lat.cyclic_indices) ** 2)


def cf2_coprime_product(parts: Sequence[tuple[FiniteGroup, SubgroupLattice | None]]) -> int:
    """CF2 of a direct product of pairwise coprime-order groups, as the product
    of the factors' values."""
    orders = [g.order for g, _ in parts]
    for i, a in enumerate(orders):
        for b in orders[i + 1:]:
            if gcd(a, b) != 1:
                raise ValidationError(f"orders {a} and {b} are not coprime")
    out = 1
    for g, lat in parts:
        out *= cf2_bruteforce(g, lat)
    return out


@dataclass
class InvariantReport:
    group_name: str
    order: int
    cf2: int
    f2: int
    sd: Fraction
    csd: Fraction
    lattice_size: int
    cyclic_poset_size: int
    method: Method


class GroupAnalysis:
    """Lazy bundle of a group, its lattice and the derived tables, so callers
    that need several quantities pay for each piece once."""

    def __init__(self, g: FiniteGroup):
        self.group = g

    @cached_property
    def lattice(self) -> SubgroupLattice:
        return enumerate_subgroups(self.group)

    @cached_property
    def mobius(self) -> MobiusTable:
        return mobius(self.lattice)

    @cached_property
    def perm(self) -> np.ndarray:
        return permutability_matrix(self.lattice)

    @cached_property
    def invariants(self) -> LatticeInvariants:
        return subgroup_invariants(self.lattice, self.perm)

    @cached_property
    def cf2(self) -> int:
        return cf2_bruteforce(self.group, self.lattice)

    @cached_property
    def f2(self) -> int:
        return f2_bruteforce(self.group, self.lattice)

    @cached_property
    def sd(self) -> Fraction:
        return sd(self.group, self.lattice, self.perm)

    @cached_property
    def csd(self) -> Fraction:
        return csd(self.group, self.lattice, self.perm)

    def cf2_mobius(self) -> int:
        return cf2_mobius(self.group, self.lattice, self.mobius, self.invariants)

    def f2_mobius(self) -> int:
        return f2_mobius(self.group, self.lattice, self.mobius, self.invariants)

    def sd_from_subgroup_f2(self) -> Fraction:
        return sd_from_subgroup_f2(self.group, self.lattice, self.invariants)

    def csd_from_subgroup_cf2(self) -> Fraction:
        return csd_from_subgroup_cf2(self.group, self.lattice, self.invariants)

    def report(self) -> InvariantReport:
        lat = self.lattice
        return InvariantReport(
            self.group.name,
            self.group.order,
            self.cf2,
            self.f2,
            self.sd,
            self.csd,
            len(lat),
            len(lat.cyclic_indices),
            Method.BRUTEFORCE,
        )
