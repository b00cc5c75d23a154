"""Subgroup lattice enumeration and the Möbius function of that lattice."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from .errors import CapacityError, ValidationError
from .group import FiniteGroup, Subgroup, bools_from_mask, mask_from_bools

DEFAULT_SUBGROUP_BUDGET = 100_000
DENSE_INCLUSION_LIMIT = 4096


def cyclic_subgroups(g: FiniteGroup) -> list[Subgroup]:
    """All cyclic subgroups, deduplicated, sorted by (order, members)."""
    seen: dict[int, Subgroup] = {}
    claimed = np.zeros(g.order, dtype=bool)
    # <x> = <y> iff they share a generator; scanning generators already seen skips work
    for x in range(g.order):
        if claimed[x]:
            continue
        h = g.cyclic_subgroup(x)
        if h.mask not in seen:
            seen[h.mask] = h
        members = np.asarray(h.members)
        gens = members[g.element_orders[members] == h.order]
        claimed[gens] = True
    return sorted(seen.values(), key=_sort_key)


def _sort_key(h: Subgroup) -> tuple[int, tuple[int, ...]]:
    return (h.order, h.members)


def membership_matrix(subgroups: list[Subgroup], n: int) -> np.ndarray:
    return np.array([bools_from_mask(h.mask, n) for h in subgroups], dtype=bool).reshape(len(subgroups), n)


def intersection_sizes(subgroups: list[Subgroup], n: int) -> np.ndarray:
    """Matrix of |S_i ∩ S_j| (exact: counts stay far below 2^24)."""
    b = membership_matrix(subgroups, n).astype(np.float32)
    return np.rint(b @ b.T).astype(np.int64)


class SubgroupLattice:
    """Every subgroup of a group, ordered by non-decreasing order.

    Index 0 is the trivial subgroup and the last index is the whole group.
    ``leq[i, j]`` is true iff subgroup i is contained in subgroup j; it is held
    as a dense boolean matrix up to ``DENSE_INCLUSION_LIMIT`` subgroups and as
    per-subgroup index sets beyond that.
    """

    def __init__(self, group: FiniteGroup, subgroups: list[Subgroup]):
        self.group = group
        self.subgroups = subgroups
        self.index = {h.mask: i for i, h in enumerate(subgroups)}
        self.orders = np.array([h.order for h in subgroups], dtype=np.int64)
        self.cyclic_indices = tuple(i for i, h in enumerate(subgroups) if h.is_cyclic)
        n = group.order
        if len(subgroups) <= DENSE_INCLUSION_LIMIT:
            b = membership_matrix(subgroups, n).astype(np.float32)
            outside = b @ (1.0 - b).T
            self._leq = outside == 0
            self._leq.setflags(write=False)
            self._below = None
        else:
            self._leq = None
            masks = [h.mask for h in subgroups]
            self._below = [
                frozenset(i for i, m in enumerate(masks) if m & ~mj == 0) for mj in masks
            ]

    def __len__(self) -> int:
        return len(self.subgroups)

    def __repr__(self) -> str:
        return f"SubgroupLattice({self.group.name!r}, {len(self)} subgroups)"

    @property
    def top(self) -> int:
        return len(self.subgroups) - 1

    @property
    def leq(self) -> np.ndarray:
        if self._leq is None:
            raise CapacityError("dense inclusion matrix not kept for lattices this large")
        return self._leq

    def contains(self, i: int, j: int) -> bool:
        """True iff subgroup i <= subgroup j."""
        if self._leq is not None:
            return bool(self._leq[i, j])
        return i in self._below[j]

    def below(self, j: int) -> np.ndarray:
        """Indices of the subgroups of subgroup j (sorted, j included)."""
        if self._leq is not None:
            return np.flatnonzero(self._leq[:, j])
        return np.array(sorted(self._below[j]), dtype=np.int64)

    def above(self, i: int) -> np.ndarray:
        if self._leq is not None:
            return np.flatnonzero(self._leq[i, :])
        return np.array([j for j in range(len(self)) if i in self._below[j]], dtype=np.int64)

    def index_of(self, h: Subgroup) -> int:
        return self.index[h.mask]

    def meet(self, i: int, j: int) -> int:
        return self.index[self.subgroups[i].mask & self.subgroups[j].mask]

    def join(self, i: int, j: int) -> int:
        return self.index[self.group.join(self.subgroups[i], self.subgroups[j]).mask]

    @cached_property
    def is_cyclic(self) -> np.ndarray:
        flags = np.zeros(len(self), dtype=bool)
        flags[list(self.cyclic_indices)] = True
        return flags

    def cyclic_poset_size(self, h: int) -> int:
        """|L_1(H)|: number of cyclic subgroups contained in subgroup h."""
        return int(self.is_cyclic[self.below(h)].sum())

    def lattice_size(self, h: int) -> int:
        """|L(H)|: number of subgroups of subgroup h."""
        return len(self.below(h))

    def inclusion_pairs(self) -> list[tuple[int, int]]:
        """All (i, j) with subgroup i < subgroup j strictly."""
        return [(int(i), int(j)) for j in range(len(self)) for i in self.below(j) if i != j]


def enumerate_subgroups(g: FiniteGroup, budget: int = DEFAULT_SUBGROUP_BUDGET) -> SubgroupLattice:
    """Enumerate L(G) by closing the cyclic subgroups under joins.

    Every subgroup is a join of cyclic subgroups, so it suffices to join each
    newly found subgroup with each cyclic subgroup until nothing new appears.
    """
    cyclics = cyclic_subgroups(g)
    known: dict[int, Subgroup] = {h.mask: h for h in cyclics}
    queue = list(cyclics)
    pos = 0
    while pos < len(queue):
        s = queue[pos]
        pos += 1
        for c in cyclics:
            if c.mask & ~s.mask == 0:
                continue
            j = g.join(s, c)
            if j.mask not in known:
                known[j.mask] = j
                queue.append(j)
                if len(known) > budget:
                    raise CapacityError(f"{g.name} has more than {budget} subgroups")
    return SubgroupLattice(g, sorted(known.values(), key=_sort_key))


class MobiusTable:
    """µ(H, K) for every pair H <= K of a subgroup lattice.

    The values are the entries of the inverse of the zeta (inclusion) matrix.
    """

    def __init__(self, lat: SubgroupLattice, values: np.ndarray):
        self.lattice = lat
        self.values = values

    def __call__(self, h: int, k: int) -> int:
        return int(self.values[h, k])

    def to_top(self) -> np.ndarray:
        """µ(H, G) for every H, in lattice order."""
        return self.values[:, self.lattice.top]

    def pairs(self) -> list[tuple[int, int, int]]:
        lat = self.lattice
        return [(int(h), k, int(self.values[h, k])) for k in range(len(lat)) for h in lat.below(k)]


def _unitriangular_inverse(zeta: np.ndarray) -> np.ndarray:
    """Inverse of an upper unitriangular 0/1 matrix by forward substitution.

    Done in int64: every step is a ring operation, so the result is exact
    modulo 2^64 even if intermediates wrap. A float shadow bounds the true
    magnitudes; if they could leave the int64 range we redo it with Python ints.
    """
    n = zeta.shape[0]
    z = zeta.astype(np.int64)
    zf = zeta.astype(np.float64)
    m = np.zeros((n, n), dtype=np.int64)
    bound = np.zeros((n, n), dtype=np.float64)
    for k in range(n):
        m[:, k] = -(m[:, :k] @ z[:k, k])
        m[k, k] = 1
        bound[:, k] = bound[:, :k] @ zf[:k, k]
        bound[k, k] = 1
    if bound.max() < 2.0**60:
        return m
    obj = np.zeros((n, n), dtype=object)
    zo = zeta.astype(object)
    for k in range(n):
        obj[:, k] = -(obj[:, :k].dot(zo[:k, k])) if k else 0
        obj[k, k] = 1
    return obj


def mobius(lat: SubgroupLattice) -> MobiusTable:
    zeta = lat.leq.astype(np.int64)
    return MobiusTable(lat, _unitriangular_inverse(zeta))


def mobius_to_top(lat: SubgroupLattice) -> list[int]:
    """µ(H, G) for all H via µ(H, G) = -Σ_{H < K <= G} µ(K, G), top down."""
    mu = [0] * len(lat)
    top = lat.top
    mu[top] = 1
    for h in range(top - 1, -1, -1):
        mu[h] = -sum(mu[k] for k in lat.above(h) if k != h)
    return mu


def mobius_from_bottom(lat: SubgroupLattice) -> list[int]:
    """µ(1, K) for all K via µ(1, K) = -Σ_{1 <= J < K} µ(1, J), bottom up."""
    mu = [0] * len(lat)
    mu[0] = 1
    for k in range(1, len(lat)):
        mu[k] = -sum(mu[j] for j in lat.below(k) if j != k)
    return mu


def is_elementary_abelian(g: FiniteGroup) -> bool:
    if g.order == 1:
        return True
    orders = set(g.element_orders[1:].tolist())
    return g.is_abelian and len(orders) == 1


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) with n = p^k, or None if n is not a prime power (1 -> None)."""
    from sympy import factorint

    f = factorint(n)
    if len(f) != 1:
        return None
    ((p, k),) = f.items()
    return int(p), int(k)


def hall_mobius(p: int, order_exponent: int, is_elementary_abelian: bool) -> int:
    """µ(1, G) for a p-group of order p^n: zero unless G is elementary abelian."""
    if not is_elementary_abelian:
        return 0
    n = order_exponent
    return (-1) ** n * p ** comb(n, 2)


@dataclass(frozen=True)
class QuotientEntry:
    index: int
    quotient_order: int
    quotient_is_cyclic: bool


def quotient_group(g: FiniteGroup, normal: Subgroup) -> tuple[FiniteGroup, np.ndarray]:
    """G/N as a Cayley table, plus the map element -> coset index.

    Cosets are numbered by their smallest element, so N itself is coset 0.
    """
    if not g.is_normal(normal):
        raise ValidationError("quotient needs a normal subgroup")
    coset_of = np.full(g.order, -1, dtype=np.int64)
    reps = []
    members = np.asarray(normal.members)
    for x in range(g.order):
        if coset_of[x] < 0:
            coset_of[g.table[x, members]] = len(reps)
            reps.append(x)
    reps = np.asarray(reps)
    table = coset_of[g.table[np.ix_(reps, reps)]]
    q = FiniteGroup(table, f"{g.name}/N", max_order=g.max_order)
    return q, coset_of


def quotient_lattice_check(lat: SubgroupLattice, normal_h: int) -> list[QuotientEntry]:
    """For each K >= H, the order of K/H and whether K/H is cyclic."""
    g = lat.group
    h = lat.subgroups[normal_h]
    q, coset_of = quotient_group(g, h)
    out = []
    for k in lat.above(normal_h):
        sub = lat.subgroups[k]
        images = np.unique(coset_of[np.asarray(sub.members)])
        order = sub.order // h.order
        cyclic = bool(q.element_orders[images].max() == order)
        out.append(QuotientEntry(int(k), order, cyclic))
    return out


def dump_lattice(lat: SubgroupLattice, mob: MobiusTable | None = None) -> dict:
    """JSON-ready description; deterministic for a given group."""
    mob = mob if mob is not None else mobius(lat)
    return {
        "group_name": lat.group.name,
        "order": lat.group.order,
        "subgroups": [
            {"index": i, "order": h.order, "is_cyclic": h.is_cyclic, "members": list(h.members)}
            for i, h in enumerate(lat.subgroups)
        ],
        "inclusion_pairs": [list(p) for p in lat.inclusion_pairs()],
        "mobius": [{"h": h, "k": k, "value": v} for h, k, v in mob.pairs()],
    }


def dumps_lattice(lat: SubgroupLattice, mob: MobiusTable | None = None) -> str:
    return json.dumps(dump_lattice(lat, mob), indent=1, sort_keys=False) + "\n"
