"""Finite groups as explicit Cayley tables, plus subgroups stored as bitsets.

Elements are the integers ``0 .. order-1`` and ``0`` is always the identity.
A subgroup is kept as a Python ``int`` bitmask over those indices, so
intersection is ``&`` and cardinality is ``int.bit_count``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, StructuralError

DEFAULT_MAX_ORDER = 2048
ASSOCIATIVITY_CHECK_BOUND = 128


def mask_from_bools(flags: np.ndarray) -> int:
    """Pack a boolean membership vector into an int bitmask (bit i = element i)."""
    packed = np.packbits(np.asarray(flags, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def bools_from_mask(mask: int, n: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def mask_from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << int(i)
    return mask


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of some :class:`FiniteGroup`, identified by its member bitmask.

    ``gens`` is a (not necessarily minimal) generating set; it is only used to
    speed up joins. Equality and hashing look at ``mask`` alone.
    """

    mask: int
    order: int
    is_cyclic: bool
    gens: tuple[int, ...] = field(default=())
    members: tuple[int, ...] = field(default=(), repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> int(x)) & 1)

    def __len__(self) -> int:
        return self.order

    def issubgroup(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``table[a, b]`` is the index of ``a*b``. The constructor checks the identity
    and inverse laws always, and associativity when ``order <= check_bound``.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        name: str = "G",
        *,
        max_order: int = DEFAULT_MAX_ORDER,
        check_bound: int = ASSOCIATIVITY_CHECK_BOUND,
    ):
        table = np.asarray(table, dtype=np.int32)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise StructuralError(f"Cayley table must be a non-empty square array, got {table.shape}")
        n = table.shape[0]
        if n > max_order:
            raise CapacityError(f"group order {n} exceeds the configured maximum {max_order}")
        if table.min() < 0 or table.max() >= n:
            raise StructuralError("Cayley table entries must lie in [0, order)")
        ids = np.arange(n)
        if not (np.array_equal(table[0], ids) and np.array_equal(table[:, 0], ids)):
            raise StructuralError("index 0 must be a two-sided identity")
        hits = table == 0
        if not np.all(hits.sum(axis=1) == 1):
            raise StructuralError("every element needs exactly one right inverse")
        inverses = hits.argmax(axis=1)
        if not np.array_equal(table[inverses, ids], np.zeros(n, dtype=np.int32)):
            raise StructuralError("right and left inverses differ")
        if n <= check_bound:
            left = table[table[:, :, None], ids[None, None, :]]
            right = table[ids[:, None, None], table[None, :, :]]
            if not np.array_equal(left, right):
                raise StructuralError(f"table for {name} is not associative")
        table.setflags(write=False)
        inverses.setflags(write=False)
        self.table = table
        self.inverses = inverses
        self.name = name
        self.order = n
        self.max_order = max_order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def _check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise StructuralError(f"element index {a} out of range for {self.name} of order {self.order}")
        return a

    def multiply(self, a: int, b: int) -> int:
        return int(self.table[self._check(a), self._check(b)])

    def inverse(self, a: int) -> int:
        return int(self.inverses[self._check(a)])

    def power(self, a: int, k: int) -> int:
        a = self._check(a)
        if k < 0:
            a, k = int(self.inverses[a]), -k
        result, base = 0, a
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        ids = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        pw = ids.copy()
        for k in range(1, n + 1):
            done = (pw == 0) & (orders == 0)
            orders[done] = k
            if orders.all():
                break
            pw = self.table[pw, ids]
        orders.setflags(write=False)
        return orders

    def element_order(self, a: int) -> int:
        return int(self.element_orders[self._check(a)])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def center(self) -> "Subgroup":
        central = np.all(self.table == self.table.T, axis=1)
        return self.subgroup_from_mask(mask_from_bools(central))

    def order_census(self) -> dict[int, int]:
        """Map each element order to the number of elements having it."""
        values, counts = np.unique(self.element_orders, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def cyclic_subgroup(self, a: int) -> Subgroup:
        a = self._check(a)
        members = [0]
        x = a
        while x != 0:
            members.append(x)
            x = int(self.table[x, a])
        mask = mask_from_indices(members)
        return Subgroup(mask, len(members), True, (a,) if a else (), tuple(sorted(members)))

    def subgroup_from_mask(self, mask: int, gens: tuple[int, ...] = ()) -> Subgroup:
        """Wrap a member bitmask that is already known to be closed."""
        flags = bools_from_mask(mask, self.order)
        members = np.flatnonzero(flags)
        order = len(members)
        is_cyclic = bool(self.element_orders[members].max() == order)
        if not gens:
            gens = tuple(int(x) for x in members if x)
        return Subgroup(mask, order, is_cyclic, gens, tuple(int(x) for x in members))

    def _closure(self, seed: np.ndarray) -> np.ndarray:
        elems = np.flatnonzero(seed)
        while True:
            flags = np.zeros(self.order, dtype=bool)
            flags[self.table[np.ix_(elems, elems)].ravel()] = True
            flags[0] = True
            grown = np.flatnonzero(flags)
            if len(grown) == len(elems):
                return flags
            elems = grown

    def generate(self, gens: Iterable[int]) -> Subgroup:
        """Smallest subgroup containing ``gens``."""
        gens = tuple(dict.fromkeys(self._check(g) for g in gens if int(g) != 0))
        if len(gens) <= 1:
            return self.cyclic_subgroup(gens[0] if gens else 0)
        seed = np.zeros(self.order, dtype=bool)
        seed[0] = True
        seed[list(gens)] = True
        flags = self._closure(seed)
        return self.subgroup_from_mask(mask_from_bools(flags), gens)

    def join(self, h: Subgroup, k: Subgroup) -> Subgroup:
        if h.issubgroup(k):
            return k
        if k.issubgroup(h):
            return h
        seed = bools_from_mask(h.mask | k.mask, self.order)
        flags = self._closure(seed)
        gens = tuple(dict.fromkeys(h.gens + k.gens))
        return self.subgroup_from_mask(mask_from_bools(flags), gens)

    def meet(self, h: Subgroup, k: Subgroup) -> Subgroup:
        return self.subgroup_from_mask(h.mask & k.mask)

    @cached_property
    def trivial_subgroup(self) -> Subgroup:
        return self.cyclic_subgroup(0)

    @cached_property
    def whole(self) -> Subgroup:
        return self.subgroup_from_mask((1 << self.order) - 1)

    def product_set_order(self, h: Subgroup, k: Subgroup) -> int:
        """|HK| = |H||K| / |H ∩ K|; valid whether or not HK is a subgroup."""
        return h.order * k.order // (h.mask & k.mask).bit_count()

    def product_set(self, h: Subgroup, k: Subgroup) -> int:
        """Bitmask of the literal set {h*k : h in H, k in K}."""
        flags = np.zeros(self.order, dtype=bool)
        flags[self.table[np.ix_(h.members, k.members)].ravel()] = True
        return mask_from_bools(flags)

    def permutes(self, h: Subgroup, k: Subgroup) -> bool:
        """True iff HK = KH as sets.

        KH is the elementwise inverse of HK, so the literal comparison reduces
        to HK being closed under inversion.
        """
        if h.issubgroup(k) or k.issubgroup(h):
            return True
        flags = np.zeros(self.order, dtype=bool)
        hk = self.table[np.ix_(h.members, k.members)].ravel()
        flags[hk] = True
        return bool(flags[self.inverses[hk]].all())

    def is_normal(self, h: Subgroup) -> bool:
        members = np.asarray(h.members)
        flags = bools_from_mask(h.mask, self.order)
        for g in range(self.order):
            conj = self.table[self.table[g, members], self.inverses[g]]
            if not flags[conj].all():
                return False
        return True


def direct_product(
    g1: FiniteGroup, g2: FiniteGroup, *, max_order: int | None = None, name: str | None = None
) -> FiniteGroup:
    """Componentwise product; the pair (i, j) gets index ``i * |g2| + j``."""
    limit = max_order if max_order is not None else max(g1.max_order, g2.max_order)
    n1, n2 = g1.order, g2.order
    if n1 * n2 > limit:
        raise CapacityError(f"direct product order {n1 * n2} exceeds the configured maximum {limit}")
    t1 = g1.table.astype(np.int64)
    t2 = g2.table.astype(np.int64)
    table = t1[:, None, :, None] * n2 + t2[None, :, None, :]
    return FiniteGroup(
        table.reshape(n1 * n2, n1 * n2),
        name or f"{g1.name} x {g2.name}",
        max_order=limit,
    )
