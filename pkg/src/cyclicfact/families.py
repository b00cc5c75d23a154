"""Builders for the group families the toolkit knows about, and the text syntax
used to name them on the command line.

Every builder encodes elements concretely, compiles a Cayley table and then
checks the defining relations on that table. Element orderings:

* cyclic ``Z_n``: index ``k`` is ``k mod n``.
* two-generator families (dihedral, quaternion, semidihedral, modular,
  dicyclic): index ``j*N + k`` is ``x^k y^j`` where ``N`` is the order of ``x``.
* generalized dicyclic: index ``f*2n + j*n + i`` is ``a^i b^j gamma^f``.
* symmetric / alternating: permutations of ``range(n)`` in lexicographic rank.
* products: ``(i, j) -> i*|second| + j``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np
from sympy import isprime

from .errors import CapacityError, ConsistencyError, SpecParseError, ValidationError
from .group import DEFAULT_MAX_ORDER, FiniteGroup, direct_product


class Family(str, enum.Enum):
    CYCLIC = "cyclic"
    ABELIAN = "abelian"
    DIHEDRAL = "dihedral"
    QUATERNION = "quaternion"
    SEMIDIHEDRAL = "semidihedral"
    MODULAR_P = "modular"
    DICYCLIC = "dicyclic"
    GEN_DICYCLIC = "gendicyclic"
    SYMMETRIC = "symmetric"
    ALTERNATING = "alternating"
    PRODUCT = "product"


class Gamma2(str, enum.Enum):
    """Which involution of ``Z_n x Z_2`` is the square of gamma."""

    A_HALF = "ahalf"
    B = "b"
    A_HALF_B = "ahalfb"


@dataclass(frozen=True)
class GroupSpec:
    family: Family
    params: tuple[int, ...] = ()
    gamma2_choice: Gamma2 | None = None
    factors: tuple["GroupSpec", ...] = field(default=())

    def __str__(self) -> str:
        f = self.family
        if f is Family.PRODUCT:
            return "product:" + "*".join(f"({s})" for s in self.factors)
        if f is Family.ABELIAN:
            pairs = zip(self.params[::2], self.params[1::2])
            return "abelian:" + ",".join(f"{p}^{a}" for p, a in pairs)
        if f is Family.GEN_DICYCLIC:
            return f"gendicyclic:{self.params[0]},{self.gamma2_choice.value}"
        return f"{f.value}:" + ",".join(str(p) for p in self.params)

    @property
    def order(self) -> int:
        f, p = self.family, self.params
        if f is Family.CYCLIC:
            return p[0]
        if f is Family.ABELIAN:
            return int(np.prod([q**a for q, a in zip(p[::2], p[1::2])], dtype=object))
        if f is Family.DIHEDRAL:
            return 2 * p[0]
        if f in (Family.QUATERNION, Family.SEMIDIHEDRAL):
            return 2 ** p[0]
        if f is Family.MODULAR_P:
            return p[0] ** p[1]
        if f in (Family.DICYCLIC, Family.GEN_DICYCLIC):
            return 4 * p[0]
        if f is Family.SYMMETRIC:
            return _factorial(p[0])
        if f is Family.ALTERNATING:
            return max(1, _factorial(p[0]) // 2)
        out = 1
        for s in self.factors:
            out *= s.order
        return out

    def build(self, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
        return build(self, max_order=max_order)


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _capacity(order: int, max_order: int, what: str) -> None:
    if order > max_order:
        raise CapacityError(f"{what} has order {order}, above the configured maximum {max_order}")


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise ValidationError(f"{p} is not prime")


def from_encoding(
    elements: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    name: str,
    max_order: int = DEFAULT_MAX_ORDER,
) -> FiniteGroup:
    """Compile a Cayley table from an explicit element list (identity first)."""
    _capacity(len(elements), max_order, name)
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return FiniteGroup(table, name, max_order=max_order)


def _metacyclic(
    n_x: int, n_y: int, r: int, t: int, name: str, max_order: int
) -> FiniteGroup:
    """Group of words ``x^k y^j`` with ``|x| = n_x``, ``y x y^-1 = x^r`` and
    ``y^n_y = x^t``. Index of ``x^k y^j`` is ``j*n_x + k``."""
    order = n_x * n_y
    _capacity(order, max_order, name)
    k = np.arange(order) % n_x
    j = np.arange(order) // n_x
    rpow = np.array([pow(r, e, n_x) for e in range(n_y)], dtype=np.int64)
    k1, k2 = k[:, None], k[None, :]
    j1, j2 = j[:, None], j[None, :]
    exp = k1 + k2 * rpow[j1]
    js = j1 + j2
    wrap = js >= n_y
    exp = (exp + np.where(wrap, t, 0)) % n_x
    js = np.where(wrap, js - n_y, js)
    return FiniteGroup(js * n_x + exp, name, max_order=max_order)


def _x(n_x: int) -> int:
    return 1 if n_x > 1 else 0


def _verify(g: FiniteGroup, relations: list[tuple[str, bool]]) -> FiniteGroup:
    for label, ok in relations:
        if not ok:
            raise ConsistencyError(f"{g.name}: defining relation {label} fails on the built table")
    return g


def build_cyclic(n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    if n < 1:
        raise ValidationError("cyclic group needs n >= 1")
    _capacity(n, max_order, f"Z_{n}")
    ids = np.arange(n)
    g = FiniteGroup((ids[:, None] + ids[None, :]) % n, f"Z_{n}", max_order=max_order)
    return _verify(g, [("x^n=1", g.element_order(_x(n)) == n)])


def build_abelian(
    prime_power_factors: Sequence[tuple[int, int]], max_order: int = DEFAULT_MAX_ORDER
) -> FiniteGroup:
    if not prime_power_factors:
        raise ValidationError("abelian group needs at least one factor")
    order = 1
    for p, a in prime_power_factors:
        _require_prime(p)
        if a < 1:
            raise ValidationError(f"exponent {a} must be >= 1")
        order *= p**a
    name = " x ".join(f"Z_{p**a}" for p, a in prime_power_factors)
    _capacity(order, max_order, name)
    g = None
    for p, a in prime_power_factors:
        z = build_cyclic(p**a, max_order)
        g = z if g is None else direct_product(g, z, max_order=max_order)
    g.name = name
    return g


def build_dihedral(n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """``D_2n``: x of order n, reflection y with ``y x y = x^-1``."""
    if n < 3:
        raise ValidationError("dihedral group needs n >= 3")
    g = _metacyclic(n, 2, -1, 0, f"D_{2 * n}", max_order)
    x, y = 1, n
    return _verify(g, [
        ("x^n=1", g.element_order(x) == n),
        ("y^2=1", g.element_order(y) == 2),
        ("yxy=x^-1", g.multiply(g.multiply(y, x), y) == g.inverse(x)),
    ])


def build_generalized_quaternion(n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """``Q_{2^n}``: x of order ``2^(n-1)``, ``y^2 = x^(2^(n-2))``, ``y x y^-1 = x^-1``."""
    if n < 3:
        raise ValidationError("generalized quaternion group needs n >= 3")
    _capacity(2**n, max_order, f"Q_{2 ** n}")
    nx = 2 ** (n - 1)
    g = _metacyclic(nx, 2, -1, nx // 2, f"Q_{2 ** n}", max_order)
    x, y = 1, nx
    return _verify(g, [
        ("x^(2^(n-1))=1", g.element_order(x) == nx),
        ("y^4=1", g.element_order(y) == 4),
        ("yxy^-1=x^-1", g.multiply(g.multiply(y, x), g.inverse(y)) == g.inverse(x)),
    ])


def build_semidihedral(n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """``S_{2^n}``: x of order ``2^(n-1)``, involution y, ``y x y = x^(2^(n-2)-1)``."""
    if n < 4:
        raise ValidationError("semidihedral group needs n >= 4")
    _capacity(2**n, max_order, f"SD_{2 ** n}")
    nx = 2 ** (n - 1)
    r = 2 ** (n - 2) - 1
    g = _metacyclic(nx, 2, r, 0, f"SD_{2 ** n}", max_order)
    x, y = 1, nx
    return _verify(g, [
        ("x^(2^(n-1))=1", g.element_order(x) == nx),
        ("y^2=1", g.element_order(y) == 2),
        ("yxy=x^(2^(n-2)-1)", g.multiply(g.multiply(y, x), y) == g.power(x, r)),
    ])


def build_modular_p(p: int, n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """``M(p^n)``: x of order ``p^(n-1)``, y of order p, ``y^-1 x y = x^(p^(n-2)+1)``."""
    _require_prime(p)
    if n < 3:
        raise ValidationError("modular p-group needs n >= 3")
    _capacity(p**n, max_order, f"M({p}^{n})")
    nx = p ** (n - 1)
    s = p ** (n - 2) + 1
    # the table encodes y x y^-1 = x^r, so r is the inverse of s
    r = pow(s, -1, nx)
    g = _metacyclic(nx, p, r, 0, f"M({p ** n})", max_order)
    x, y = 1, nx
    return _verify(g, [
        ("x^(p^(n-1))=1", g.element_order(x) == nx),
        ("y^p=1", g.element_order(y) == p),
        ("y^-1xy=x^(p^(n-2)+1)", g.multiply(g.multiply(g.inverse(y), x), y) == g.power(x, s)),
    ])


def build_dicyclic(n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """``Dic_4n``: a of order 2n, ``gamma^2 = a^n``, ``gamma^-1 a gamma = a^-1``."""
    if n < 1:
        raise ValidationError("dicyclic group needs n >= 1")
    _capacity(4 * n, max_order, f"Dic_{4 * n}")
    g = _metacyclic(2 * n, 2, -1, n, f"Dic_{4 * n}", max_order)
    a, gamma = 1, 2 * n
    return _verify(g, [
        ("a^2n=1", g.element_order(a) == 2 * n),
        ("gamma^2=a^n", g.multiply(gamma, gamma) == g.power(a, n)),
        ("a^gamma=a^-1", g.multiply(g.multiply(g.inverse(gamma), a), gamma) == g.inverse(a)),
    ])


def build_generalized_dicyclic(
    n: int, choice: Gamma2 | str, max_order: int = DEFAULT_MAX_ORDER
) -> FiniteGroup:
    """``Dic_4n(A)`` with ``A = <a> x <b> = Z_n x Z_2``; gamma inverts A and
    squares to the involution named by ``choice``."""
    choice = Gamma2(choice)
    if n < 1:
        raise ValidationError("generalized dicyclic group needs n >= 1")
    if choice in (Gamma2.A_HALF, Gamma2.A_HALF_B) and n % 2:
        raise ValidationError(f"gamma^2 choice {choice.value!r} needs n even, got n={n}")
    name = f"Dic_{4 * n}(Z_2 x Z_{n}; {choice.value})"
    _capacity(4 * n, max_order, name)
    half = n // 2
    c = {Gamma2.A_HALF: (half, 0), Gamma2.B: (0, 1), Gamma2.A_HALF_B: (half, 1)}[choice]

    def mul(u, v):
        (i1, j1, f1), (i2, j2, f2) = u, v
        if f1:
            i2, j2 = -i2, -j2
        i, j, f = i1 + i2, j1 + j2, f1 + f2
        if f == 2:
            i, j, f = i + c[0], j + c[1], 0
        return (i % n, j % 2, f)

    elements = [(i, j, f) for f in range(2) for j in range(2) for i in range(n)]
    g = from_encoding(elements, mul, name, max_order)
    a, b, gamma = _x(n), n, 2 * n
    cid = elements.index((c[0], c[1], 0))
    inverts = all(
        g.multiply(g.multiply(g.inverse(gamma), x), gamma) == g.inverse(x) for x in range(2 * n)
    )
    return _verify(g, [
        ("a^n=1", g.element_order(a) == n),
        ("b^2=1", g.element_order(b) == 2),
        ("ab=ba", g.multiply(a, b) == g.multiply(b, a)),
        ("gamma^4=e", g.element_order(gamma) == 4),
        ("gamma^2=c", g.multiply(gamma, gamma) == cid),
        ("g^gamma=g^-1", inverts),
    ])


def _perm_group(perms: list[tuple[int, ...]], name: str, max_order: int) -> FiniteGroup:
    # (p*q)(i) = p[q[i]]: apply q first
    return from_encoding(perms, lambda p, q: tuple(p[i] for i in q), name, max_order)


def _parity(perm: tuple[int, ...]) -> int:
    seen, parity = set(), 0
    for start in range(len(perm)):
        length, i = 0, start
        while i not in seen:
            seen.add(i)
            i = perm[i]
            length += 1
        if length:
            parity ^= (length - 1) & 1
    return parity


def build_symmetric(n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    if n < 1:
        raise ValidationError("symmetric group needs n >= 1")
    _capacity(_factorial(n), max_order, f"S_{n}")
    return _perm_group(list(itertools.permutations(range(n))), f"S_{n}", max_order)


def build_alternating(n: int, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    if n < 1:
        raise ValidationError("alternating group needs n >= 1")
    _capacity(max(1, _factorial(n) // 2), max_order, f"A_{n}")
    perms = [p for p in itertools.permutations(range(n)) if not _parity(p)]
    return _perm_group(perms, f"A_{n}", max_order)


def build(spec: GroupSpec | str, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Build the group named by ``spec`` (a :class:`GroupSpec` or its text form)."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    f, p = spec.family, spec.params
    _capacity(spec.order, max_order, str(spec))
    if f is Family.CYCLIC:
        return build_cyclic(p[0], max_order)
    if f is Family.ABELIAN:
        return build_abelian(list(zip(p[::2], p[1::2])), max_order)
    if f is Family.DIHEDRAL:
        return build_dihedral(p[0], max_order)
    if f is Family.QUATERNION:
        return build_generalized_quaternion(p[0], max_order)
    if f is Family.SEMIDIHEDRAL:
        return build_semidihedral(p[0], max_order)
    if f is Family.MODULAR_P:
        return build_modular_p(p[0], p[1], max_order)
    if f is Family.DICYCLIC:
        return build_dicyclic(p[0], max_order)
    if f is Family.GEN_DICYCLIC:
        return build_generalized_dicyclic(p[0], spec.gamma2_choice, max_order)
    if f is Family.SYMMETRIC:
        return build_symmetric(p[0], max_order)
    if f is Family.ALTERNATING:
        return build_alternating(p[0], max_order)
    g = None
    for s in spec.factors:
        h = build(s, max_order)
        g = h if g is None else direct_product(g, h, max_order=max_order)
    return g


# --- spec text syntax -------------------------------------------------------

_ARITY = {
    Family.CYCLIC: 1,
    Family.DIHEDRAL: 1,
    Family.QUATERNION: 1,
    Family.SEMIDIHEDRAL: 1,
    Family.MODULAR_P: 2,
    Family.DICYCLIC: 1,
    Family.SYMMETRIC: 1,
    Family.ALTERNATING: 1,
}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, expected: str):
        raise SpecParseError(self.text, self.pos, expected)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            self.fail(repr(ch))
        self.pos += 1

    def word(self) -> str:
        start = self.pos
        while self.peek().isalpha():
            self.pos += 1
        if start == self.pos:
            self.fail("a family name")
        return self.text[start:self.pos]

    def integer(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("an integer")
        return int(self.text[start:self.pos])

    def spec(self) -> GroupSpec:
        start = self.pos
        name = self.word()
        try:
            family = Family(name)
        except ValueError:
            self.pos = start
            self.fail("one of " + ", ".join(f.value for f in Family))
        self.expect(":")
        if family is Family.PRODUCT:
            factors = [self.factor()]
            while self.peek() == "*":
                self.pos += 1
                factors.append(self.factor())
            if len(factors) < 2:
                self.fail("'*' and a second factor")
            return GroupSpec(family, factors=tuple(factors))
        if family is Family.ABELIAN:
            params: list[int] = []
            while True:
                params.append(self.integer())
                self.expect("^")
                params.append(self.integer())
                if self.peek() != ",":
                    break
                self.pos += 1
            return GroupSpec(family, tuple(params))
        if family is Family.GEN_DICYCLIC:
            n = self.integer()
            self.expect(",")
            start = self.pos
            word = self.word()
            try:
                choice = Gamma2(word)
            except ValueError:
                self.pos = start
                self.fail("one of ahalf, b, ahalfb")
            return GroupSpec(family, (n,), choice)
        params = [self.integer()]
        for _ in range(_ARITY[family] - 1):
            self.expect(",")
            params.append(self.integer())
        return GroupSpec(family, tuple(params))

    def factor(self) -> GroupSpec:
        self.expect("(")
        inner = self.spec()
        self.expect(")")
        return inner


def parse_spec(text: str) -> GroupSpec:
    """Parse the whitespace-free group syntax, e.g. ``dihedral:5`` or
    ``product:(symmetric:3)*(cyclic:2)``."""
    parser = _Parser(text)
    spec = parser.spec()
    if parser.pos != len(text):
        parser.fail("end of input")
    return spec
