"""Closed-form cyclic factorization numbers for the supported families, and
the elementary number theory they rely on.

Each formula refuses parameters outside the range where it has been checked
against enumeration; the small special cases (Q_8, M(8), Dic_4, Dic_8, the
order-8 generalized dicyclic groups) genuinely differ from the general shape.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy import divisor_count, factorint, isprime
from sympy import mobius as _sympy_mobius

from .errors import ValidationError
from .families import Family, Gamma2, GroupSpec


class FormulaId(str, enum.Enum):
    CYCLIC = "cyclic"
    ABELIAN_P = "abelian-p"
    DIHEDRAL = "dihedral"
    QUATERNION = "quaternion"
    SEMIDIHEDRAL = "semidihedral"
    MODULAR = "modular"
    MODULAR_2 = "modular-2"
    DICYCLIC = "dicyclic"
    GEN_DICYCLIC = "gen-dicyclic"
    COPRIME_PRODUCT = "coprime-product"


@dataclass(frozen=True)
class FormulaResult:
    family: str
    params: tuple
    value: int
    formula_id: FormulaId


def tau(n: int) -> int:
    """Number of positive divisors of n."""
    if n < 1:
        raise ValidationError("tau needs n >= 1")
    return int(divisor_count(n))


def mobius_nt(n: int) -> int:
    """Number-theoretic Möbius function."""
    if n < 1:
        raise ValidationError("mobius_nt needs n >= 1")
    return int(_sympy_mobius(n))


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def parity_weight(d: int) -> int:
    """1 for odd d, 2 for even d."""
    return 1 if d % 2 else 2


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise ValidationError(f"{p} is not prime")


def cf2_cyclic_formula(n: int) -> int:
    """Product of (2*alpha + 1) over the prime factorization of n."""
    if n < 1:
        raise ValidationError("cyclic formula needs n >= 1")
    out = 1
    for alpha in factorint(n).values():
        out *= 2 * alpha + 1
    return out


def cf2_abelian_p_formula(p: int, alphas: Sequence[int]) -> int:
    """CF2 of Z_{p^a1} x ... x Z_{p^ak} with a1 <= ... <= ak."""
    _require_prime(p)
    alphas = list(alphas)
    if not alphas or any(a < 1 for a in alphas):
        raise ValidationError("need at least one exponent, all >= 1")
    if alphas != sorted(alphas):
        raise ValidationError("exponents must be nondecreasing")
    k = len(alphas)
    if k == 1:
        return 2 * alphas[0] + 1
    if k == 2:
        a1, a2 = alphas
        return p ** (2 * a1 - 1) * ((2 * a2 - 2 * a1 + 1) * p - 2 * a2 + 2 * a1 + 1)
    return 0


def cf2_dihedral_formula(n: int) -> int:
    if n < 3:
        raise ValidationError("dihedral formula needs n >= 3")
    return 2 * n


def cf2_quaternion_formula(n: int) -> int:
    """Q_{2^n}: 6 for Q_8, 2^(n-1) from Q_16 on."""
    if n < 3:
        raise ValidationError("quaternion formula needs n >= 3")
    return 6 if n == 3 else 2 ** (n - 1)


def cf2_semidihedral_formula(n: int) -> int:
    if n < 4:
        raise ValidationError("semidihedral formula needs n >= 4")
    return 3 * 2 ** (n - 2)


def cf2_modular_formula(p: int, n: int) -> int:
    """M(p^n). The general expression also holds at n = 3 for odd p
    (checked by enumeration on M(27), M(125)); M(8) = D_8 is the exception."""
    _require_prime(p)
    if n < 3:
        raise ValidationError("modular formula needs n >= 3")
    if (p, n) == (2, 3):
        return 8
    return p * ((2 * n - 4) * (p - 1) - p + 3) + 2 * p * (p - 1)


def cf2_modular2_formula(n: int) -> int:
    """M(2^n), n >= 4: simplifies to 4n - 2."""
    if n < 4:
        raise ValidationError("modular 2-group formula needs n >= 4")
    return 4 * n - 2


def cf2_dicyclic_formula(n: int) -> int:
    """Dic_4n: 5 and 6 for n = 1, 2; then 4n for odd n and 2n for even n."""
    if n < 1:
        raise ValidationError("dicyclic formula needs n >= 1")
    if n == 1:
        return 5
    if n == 2:
        return 6
    return 4 * n if n % 2 else 2 * n


def two_adic_split(n: int) -> tuple[int, int]:
    """(m, m') with n = 2^m * m' and m' odd."""
    if n < 1:
        raise ValidationError("need n >= 1")
    m = 0
    while n % 2 == 0:
        n //= 2
        m += 1
    return m, n


def cf2_gen_dicyclic_formula(
    n: int, choice: Gamma2 | str, m: int | None = None, m_prime: int | None = None
) -> int:
    """Dic_4n(A) with A = Z_2 x Z_n, n = 2^m m', m >= 1.

    * m = 1, m' > 1: 4n for every choice of gamma^2.
    * m >= 2: 4n when gamma^2 is b or a^(n/2) b, and 0 when gamma^2 = a^(n/2).
    * n = 2: gamma has order 4 and centralizes A, so the group is Z_2 x Z_4
      and the value is 10 for every choice.
    """
    choice = Gamma2(choice)
    split = two_adic_split(n)
    if m is not None or m_prime is not None:
        if (m, m_prime) != split:
            raise ValidationError(f"{n} != 2^{m} * {m_prime} with {m_prime} odd")
    m, m_prime = split
    if m < 1:
        raise ValidationError("generalized dicyclic formula needs n even")
    if m == 1 and m_prime == 1:
        return cf2_abelian_p_formula(2, [1, 2])
    if m == 1:
        return 4 * n
    return 0 if choice is Gamma2.A_HALF else 4 * n


def csd_dihedral_subgroup_formula(d: int, kind: str = "K") -> Fraction:
    """csd of a subgroup of D_2n: 1 for the rotation subgroup H_d, and the
    parity-dependent value for the dihedral-type subgroup K_d of order 2d."""
    if d < 1:
        raise ValidationError("need d >= 1")
    if kind == "H":
        return Fraction(1)
    if kind != "K":
        raise ValidationError(f"kind must be 'H' or 'K', got {kind!r}")
    t = tau(d)
    return Fraction(t * (t + d) + d * (t + parity_weight(d)), (t + d) ** 2)


def dihedral_mobius_formula(n: int, d: int, kind: str) -> int:
    """µ(H_d, D_2n) = -(n/d) mu(n/d) and µ(K_d^i, D_2n) = mu(n/d)."""
    if d < 1 or n % d:
        raise ValidationError(f"{d} does not divide {n}")
    q = n // d
    if kind == "H":
        return -q * mobius_nt(q)
    if kind == "K":
        return mobius_nt(q)
    raise ValidationError(f"kind must be 'H' or 'K', got {kind!r}")


def dihedral_cyclic_poset_size(d: int, kind: str) -> int:
    """|L_1| of H_d (tau(d)) and of K_d^i (tau(d) + d)."""
    return tau(d) if kind == "H" else tau(d) + d


def formula_for(spec: GroupSpec) -> FormulaResult | None:
    """The closed-form CF2 for ``spec``, or None when no formula covers it."""
    f, p = spec.family, spec.params
    name = str(spec)
    try:
        if f is Family.CYCLIC:
            return FormulaResult(name, p, cf2_cyclic_formula(p[0]), FormulaId.CYCLIC)
        if f is Family.ABELIAN:
            by_prime: dict[int, list[int]] = {}
            for q, a in zip(p[::2], p[1::2]):
                by_prime.setdefault(q, []).append(a)
            value = 1
            for q, alphas in by_prime.items():
                value *= cf2_abelian_p_formula(q, sorted(alphas))
            fid = FormulaId.ABELIAN_P if len(by_prime) == 1 else FormulaId.COPRIME_PRODUCT
            return FormulaResult(name, p, value, fid)
        if f is Family.DIHEDRAL:
            return FormulaResult(name, p, cf2_dihedral_formula(p[0]), FormulaId.DIHEDRAL)
        if f is Family.QUATERNION:
            return FormulaResult(name, p, cf2_quaternion_formula(p[0]), FormulaId.QUATERNION)
        if f is Family.SEMIDIHEDRAL:
            return FormulaResult(name, p, cf2_semidihedral_formula(p[0]), FormulaId.SEMIDIHEDRAL)
        if f is Family.MODULAR_P:
            return FormulaResult(name, p, cf2_modular_formula(*p), FormulaId.MODULAR)
        if f is Family.DICYCLIC:
            return FormulaResult(name, p, cf2_dicyclic_formula(p[0]), FormulaId.DICYCLIC)
        if f is Family.GEN_DICYCLIC:
            value = cf2_gen_dicyclic_formula(p[0], spec.gamma2_choice)
            return FormulaResult(name, p, value, FormulaId.GEN_DICYCLIC)
        if f is Family.PRODUCT:
            orders = [s.order for s in spec.factors]
            if any(gcd(a, b) != 1 for i, a in enumerate(orders) for b in orders[i + 1:]):
                return None
            value = 1
            for s in spec.factors:
                sub = formula_for(s)
                if sub is None:
                    return None
                value *= sub.value
            return FormulaResult(name, (), value, FormulaId.COPRIME_PRODUCT)
    except ValidationError:
        return None
    return None
