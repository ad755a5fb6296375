"""Finite congruence quotients of the first congruence subgroup of SL2(Z_p)^n
and rank approximation along the congruence chain.

The level-i quotient U_1/U_i consists of n-tuples of 2x2 matrices over
Z/p^i that are congruent to the identity mod p with determinant 1; its order
is p^(3n(i-1)).  Ranks of pushed-forward matrices are computed exactly over Q
(integer matrices, no p-adic precision arithmetic anywhere), normalized so
that the known limit for a nonzero element is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .exactalg import ExactMatrix, StructuralError
from .groupcore import GroupAlgebraMatrix, GroupPresentation
from .rankfun import FiniteQuotientMap, MemoryCapError, luck_rank

DEFAULT_ORDER_CAP = 3 ** 6

Mat2 = tuple[int, int, int, int]  # row-major entries mod p^level
CongElement = tuple[Mat2, ...]  # one 2x2 matrix per factor


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class CongruenceOps:
    """Element domain for U_1/U_i: tuples of unimodular 2x2 matrices mod p^i."""

    p: int
    level: int
    n: int

    @property
    def modulus(self) -> int:
        return self.p ** self.level

    @property
    def identity(self) -> CongElement:
        return ((1 % self.modulus, 0, 0, 1 % self.modulus),) * self.n

    def mul(self, x: CongElement, y: CongElement) -> CongElement:
        m = self.modulus
        out = []
        for (a, b, c, d), (e, f, g, h) in zip(x, y):
            out.append(((a * e + b * g) % m, (a * f + b * h) % m,
                        (c * e + d * g) % m, (c * f + d * h) % m))
        return tuple(out)

    def inv(self, x: CongElement) -> CongElement:
        # determinant is 1 mod p^level, so the inverse is the adjugate
        m = self.modulus
        return tuple(((d, (-b) % m, (-c) % m, a)) for a, b, c, d in x)


@dataclass(frozen=True)
class CongruenceQuotient:
    p: int
    level: int
    n: int
    order: int
    ops: CongruenceOps
    elements: tuple[CongElement, ...]


def congruence_quotient(p: int, level: int, n: int = 1,
                        max_order: int = DEFAULT_ORDER_CAP) -> CongruenceQuotient:
    """Complete enumeration of U_1/U_level for SL2(Z_p)^n.

    Rejects p = 2 (the uniformity of the congruence subgroups needs p odd)
    and orders above `max_order`.
    """
    if not _is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    if level < 1:
        raise StructuralError("congruence level must be >= 1")
    if n < 1:
        raise StructuralError("factor count must be >= 1")
    order = p ** (3 * n * (level - 1))
    if order > max_order:
        raise MemoryCapError(
            f"quotient order {order} exceeds the enumeration cap {max_order}")
    m = p ** level
    k = p ** (level - 1)
    factor: list[Mat2] = []
    for ar, br, cr in product(range(k), repeat=3):
        a = (1 + p * ar) % m
        b = (p * br) % m
        c = (p * cr) % m
        d = (pow(a, -1, m) * (1 + b * c)) % m
        if d % p != 1:
            raise AssertionError("enumeration produced a non-congruence element")
        factor.append((a, b, c, d))
    elements = tuple(product(factor, repeat=n))
    if len(elements) != order:
        raise AssertionError("enumeration size disagrees with the order formula")
    ops = CongruenceOps(p, level, n)
    return CongruenceQuotient(p, level, n, order, ops, elements)


def reduce_matrix_mod(g: ExactMatrix, p: int, level: int) -> Mat2:
    """Reduce a 2x2 matrix with rational entries mod p^level.

    Denominators must be coprime to p; the result must be congruent to the
    identity mod p (an image inside the first congruence subgroup) and have
    determinant 1 mod p^level.
    """
    if g.rows != 2 or g.cols != 2:
        raise StructuralError("expected a 2x2 matrix")
    m = p ** level
    vals = []
    for i in range(2):
        for j in range(2):
            q = g.entry(i, j).rational_value()
            if q.denominator % p == 0:
                raise ValueError(f"entry denominator {q.denominator} is divisible by p = {p}")
            vals.append(q.numerator * pow(q.denominator, -1, m) % m)
    a, b, c, d = vals
    if a % p != 1 or d % p != 1 or b % p != 0 or c % p != 0:
        raise ValueError("matrix image is not congruent to the identity mod p")
    if (a * d - b * c) % m != 1:
        raise ValueError("matrix image does not have determinant 1 mod p^level")
    return (a, b, c, d)


def congruence_quotient_map(presentation: GroupPresentation,
                            images: Sequence[Sequence[ExactMatrix]],
                            p: int, level: int) -> FiniteQuotientMap:
    """Quotient map onto U_1/U_level from declared generator images in U_1."""
    if not images:
        raise StructuralError("at least one generator image required")
    n = len(images[0])
    ops = CongruenceOps(p, level, n)
    gen_images = []
    for tup in images:
        if len(tup) != n:
            raise StructuralError("inconsistent factor counts across generators")
        gen_images.append(tuple(reduce_matrix_mod(g, p, level) for g in tup))
    order = p ** (3 * n * (level - 1))
    return FiniteQuotientMap.build(presentation, ops, gen_images, order=order,
                                   name=f"U1/U{level} (p={p}, n={n})")


@dataclass(frozen=True)
class HarrisRow:
    level: int
    index: int  # |U_1 : U_level| = p^(3n(level-1))
    value: Fraction
    envelope: Fraction  # index^(-1/(3n)) = p^(1-level), the theoretical error scale
    error: Optional[Fraction]  # |value - target| when a target is declared


def harris_sequence(a: GroupAlgebraMatrix, presentation: GroupPresentation,
                    images: Sequence[Sequence[ExactMatrix]], p: int,
                    levels: Sequence[int], target: Optional[Fraction] = None,
                    cap: Optional[int] = None) -> list[HarrisRow]:
    """Normalized ranks of `a` over the congruence quotients at the given
    levels, with the theoretical error envelope recorded per level.

    Generator images must lie in the first congruence subgroup (congruent to
    the identity mod p).  The rank at each level is exact; nothing here ever
    enumerates the full quotient.
    """
    if not _is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    n = len(images[0]) if images else 1
    rows = []
    for level in sorted(levels):
        if level < 1:
            raise StructuralError("levels must be >= 1")
        q = congruence_quotient_map(presentation, images, p, level)
        value = luck_rank(a, q, cap=cap)
        index = p ** (3 * n * (level - 1))
        envelope = Fraction(1, p ** (level - 1))
        error = abs(value - target) if target is not None else None
        rows.append(HarrisRow(level, index, value, envelope, error))
    return rows


def unipotent_element_images(p: int, n: int = 1) -> list[list[ExactMatrix]]:
    """Generator images for the shipped unipotent test element: one generator
    mapping to I + p*E12 in every factor."""
    from .exactalg import QQ
    g = ExactMatrix.from_rows(QQ, [[1, p], [0, 1]])
    return [[g for _ in range(n)]]


def diagonal_element_images(p: int, n: int = 1) -> list[list[ExactMatrix]]:
    """Generator images for the shipped diagonal test element:
    diag(1+p, 1/(1+p)) in every factor."""
    from .exactalg import QQ
    g = ExactMatrix.from_rows(QQ, [[1 + p, 0], [0, Fraction(1, 1 + p)]])
    return [[g for _ in range(n)]]
