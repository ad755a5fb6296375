"""Sylvester matrix rank functions that are exactly computable.

Four families live here:

* representation rank of a group-algebra matrix through a weight module,
* von Neumann rank over a finite group (regular representation, exact),
* twisted finite-group rank relative to a central character, and
* Lueck ranks through finite quotient maps, including chains.

All values are exact `Fraction`s.  Regular representations are materialized
over the subgroup generated by the matrix support rather than the whole
quotient: the normalized rank is identical (the von Neumann rank of a matrix
does not change when the group is enlarged), and this keeps deep congruence
levels within reach.  Passing `elements=` forces the full materialization.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Protocol, Sequence

from .exactalg import (ExactMatrix, FieldElement, NumberField, QQ, StructuralError,
                       as_fraction, rank_exact)
from .groupcore import GroupAlgebraMatrix, GroupPresentation, Word, evaluate
from .repweights import RepAssignment, weight_dim

RankValue = Fraction

# bounds |H| * max(rows, cols) for materialized regular representations;
# |H| above ~4k means millions of dense entries under elimination
DEFAULT_MEMORY_CAP = 4096
_MEMORY_CAP_ENV = "L2APPROX_MEMORY_CAP"


class MemoryCapError(RuntimeError):
    """Materializing the requested regular representation would exceed the cap."""


def memory_cap(override: Optional[int] = None) -> int:
    if override is not None:
        return override
    env = os.environ.get(_MEMORY_CAP_ENV)
    return int(env) if env else DEFAULT_MEMORY_CAP


class GroupOps(Protocol):
    """Duck-typed finite group element domain: hashable elements, exact ops."""

    identity: Hashable

    def mul(self, a, b): ...

    def inv(self, a): ...


@dataclass(frozen=True)
class PermutationOps:
    """Permutations of {0..n-1} as tuples; p[x] is the image of x."""

    degree: int

    @property
    def identity(self) -> tuple[int, ...]:
        return tuple(range(self.degree))

    def mul(self, a, b):
        # apply b first, then a
        return tuple(a[b[x]] for x in range(self.degree))

    def inv(self, a):
        out = [0] * self.degree
        for x, y in enumerate(a):
            out[y] = x
        return tuple(out)


def cyclic_generator(n: int) -> tuple[int, ...]:
    return tuple((x + 1) % n for x in range(n))


@dataclass(frozen=True)
class AbelianTupleOps:
    """Direct product of cyclic groups Z/m_1 x ... x Z/m_k, elements as tuples."""

    moduli: tuple[int, ...]

    @property
    def identity(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def mul(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def inv(self, a):
        return tuple((-x) % m for x, m in zip(a, self.moduli))


_QUAT_TABLE = {
    (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
    (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
}


@dataclass(frozen=True)
class QuaternionOps:
    """The unit quaternions {+-1, +-i, +-j, +-k}; elements (sign, axis),
    axis 0 = 1, 1 = i, 2 = j, 3 = k."""

    @property
    def identity(self) -> tuple[int, int]:
        return (1, 0)

    def mul(self, a, b):
        sa, ka = a
        sb, kb = b
        s = sa * sb
        if ka == 0:
            return (s, kb)
        if kb == 0:
            return (s, ka)
        if ka == kb:
            return (-s, 0)
        sgn, k = _QUAT_TABLE[(ka, kb)]
        return (s * sgn, k)

    def inv(self, a):
        s, k = a
        return (s, k) if k == 0 else (-s, k)

    def all_elements(self) -> list[tuple[int, int]]:
        return [(s, k) for k in range(4) for s in (1, -1)]

    def center(self) -> list[tuple[int, int]]:
        return [(1, 0), (-1, 0)]


def subgroup_closure(ops: GroupOps, generators: Iterable, cap: int) -> list:
    """Elements of the subgroup generated by `generators`, deterministic order."""
    gens = []
    for g in generators:
        if g not in gens:
            gens.append(g)
    seen = {ops.identity}
    order = [ops.identity]
    frontier = [ops.identity]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                e = ops.mul(g, h)
                if e not in seen:
                    seen.add(e)
                    order.append(e)
                    nxt.append(e)
                    if len(seen) > cap:
                        raise MemoryCapError(
                            f"support subgroup exceeds the configured cap ({cap})")
        frontier = nxt
    return order


@dataclass(frozen=True)
class FiniteAlgebraMatrix:
    """Matrix over the group algebra of a finite group; entries are maps
    element -> coefficient over one number field."""

    field: NumberField
    rows: int
    cols: int
    entries: tuple[Mapping, ...]

    @staticmethod
    def from_rows(field: NumberField, rows: Sequence[Sequence[Mapping]]) -> "FiniteAlgebraMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise StructuralError("ragged rows")
            for cell in row:
                flat.append(_clean_cell(field, cell))
        return FiniteAlgebraMatrix(field, r, c, tuple(flat))

    @staticmethod
    def single(field: NumberField, cell: Mapping) -> "FiniteAlgebraMatrix":
        return FiniteAlgebraMatrix(field, 1, 1, (_clean_cell(field, cell),))

    def entry(self, i: int, j: int) -> Mapping:
        return self.entries[i * self.cols + j]

    def support(self) -> list:
        out = []
        seen = set()
        for cell in self.entries:
            for g in cell:
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        return out


def _clean_cell(field: NumberField, cell: Mapping) -> dict:
    out = {}
    for g, c in cell.items():
        ce = c if isinstance(c, FieldElement) else field.from_rational(as_fraction(c))
        if ce.field != field:
            raise StructuralError("cell coefficient over a different field")
        if ce:
            out[g] = ce
    return out


def _regular_blocks(a: FiniteAlgebraMatrix, ops: GroupOps, elements: Sequence) -> ExactMatrix:
    """Left regular representation blocks over the listed elements."""
    field = a.field
    q = len(elements)
    index = {g: k for k, g in enumerate(elements)}
    zero = field.zero
    out_rows = a.rows * q
    out_cols = a.cols * q
    flat = [zero] * (out_rows * out_cols)
    for i in range(a.rows):
        for j in range(a.cols):
            cell = a.entry(i, j)
            if not cell:
                continue
            for g, c in cell.items():
                if g not in index:
                    raise StructuralError("matrix support escapes the listed elements")
            for v_idx, v in enumerate(elements):
                col = j * q + v_idx
                for g, c in cell.items():
                    u = ops.mul(g, v)
                    flat[(i * q + index[u]) * out_cols + col] = \
                        flat[(i * q + index[u]) * out_cols + col] + c
    return ExactMatrix(field, out_rows, out_cols, tuple(flat))


def finite_vn_rank(a: FiniteAlgebraMatrix, ops: GroupOps, *,
                   elements: Optional[Sequence] = None,
                   cap: Optional[int] = None) -> RankValue:
    """Exact von Neumann rank rk(a) = rank of the regular representation / |Q|.

    With `elements` given, the representation is materialized over exactly
    that full element list.  Otherwise it is materialized over the subgroup
    generated by the support, which yields the same normalized value.
    """
    if a.rows == 0 or a.cols == 0:
        return Fraction(0)
    if elements is None:
        limit = memory_cap(cap)
        span = max(a.rows, a.cols)
        elements = subgroup_closure(ops, a.support(), max(1, limit // max(1, span)))
    else:
        elements = list(elements)
        limit = memory_cap(cap)
        if len(elements) * max(a.rows, a.cols) > limit:
            raise MemoryCapError(
                f"|Q| * max(r, s) = {len(elements) * max(a.rows, a.cols)} exceeds the cap ({limit})")
    mat = _regular_blocks(a, ops, elements)
    return Fraction(rank_exact(mat), len(elements))


def twisted_finite_rank(a: FiniteAlgebraMatrix, ops: GroupOps, elements: Sequence,
                        center: Sequence, chi: Mapping) -> RankValue:
    """Rank of `a` on the quotient of the group algebra by a central character.

    `center` lists a central subgroup Z of the group whose elements are
    `elements`; `chi` maps each z in Z to a root of unity in a's field.  The
    quotient algebra has a transversal of Q/Z as basis, with each z acting as
    the scalar chi(z); the returned value is rank / |Q/Z|.
    """
    field = a.field
    elements = list(elements)
    center = list(center)
    elem_set = set(elements)
    if ops.identity not in elem_set:
        raise StructuralError("element list must contain the identity")
    for z in center:
        if z not in elem_set:
            raise StructuralError("central subgroup must lie inside the element list")
        for g in elements:
            if ops.mul(z, g) != ops.mul(g, z):
                raise ValueError("designated subgroup is not central")
    chi_e = {}
    for z in center:
        v = chi[z]
        ve = v if isinstance(v, FieldElement) else field.from_rational(as_fraction(v))
        chi_e[z] = ve
    _check_character(ops, center, chi_e, field)
    # transversal and coset decomposition g = t * z
    transversal: list = []
    decomp: dict = {}
    for g in elements:
        if g in decomp:
            continue
        transversal.append(g)
        for z in center:
            decomp[ops.mul(g, z)] = (g, z)
    if len(transversal) * len(center) != len(elements):
        raise StructuralError("central subgroup does not evenly tile the element list")
    m = len(transversal)
    index = {t: k for k, t in enumerate(transversal)}
    zero = field.zero
    out_rows, out_cols = a.rows * m, a.cols * m
    flat = [zero] * (out_rows * out_cols)
    for i in range(a.rows):
        for j in range(a.cols):
            cell = a.entry(i, j)
            for t_idx, t in enumerate(transversal):
                col = j * m + t_idx
                for g, c in cell.items():
                    u = ops.mul(g, t)
                    t2, z = decomp[u]
                    row = i * m + index[t2]
                    flat[row * out_cols + col] = flat[row * out_cols + col] + c * chi_e[z]
    mat = ExactMatrix(field, out_rows, out_cols, tuple(flat))
    return Fraction(rank_exact(mat), m)


def _check_character(ops: GroupOps, center: Sequence, chi: Mapping, field: NumberField):
    one = field.one
    if chi[ops.identity] != one:
        raise ValueError("character must send the identity to 1")
    for z in center:
        for w in center:
            if chi[ops.mul(z, w)] != chi[z] * chi[w]:
                raise ValueError("character is not multiplicative on the central subgroup")


def characters_of_cyclic(ops: GroupOps, center: Sequence, zeta: FieldElement) -> list[dict]:
    """All characters of a cyclic central subgroup, given a primitive |Z|-th
    root of unity in the target field."""
    center = list(center)
    m = len(center)
    gen = None
    for cand in center:
        powers = [ops.identity]
        cur = cand
        while cur != ops.identity:
            powers.append(cur)
            cur = ops.mul(cur, cand)
            if len(powers) > m:
                break
        if len(powers) == m and set(powers) == set(center):
            gen = cand
            break
    if gen is None:
        raise StructuralError("central subgroup is not cyclic")
    field = zeta.field
    zpow = [field.one]
    for _ in range(m - 1):
        zpow.append(zpow[-1] * zeta)
    if m > 1 and (zpow[-1] * zeta) != field.one:
        raise ValueError("zeta is not an |Z|-th root of unity")
    for k in range(1, m):
        if zpow[k] == field.one:
            raise ValueError("zeta is not a primitive |Z|-th root of unity")
    chars = []
    for t in range(m):
        chi = {}
        cur = ops.identity
        for j in range(m):
            chi[cur] = zpow[(t * j) % m]
            cur = ops.mul(cur, gen)
        chars.append(chi)
    return chars


def cyclotomic_field(m: int) -> tuple[NumberField, FieldElement]:
    """(Q(zeta_m), zeta_m) for m >= 1; degree-1 cases return plain Q."""
    if m < 1:
        raise StructuralError("root-of-unity order must be positive")
    if m == 1:
        return QQ, QQ.one
    if m == 2:
        return QQ, QQ.from_rational(-1)
    poly = _cyclotomic_poly(m)
    field = NumberField(tuple(Fraction(c) for c in poly))
    return field, field.gen()


def _cyclotomic_poly(m: int) -> list[int]:
    # Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, exact integer division
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _intpoly_div(num, _cyclotomic_poly(d))
    return num


def _intpoly_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        coef = num[k + len(den) - 1] // den[-1]
        q[k] = coef
        for j, dj in enumerate(den):
            num[k + j] -= coef * dj
    if any(num):
        raise ArithmeticError("inexact cyclotomic division")
    return q


@dataclass(frozen=True)
class FiniteQuotientMap:
    """Quotient of a presented group onto a finite group, by generator images.

    Validated at construction: every relator maps to the identity.  `order`
    is the declared order of the full quotient (reporting only; ranks are
    normalized over the support subgroup, which gives the same value).
    """

    presentation: GroupPresentation
    ops: GroupOps
    gen_images: tuple
    order: Optional[int] = None
    name: str = ""

    @staticmethod
    def build(presentation: GroupPresentation, ops: GroupOps, gen_images: Sequence,
              order: Optional[int] = None, name: str = "") -> "FiniteQuotientMap":
        if len(gen_images) != presentation.num_generators:
            raise StructuralError("need one image per generator")
        q = FiniteQuotientMap(presentation, ops, tuple(gen_images), order, name)
        for k, rel in enumerate(presentation.relators):
            if q.word_image(rel) != ops.identity:
                raise ValueError(f"relator {k} is not killed by the quotient map")
        return q

    def word_image(self, w: Word):
        out = self.ops.identity
        for idx, exp in w.letters:
            g = self.gen_images[idx]
            out = self.ops.mul(out, g if exp == 1 else self.ops.inv(g))
        return out

    def push(self, a: GroupAlgebraMatrix) -> FiniteAlgebraMatrix:
        cells = []
        for i in range(a.rows):
            row = []
            for j in range(a.cols):
                cell: dict = {}
                for w, c in a.entry(i, j).terms:
                    g = self.word_image(w)
                    if g in cell:
                        s = cell[g] + c
                        if s:
                            cell[g] = s
                        else:
                            del cell[g]
                    else:
                        cell[g] = c
                row.append(cell)
            cells.append(row)
        return FiniteAlgebraMatrix.from_rows(a.field, cells)


def sylvester_rank(a: GroupAlgebraMatrix, rep: RepAssignment, lam: Sequence[int]) -> RankValue:
    """Representation rank: exact rank of the evaluated matrix divided by the
    weight module dimension.  Requires the relator-sign parity gate to pass
    (the weight must carry an honest action of the presented group)."""
    lam = rep.check_admissible(lam, central=False)
    if a.field != rep.field:
        raise StructuralError("matrix and representation live over different fields")
    d = weight_dim(lam)
    if a.rows == 0 or a.cols == 0:
        return Fraction(0)
    mat = evaluate(a, rep.weight_images(lam))
    return Fraction(rank_exact(mat), d)


def luck_rank(a: GroupAlgebraMatrix, q: FiniteQuotientMap, *,
              elements: Optional[Sequence] = None,
              cap: Optional[int] = None) -> RankValue:
    """Rank through a finite quotient: push the matrix forward, then take the
    exact finite von Neumann rank."""
    return finite_vn_rank(q.push(a), q.ops, elements=elements, cap=cap)


def luck_sequence(a: GroupAlgebraMatrix, chain: Sequence[FiniteQuotientMap], *,
                  cap: Optional[int] = None) -> list[RankValue]:
    """Per-level ranks along a chain of quotient maps (caller asserts that the
    chain is nested with shrinking kernels)."""
    return [luck_rank(a, q, cap=cap) for q in chain]


def cyclic_power_quotient(presentation: GroupPresentation, modulus: int,
                          name: str = "") -> FiniteQuotientMap:
    """Quotient sending generator i of a free-abelian-style presentation to
    the i-th unit vector of (Z/modulus)^g."""
    g = presentation.num_generators
    ops = AbelianTupleOps((modulus,) * g)
    images = []
    for i in range(g):
        vec = [0] * g
        vec[i] = 1 % modulus
        images.append(tuple(vec))
    return FiniteQuotientMap.build(presentation, ops, images,
                                   order=modulus ** g, name=name or f"(Z/{modulus})^{g}")
