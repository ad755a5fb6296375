"""Finitely presented groups, free-group words, and group-algebra matrices.

Group elements are freely reduced words; no word-problem solving happens
anywhere.  Equality of group elements is never needed by a rank computation,
only their images under a matrix representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .exactalg import (ExactMatrix, FieldElement, FieldMismatchError, NumberField,
                       StructuralError, as_fraction)

Letter = tuple[int, int]  # (generator index, exponent +1 or -1)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in the free group on indexed generators."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        for idx, exp in self.letters:
            if exp not in (1, -1):
                raise StructuralError("letter exponents must be +1 or -1")
            if idx < 0:
                raise StructuralError("negative generator index")
        for k in range(len(self.letters) - 1):
            (i, e), (j, f) = self.letters[k], self.letters[k + 1]
            if i == j and e == -f:
                raise StructuralError("word is not freely reduced")

    @property
    def length(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "Word") -> "Word":
        return free_reduce(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((i, -e) for i, e in reversed(self.letters)))

    def max_generator(self) -> int:
        return max((i for i, _ in self.letters), default=-1)

    def __repr__(self) -> str:
        if not self.letters:
            return "<1>"
        return "".join(f"x{i}" if e == 1 else f"x{i}^-1" for i, e in self.letters)


IDENTITY_WORD = Word(())


def free_reduce(letters: Iterable[Letter]) -> Word:
    """Freely reduce a raw letter sequence.  Idempotent."""
    stack: list[Letter] = []
    for idx, exp in letters:
        if exp not in (1, -1):
            raise StructuralError("letter exponents must be +1 or -1")
        if idx < 0:
            raise StructuralError("negative generator index")
        if stack and stack[-1][0] == idx and stack[-1][1] == -exp:
            stack.pop()
        else:
            stack.append((idx, exp))
    return Word(tuple(stack))


def word_from_string(text: str, generator_names: Sequence[str]) -> Word:
    """Parse a word in census letter notation: lowercase = generator,
    uppercase = its inverse.  Empty string is the identity."""
    index = {name: k for k, name in enumerate(generator_names)}
    letters: list[Letter] = []
    for ch in text.strip():
        low = ch.lower()
        if low not in index:
            raise StructuralError(f"unknown generator letter {ch!r}")
        letters.append((index[low], 1 if ch.islower() else -1))
    return free_reduce(letters)


def word_to_string(w: Word, generator_names: Sequence[str]) -> str:
    out = []
    for i, e in w.letters:
        name = generator_names[i]
        out.append(name if e == 1 else name.upper())
    return "".join(out)


@dataclass(frozen=True)
class GroupPresentation:
    """Finitely presented group: generators by name, relators as reduced words.

    `central_involution` optionally names one generator that is a designated
    central element of order two (used by the parity admissibility gate).
    """

    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]
    central_involution: Optional[int] = None

    def __post_init__(self):
        if len(set(self.generator_names)) != len(self.generator_names):
            raise StructuralError("generator names must be distinct")
        for name in self.generator_names:
            if not name or not name.isalpha() or not name.islower():
                raise StructuralError(f"generator name {name!r} must be a lowercase letter string")
        g = len(self.generator_names)
        for r in self.relators:
            if r.max_generator() >= g:
                raise StructuralError("relator references an unknown generator")
        if self.central_involution is not None and not (0 <= self.central_involution < g):
            raise StructuralError("central involution index out of range")

    @property
    def num_generators(self) -> int:
        return len(self.generator_names)

    @property
    def num_relators(self) -> int:
        return len(self.relators)


@dataclass(frozen=True)
class GroupAlgebraElement:
    """Finite formal sum of words with coefficients in one number field."""

    field: NumberField
    terms: tuple[tuple[Word, FieldElement], ...]  # sorted, no zero coefficients

    @staticmethod
    def from_dict(field: NumberField, terms: Mapping[Word, Union[int, Fraction, FieldElement]]) -> "GroupAlgebraElement":
        clean = {}
        for w, c in terms.items():
            ce = c if isinstance(c, FieldElement) else field.from_rational(as_fraction(c))
            if ce.field != field:
                raise FieldMismatchError("coefficient from a different field")
            if ce:
                clean[w] = clean[w] + ce if w in clean else ce
                if not clean[w]:
                    del clean[w]
        ordered = sorted(clean.items(), key=lambda t: (t[0].length, t[0].letters))
        return GroupAlgebraElement(field, tuple(ordered))

    @staticmethod
    def zero(field: NumberField) -> "GroupAlgebraElement":
        return GroupAlgebraElement(field, ())

    @staticmethod
    def scalar(field: NumberField, c: Union[int, Fraction, FieldElement]) -> "GroupAlgebraElement":
        return GroupAlgebraElement.from_dict(field, {IDENTITY_WORD: c})

    @staticmethod
    def of_word(field: NumberField, w: Word, c: Union[int, Fraction, FieldElement] = 1) -> "GroupAlgebraElement":
        return GroupAlgebraElement.from_dict(field, {w: c})

    def as_dict(self) -> dict[Word, FieldElement]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def support(self) -> tuple[Word, ...]:
        return tuple(w for w, _ in self.terms)

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if self.field != other.field:
            raise FieldMismatchError("sum over different fields")
        acc = dict(self.terms)
        for w, c in other.terms:
            if w in acc:
                s = acc[w] + c
                if s:
                    acc[w] = s
                else:
                    del acc[w]
            else:
                acc[w] = c
        return GroupAlgebraElement.from_dict(self.field, acc)

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.field, tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-other)

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if self.field != other.field:
            raise FieldMismatchError("product over different fields")
        acc: dict[Word, FieldElement] = {}
        for w1, c1 in self.terms:
            for w2, c2 in other.terms:
                w = w1 * w2
                c = c1 * c2
                if w in acc:
                    s = acc[w] + c
                    if s:
                        acc[w] = s
                    else:
                        del acc[w]
                elif c:
                    acc[w] = c
        return GroupAlgebraElement.from_dict(self.field, acc)

    def word_mul_left(self, w: Word) -> "GroupAlgebraElement":
        return GroupAlgebraElement.from_dict(self.field, {w * u: c for u, c in self.terms})

    def scalar_mul(self, c: Union[int, Fraction, FieldElement]) -> "GroupAlgebraElement":
        ce = c if isinstance(c, FieldElement) else self.field.from_rational(as_fraction(c))
        return GroupAlgebraElement.from_dict(self.field, {w: a * ce for w, a in self.terms})

    def star(self) -> "GroupAlgebraElement":
        """Formal adjoint: invert every word, keep coefficients."""
        return GroupAlgebraElement.from_dict(self.field, {w.inverse(): c for w, c in self.terms})


@dataclass(frozen=True)
class GroupAlgebraMatrix:
    field: NumberField
    rows: int
    cols: int
    entries: tuple[GroupAlgebraElement, ...]  # row-major

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise StructuralError("entry count does not match shape")
        for e in self.entries:
            if e.field != self.field:
                raise FieldMismatchError("matrix entries over inconsistent fields")

    @staticmethod
    def from_rows(field: NumberField, rows: Sequence[Sequence[GroupAlgebraElement]]) -> "GroupAlgebraMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise StructuralError("ragged rows")
            flat.extend(row)
        return GroupAlgebraMatrix(field, r, c, tuple(flat))

    @staticmethod
    def single(elem: GroupAlgebraElement) -> "GroupAlgebraMatrix":
        return GroupAlgebraMatrix(elem.field, 1, 1, (elem,))

    def entry(self, i: int, j: int) -> GroupAlgebraElement:
        return self.entries[i * self.cols + j]

    def __mul__(self, other: "GroupAlgebraMatrix") -> "GroupAlgebraMatrix":
        if self.field != other.field:
            raise FieldMismatchError("matrix product over different fields")
        if self.cols != other.rows:
            raise StructuralError("inner dimensions do not match")
        z = GroupAlgebraElement.zero(self.field)
        flat = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    a = self.entry(i, k)
                    if a:
                        b = other.entry(k, j)
                        if b:
                            acc = acc + a * b
                flat.append(acc)
        return GroupAlgebraMatrix(self.field, self.rows, other.cols, tuple(flat))

    def star(self) -> "GroupAlgebraMatrix":
        """Transpose with every word inverted (formal adjoint)."""
        flat = tuple(self.entry(i, j).star() for j in range(self.cols) for i in range(self.rows))
        return GroupAlgebraMatrix(self.field, self.cols, self.rows, flat)

    def support(self) -> tuple[Word, ...]:
        seen: dict[Word, None] = {}
        for e in self.entries:
            for w in e.support():
                seen.setdefault(w, None)
        return tuple(seen)


def ga_block_diag(a: GroupAlgebraMatrix, b: GroupAlgebraMatrix) -> GroupAlgebraMatrix:
    if a.field != b.field:
        raise FieldMismatchError("block sum over different fields")
    z = GroupAlgebraElement.zero(a.field)
    rows = []
    for i in range(a.rows):
        rows.append([a.entry(i, j) for j in range(a.cols)] + [z] * b.cols)
    for i in range(b.rows):
        rows.append([z] * a.cols + [b.entry(i, j) for j in range(b.cols)])
    return GroupAlgebraMatrix.from_rows(a.field, rows)


def ga_block_triangular(a: GroupAlgebraMatrix, c: GroupAlgebraMatrix, b: GroupAlgebraMatrix) -> GroupAlgebraMatrix:
    """Assemble [[A, C], [0, B]]; C must be a.rows x b.cols."""
    if not (a.field == b.field == c.field):
        raise FieldMismatchError("block assembly over different fields")
    if c.rows != a.rows or c.cols != b.cols:
        raise StructuralError("corner block has incompatible shape")
    z = GroupAlgebraElement.zero(a.field)
    rows = []
    for i in range(a.rows):
        rows.append([a.entry(i, j) for j in range(a.cols)] + [c.entry(i, j) for j in range(c.cols)])
    for i in range(b.rows):
        rows.append([z] * a.cols + [b.entry(i, j) for j in range(b.cols)])
    return GroupAlgebraMatrix.from_rows(a.field, rows)


class _ImageCache:
    """Word-image evaluator for a fixed tuple of generator images."""

    def __init__(self, images: Sequence[ExactMatrix]):
        if not images:
            raise StructuralError("at least one generator image required")
        self.field = images[0].field
        d = images[0].rows
        for m in images:
            if m.field != self.field:
                raise FieldMismatchError("generator images over different fields")
            if m.rows != m.cols or m.rows != d:
                raise StructuralError("generator images must be square of equal size")
        self.dim = d
        self.images = list(images)
        self._inverses: dict[int, ExactMatrix] = {}
        self._cache: dict[Word, ExactMatrix] = {IDENTITY_WORD: ExactMatrix.identity(self.field, d)}

    def _gen_image(self, idx: int, exp: int) -> ExactMatrix:
        if idx >= len(self.images):
            raise StructuralError("word references a generator with no declared image")
        if exp == 1:
            return self.images[idx]
        if idx not in self._inverses:
            try:
                self._inverses[idx] = self.images[idx].inverse()
            except Exception as e:
                raise StructuralError(f"generator image {idx} is not invertible") from e
        return self._inverses[idx]

    def word(self, w: Word) -> ExactMatrix:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        # extend the longest cached prefix (prefixes of reduced words are reduced)
        letters = w.letters
        out = self._cache[IDENTITY_WORD]
        done = 0
        for k in range(len(letters) - 1, 0, -1):
            cached = self._cache.get(Word(letters[:k]))
            if cached is not None:
                out = cached
                done = k
                break
        for k in range(done, len(letters)):
            idx, exp = letters[k]
            out = out * self._gen_image(idx, exp)
            self._cache[Word(letters[: k + 1])] = out
        return out


def evaluate(x: Union[GroupAlgebraElement, GroupAlgebraMatrix],
             images: Sequence[ExactMatrix]) -> ExactMatrix:
    """Extend generator images to a ring homomorphism on the group algebra.

    For a matrix input, returns the (rows*d) x (cols*d) block matrix where d
    is the common size of the generator images.  Images must be invertible
    square matrices over the element's field.
    """
    cache = _ImageCache(images)
    if isinstance(x, GroupAlgebraElement):
        return _evaluate_element(x, cache)
    if isinstance(x, GroupAlgebraMatrix):
        if x.field != cache.field:
            raise FieldMismatchError("matrix field differs from image field")
        d = cache.dim
        blocks = [[_evaluate_element(x.entry(i, j), cache) for j in range(x.cols)]
                  for i in range(x.rows)]
        flat = []
        for i in range(x.rows):
            for bi in range(d):
                for j in range(x.cols):
                    blk = blocks[i][j]
                    flat.extend(blk.entries[bi * d:(bi + 1) * d])
        return ExactMatrix(cache.field, x.rows * d, x.cols * d, tuple(flat))
    raise StructuralError(f"cannot evaluate object of type {type(x).__name__}")


def _evaluate_element(x: GroupAlgebraElement, cache: _ImageCache) -> ExactMatrix:
    if x.field != cache.field:
        raise FieldMismatchError("element field differs from image field")
    d = cache.dim
    out = ExactMatrix.zeros(cache.field, d, d)
    for w, c in x.terms:
        out = out + cache.word(w).scalar_mul(c)
    return out
