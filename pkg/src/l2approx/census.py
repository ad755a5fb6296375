"""Shipped example groups with validated representations, and ingestion of
user-supplied presentation/representation files.

File formats (exact grammar; parsing is byte-deterministic, `#` starts a
comment line, blank lines are ignored):

Presentation file::

    name: figure-eight
    generators: a b
    relator: aBAbabABab          # uppercase letters are inverses; repeatable
    central-involution: g        # optional, must be a generator name
    aspherical: true             # optional, default false
    cusps: 1                     # optional manifold metadata
    euler: 0                     # optional manifold metadata
    targets: 0 0 0               # optional known (b0, b1, b2), rationals
    provenance: free text        # optional

Representation file::

    field: 1 -1 1                # minpoly coefficients, constant first, monic
    factors: 1                   # number of SL2 factors (default 1)
    image: a 1 : 1 ; 1 ; 0 ; 1   # generator, factor index (1-based), then the
                                 # four entries a;b;c;d, each a comma-separated
                                 # rational coefficient vector in the power
                                 # basis (missing high coefficients are zero)

Validation on load: relators freely reduce, every generator image has
determinant exactly 1, every relator evaluates to +-Identity per factor, all
entries lie in the declared field, and the minimal polynomial passes an
irreducibility certification (rational-root test in low degree, factor degree
patterns modulo several primes otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, Union

from .exactalg import ExactMatrix, NumberField
from .groupcore import GroupPresentation, word_from_string
from .repweights import RepAssignment, validate_weight

_BUILTIN_FILES = {
    "figure-eight": "figure_eight",
    "whitehead": "whitehead",
    "sanov-f2": "sanov_f2",
    "z-unipotent": "z_unipotent",
    "c2-central": "c2_central",
    "z2-lattice": "z2_lattice",
}


class CensusFormatError(ValueError):
    """Malformed presentation or representation file."""


@dataclass(frozen=True)
class CensusEntry:
    name: str
    presentation: GroupPresentation
    rep: RepAssignment
    field: NumberField
    aspherical: bool
    targets: Optional[tuple[Fraction, Fraction, Fraction]]  # known (b0, b1, b2)
    cusps: Optional[int]
    euler: Optional[int]
    provenance: str

    def expected_dims(self, lam: Sequence[int]) -> Optional[tuple[int, int, int]]:
        """Closed-form homology dimensions for cusped-manifold entries with
        every weight even: (0, k - (min dim) * euler, k).  None when the
        entry carries no manifold metadata or some weight is odd."""
        lam = validate_weight(lam)
        if self.cusps is None or self.euler is None:
            return None
        if any(l % 2 for l in lam):
            return None
        d = math.prod(l + 1 for l in lam)
        return (0, self.cusps - d * self.euler, self.cusps)


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _key_value(line: str, path: str) -> tuple[str, str]:
    if ":" not in line:
        raise CensusFormatError(f"{path}: expected 'key: value', got {line!r}")
    key, value = line.split(":", 1)
    return key.strip(), value.strip()


def parse_presentation(text: str, path: str = "<presentation>") -> dict:
    """Parse a presentation file into a metadata dict (relators still raw)."""
    meta = {"name": None, "generators": None, "relators": [], "central": None,
            "aspherical": False, "cusps": None, "euler": None, "targets": None,
            "provenance": ""}
    for line in _content_lines(text):
        key, value = _key_value(line, path)
        if key == "name":
            meta["name"] = value
        elif key == "generators":
            names = tuple(value.split())
            if not names:
                raise CensusFormatError(f"{path}: empty generator list")
            for n in names:
                # relators are parsed per character with uppercase = inverse
                if len(n) != 1 or not n.isalpha() or not n.islower():
                    raise CensusFormatError(
                        f"{path}: generator {n!r} must be a single lowercase letter")
            meta["generators"] = names
        elif key == "relator":
            meta["relators"].append(value)
        elif key == "central-involution":
            meta["central"] = value
        elif key == "aspherical":
            if value not in ("true", "false"):
                raise CensusFormatError(f"{path}: aspherical must be true or false")
            meta["aspherical"] = value == "true"
        elif key == "cusps":
            meta["cusps"] = int(value)
        elif key == "euler":
            meta["euler"] = int(value)
        elif key == "targets":
            parts = value.split()
            if len(parts) != 3:
                raise CensusFormatError(f"{path}: targets needs three rationals")
            meta["targets"] = tuple(Fraction(p) for p in parts)
        elif key == "provenance":
            meta["provenance"] = value
        else:
            raise CensusFormatError(f"{path}: unknown key {key!r}")
    if meta["generators"] is None:
        raise CensusFormatError(f"{path}: missing generators line")
    return meta


def build_presentation(meta: dict, path: str = "<presentation>") -> GroupPresentation:
    names = meta["generators"]
    relators = tuple(word_from_string(r, names) for r in meta["relators"])
    central = None
    if meta["central"] is not None:
        if meta["central"] not in names:
            raise CensusFormatError(f"{path}: central involution {meta['central']!r} is not a generator")
        central = names.index(meta["central"])
    return GroupPresentation(names, relators, central)


def parse_representation(text: str, generator_names: Sequence[str],
                         path: str = "<representation>") -> tuple[NumberField, list[list[ExactMatrix]]]:
    field: Optional[NumberField] = None
    factors = 1
    images: dict[tuple[str, int], ExactMatrix] = {}
    for line in _content_lines(text):
        key, value = _key_value(line, path)
        if key == "field":
            coeffs = tuple(Fraction(p) for p in value.split())
            field = NumberField(coeffs)
            _certify_irreducible(field.minpoly, path)
        elif key == "factors":
            factors = int(value)
            if factors < 1:
                raise CensusFormatError(f"{path}: factors must be >= 1")
        elif key == "image":
            if field is None:
                raise CensusFormatError(f"{path}: image line before field line")
            head, _, body = value.partition(":")
            parts = head.split()
            if len(parts) != 2:
                raise CensusFormatError(f"{path}: image head must be '<generator> <factor>'")
            gen, fj = parts[0], int(parts[1])
            if gen not in generator_names:
                raise CensusFormatError(f"{path}: image for unknown generator {gen!r}")
            cells = [c.strip() for c in body.split(";")]
            if len(cells) != 4:
                raise CensusFormatError(f"{path}: image needs exactly four entries a;b;c;d")
            vals = []
            for cell in cells:
                coeffs = [Fraction(c.strip()) for c in cell.split(",")] if cell else [Fraction(0)]
                vals.append(field.element(coeffs))
            images[(gen, fj)] = ExactMatrix.from_rows(field, [[vals[0], vals[1]], [vals[2], vals[3]]])
        else:
            raise CensusFormatError(f"{path}: unknown key {key!r}")
    if field is None:
        raise CensusFormatError(f"{path}: missing field line")
    table: list[list[ExactMatrix]] = []
    for gen in generator_names:
        row = []
        for fj in range(1, factors + 1):
            if (gen, fj) not in images:
                raise CensusFormatError(f"{path}: missing image for generator {gen!r} factor {fj}")
            row.append(images[(gen, fj)])
        table.append(row)
    return field, table


def load_entry(presentation_path: Union[str, Path], representation_path: Union[str, Path],
               name: Optional[str] = None) -> CensusEntry:
    """Load and validate a presentation/representation file pair."""
    pres_text = Path(presentation_path).read_text()
    rep_text = Path(representation_path).read_text()
    return load_entry_text(pres_text, rep_text, name=name,
                           pres_path=str(presentation_path), rep_path=str(representation_path))


def load_entry_text(pres_text: str, rep_text: str, name: Optional[str] = None,
                    pres_path: str = "<presentation>", rep_path: str = "<representation>") -> CensusEntry:
    meta = parse_presentation(pres_text, pres_path)
    presentation = build_presentation(meta, pres_path)
    field, images = parse_representation(rep_text, presentation.generator_names, rep_path)
    rep = RepAssignment.build(presentation, images)
    entry_name = name or meta["name"]
    if not entry_name:
        raise CensusFormatError(f"{pres_path}: entry has no name")
    return CensusEntry(entry_name, presentation, rep, field, meta["aspherical"],
                       meta["targets"], meta["cusps"], meta["euler"], meta["provenance"])


def _builtin_text(stem: str, suffix: str) -> str:
    return resources.files("l2approx.data").joinpath(f"{stem}.{suffix}").read_text()


def builtin_entry(name: str) -> CensusEntry:
    if name not in _BUILTIN_FILES:
        raise KeyError(f"unknown builtin entry {name!r}; available: {', '.join(sorted(_BUILTIN_FILES))}")
    stem = _BUILTIN_FILES[name]
    return load_entry_text(_builtin_text(stem, "pres"), _builtin_text(stem, "rep"),
                           pres_path=f"{stem}.pres", rep_path=f"{stem}.rep")


def builtin_catalog() -> list[CensusEntry]:
    """All shipped entries, each validated on load."""
    return [builtin_entry(name) for name in _BUILTIN_FILES]


# ---------------------------------------------------------------------------
# minimal polynomial irreducibility certification
# ---------------------------------------------------------------------------

_CERT_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _certify_irreducible(minpoly: Sequence[Fraction], path: str) -> None:
    deg = len(minpoly) - 1
    if deg == 1:
        return
    den = math.lcm(*(c.denominator for c in minpoly))
    ipoly = [int(c * den) for c in minpoly]
    g = math.gcd(*(abs(c) for c in ipoly))
    if g > 1:
        ipoly = [c // g for c in ipoly]
    if _has_rational_root(ipoly):
        raise CensusFormatError(f"{path}: reducible minpoly (rational root found)")
    if deg <= 3:
        return  # no rational root settles degree 2 and 3
    possible = set(range(1, deg))
    for p in _CERT_PRIMES:
        degrees = _factor_degrees_mod_p(ipoly, p)
        if degrees is None:
            continue
        sums = _subset_sums(degrees)
        possible &= sums
        if not possible:
            return
    raise CensusFormatError(
        f"{path}: could not certify the minpoly irreducible modulo {_CERT_PRIMES}")


def _has_rational_root(ipoly: list[int]) -> bool:
    if ipoly[0] == 0:
        return True  # x divides
    for pn in _divisors(abs(ipoly[0])):
        for qd in _divisors(abs(ipoly[-1])):
            for num in (pn, -pn):
                # evaluate at num/qd exactly
                val = Fraction(0)
                x = Fraction(num, qd)
                for c in reversed(ipoly):
                    val = val * x + c
                if val == 0:
                    return True
    return False


def _divisors(n: int) -> list[int]:
    out = []
    k = 1
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            if k != n // k:
                out.append(n // k)
        k += 1
    return sorted(out)


def _subset_sums(degrees: list[int]) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _factor_degrees_mod_p(ipoly: list[int], p: int) -> Optional[list[int]]:
    """Degrees of the irreducible factors of the polynomial mod p, or None if
    this prime is unusable (divides the leading coefficient, or the reduction
    is not squarefree)."""
    f = [c % p for c in ipoly]
    while f and f[-1] == 0:
        f.pop()
    if len(f) != len(ipoly):
        return None  # leading coefficient vanished
    inv_lead = pow(f[-1], -1, p)
    f = [c * inv_lead % p for c in f]
    fp = [(k * c) % p for k, c in enumerate(f)][1:]
    if _pgcd(f, fp, p) != [1]:
        return None  # not squarefree mod p
    degrees = []
    fcur = f
    h = [0, 1]  # the polynomial x
    k = 0
    while len(fcur) - 1 >= 1:
        k += 1
        if 2 * k > len(fcur) - 1:
            degrees.append(len(fcur) - 1)
            break
        h = _ppowmod(h, p, fcur, p)
        g = _pgcd(_psub(h, [0, 1], p), fcur, p)
        if len(g) > 1:
            degrees.extend([k] * ((len(g) - 1) // k))
            fcur = _pdiv(fcur, g, p)
            h = _pmod(h, fcur, p)
    return degrees


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    inv = pow(m[-1], -1, p)
    for k in range(len(a) - len(m), -1, -1):
        c = a[k + len(m) - 1] * inv % p
        if c:
            for j, mj in enumerate(m):
                a[k + j] = (a[k + j] - c * mj) % p
    while a and a[-1] == 0:
        a.pop()
    return a or [0]


def _pdiv(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] * inv % p
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] = (a[k + j] - c * bj) % p
    return q


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _ppowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    out = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            out = _pmulmod(out, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return out


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, ai in enumerate(a):
        out[i] = ai % p
    for i, bi in enumerate(b):
        out[i] = (out[i] - bi) % p
    while out and out[-1] == 0:
        out.pop()
    return out or [0]


def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a or [0]


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _ptrim([c % p for c in a])
    b = _ptrim([c % p for c in b])
    while b != [0]:
        a, b = b, _pmod(a, b, p)
    if a == [0]:
        return [0]
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]
