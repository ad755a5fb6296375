"""Independent oracles for the test suite.

Nothing here shares code with the library's rank or representation paths:
ranks come from plain Gaussian elimination over Fractions or from modular
elimination, symmetric powers from sympy's symbolic expansion, slopes from
numpy.  These are the second route of every dual-route check.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import sympy as sp

from l2approx.exactalg import ExactMatrix, companion_embed


def gauss_rank(rows: list[list[Fraction]]) -> int:
    """Textbook Gaussian elimination over Q."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(rank + 1, nrows):
            if m[i][col]:
                f = m[i][col] / pr[col]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        rank += 1
        if rank == nrows:
            break
    return rank


def exact_matrix_rank_oracle(m: ExactMatrix) -> int:
    """Rank via companion embedding to Q followed by Gaussian elimination.

    For a degree-e field this returns the rank over Q of the embedded matrix
    divided by e, which equals the rank over Q(alpha).
    """
    e = m.field.degree
    q = companion_embed(m)
    rows = [[q.entry(i, j).coeffs[0] for j in range(q.cols)] for i in range(q.rows)]
    r = gauss_rank(rows)
    assert r % e == 0, "companion rank is not a multiple of the degree"
    return r // e


def rational_rows(m: ExactMatrix) -> list[list[Fraction]]:
    assert m.field.degree == 1
    return [[m.entry(i, j).coeffs[0] for j in range(m.cols)] for i in range(m.rows)]


def rank_mod_p(int_rows: list[list[int]], p: int) -> int:
    """Elimination over GF(p)."""
    m = [[x % p for x in row] for row in int_rows]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for i in range(rank + 1, nrows):
            if m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def clear_denominators(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // np.gcd(lcm, x.denominator)
        out.append([int(x * lcm) for x in row])
    return out


def sympy_sym_power(entries: list[list[Fraction]], lam: int) -> list[list[Fraction]]:
    """Symbolic binomial-expansion oracle: coefficients of the substitution
    action x -> a x + c y, y -> b x + d y on the monomials x^(lam-i) y^i."""
    a, b = sp.Rational(entries[0][0]), sp.Rational(entries[0][1])
    c, d = sp.Rational(entries[1][0]), sp.Rational(entries[1][1])
    X, Y = sp.symbols("X Y")
    n = lam + 1
    cols = []
    for j in range(n):
        img = sp.expand((a * X + c * Y) ** (lam - j) * (b * X + d * Y) ** j)
        poly = sp.Poly(img, X, Y)
        cols.append([Fraction(str(poly.coeff_monomial(X ** (lam - i) * Y ** i)))
                     for i in range(n)])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def loglog_slope_oracle(scales: list[int], errors: list[Fraction]) -> float:
    xs = np.log(np.array(scales, dtype=float))
    ys = np.log(np.array([float(e) for e in errors]))
    return float(np.polyfit(xs, ys, 1)[0])


def minpoly_reduce(coeffs: list[Fraction], minpoly: list[Fraction]) -> list[Fraction]:
    """Reduce a polynomial modulo a monic minimal polynomial (independent of
    the library's power-table reduction)."""
    coeffs = list(coeffs)
    d = len(minpoly) - 1
    for k in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[k]
        if c:
            for j in range(d + 1):
                coeffs[k - d + j] -= c * minpoly[j]
    out = coeffs[:d]
    return out + [Fraction(0)] * (d - len(out))
