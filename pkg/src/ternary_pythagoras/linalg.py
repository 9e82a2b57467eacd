"""Exact linear algebra over Z, Q and prime fields.

Matrices are lists of rows.  Integer rank and echelon forms use
fraction-free (Bareiss) elimination on Python integers; kernels and
solutions over Q use Gauss-Jordan elimination on ``Fraction`` entries.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

# Primes just below 2**31, used for modular rank cross-checks.
LARGE_PRIMES = (
    2147483647,
    2147483629,
    2147483587,
    2147483579,
    2147483563,
    2147483549,
    2147483543,
    2147483497,
    2147483489,
    2147483477,
)

SMALL_PRIME = 32003


def integer_rows(rows: Sequence[Sequence]) -> List[List[int]]:
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
            elif not isinstance(x, int):
                raise TypeError(f"non-rational matrix entry {x!r}")
        out.append([int(x * den) for x in row])
    return out


def bareiss_echelon(rows: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[int]]:
    """Fraction-free row echelon form of an integer matrix.

    Returns the nonzero echelon rows and their pivot columns.  The pivot in
    each column is the entry of smallest absolute value, which keeps the
    intermediate minors small on sparse inputs.
    """
    a = [[mpz(x) for x in r] for r in rows]
    n = len(a)
    m = len(a[0]) if a else 0
    prev = mpz(1)
    rank = 0
    pivots: List[int] = []
    for c in range(m):
        if rank == n:
            break
        best = None
        best_abs = 0
        for i in range(rank, n):
            v = a[i][c]
            if v and (best is None or abs(v) < best_abs):
                best, best_abs = i, abs(v)
        if best is None:
            continue
        a[rank], a[best] = a[best], a[rank]
        pr = a[rank]
        p = pr[c]
        for i in range(rank + 1, n):
            ri = a[i]
            f = ri[c]
            if f:
                a[i] = ri[:c] + [(p * ri[j] - f * pr[j]) // prev for j in range(c, m)]
            elif p != prev:
                a[i] = ri[:c] + [(p * ri[j]) // prev for j in range(c, m)]
        prev = p
        pivots.append(c)
        rank += 1
    return [[int(x) for x in r] for r in a[:rank]], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(bareiss_echelon(integer_rows(rows))[1])


def rank_mod_p(rows: Sequence[Sequence], p: int) -> int:
    """Rank over the prime field F_p of an integer or rational matrix.

    Uses int64 arrays, so ``p`` must stay below ``2**31`` for products to fit.
    """
    if not rows:
        return 0
    if p >= 2**31:
        raise ValueError("prime too large for int64 elimination")
    a = np.array([[x % p for x in row] for row in integer_rows(rows)], dtype=np.int64)
    n, m = a.shape
    r = 0
    for c in range(m):
        if r == n:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        below = a[r + 1:, c].copy()
        if below.any():
            a[r + 1:] = (a[r + 1:] - np.outer(below, a[r])) % p
        r += 1
    return r


def rref(rows: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    m = len(a[0]) if a else 0
    pivots: List[int] = []
    r = 0
    for c in range(m):
        if r == n:
            break
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        pr = a[r]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                ri = a[i]
                a[i] = [ri[j] - f * pr[j] for j in range(m)]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of the right kernel ``{v : A v = 0}`` over Q.

    One vector per free column, with a 1 in that column and zeros in the
    other free columns.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    ech, pivots = bareiss_echelon(integer_rows(rows))
    pivot_set = set(pivots)
    basis = []
    for fc in (c for c in range(ncols) if c not in pivot_set):
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(reversed(ech), reversed(pivots)):
            acc = sum((row[j] * v[j] for j in range(pc + 1, ncols) if row[j] and v[j]), Fraction(0))
            v[pc] = -acc / row[pc]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """One solution of ``A x = b`` over Q, or ``None`` if inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix (Bareiss)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    den = 1
    for row in rows:
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
    a = [[int(Fraction(x) * den) for x in row] for row in rows]
    sign = 1
    prev = 1
    for c in range(n - 1):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (p * a[i][j] - a[i][c] * a[c][j]) // prev
            a[i][c] = 0
        prev = p
    return Fraction(sign * a[n - 1][n - 1], den**n)
