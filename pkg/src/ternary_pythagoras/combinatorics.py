"""Hilbert functions of height-3 Gorenstein algebras from partition data.

Self-complementary fillings of a ``2k x (2d - 2k + 2)`` box classify the
Hilbert functions of Gorenstein quotients ``S/J`` of ``S = R[x1, x2, x3]``
with socle degree ``n = 2d`` and minimal generator degree ``k``.  Each
filling determines generator degrees ``Q`` and relation degrees ``P`` of a
free resolution

    0 -> S(-n-3) -> (+) S(-p_i) -> (+) S(-q_i) -> S -> S/J -> 0,

from which the Hilbert function follows by alternating sums.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import List, Sequence, Tuple


class MalformedDegrees(ValueError):
    """Generator and relation degree lists do not pair up."""


class NonGorensteinData(ValueError):
    """A computed Hilbert function violates symmetry or nonnegativity."""


def dim_forms(t: int) -> int:
    """Dimension of the space of ternary forms of degree ``t``."""
    return (t + 1) * (t + 2) // 2 if t >= 0 else 0


@dataclass(frozen=True)
class Partition:
    """A self-complementary filling: rows ``a_1 <= ... <= a_2k`` of width ``w``."""

    d: int
    k: int
    rows: Tuple[int, ...]

    def __post_init__(self):
        w = self.width
        if len(self.rows) != 2 * self.k:
            raise ValueError(f"expected {2 * self.k} rows, got {len(self.rows)}")
        if any(not 0 <= a <= w for a in self.rows):
            raise ValueError("row length outside the box")
        if any(x > y for x, y in zip(self.rows, self.rows[1:])):
            raise ValueError("rows must be nondecreasing")
        n = len(self.rows)
        if any(self.rows[i] != w - self.rows[n - 1 - i] for i in range(n)):
            raise ValueError("partition is not self-complementary")

    @property
    def width(self) -> int:
        return 2 * self.d - 2 * self.k + 2

    @property
    def unfilled(self) -> Tuple[int, ...]:
        return tuple(self.width - a for a in self.rows)


@dataclass(frozen=True)
class DegreeData:
    """Paired degrees of a Gorenstein resolution with socle ``n``.

    ``R`` is nonincreasing, ``Q = (n + 3 - R) / 2`` nondecreasing and
    ``P = (n + 3 + R) / 2`` nonincreasing.
    """

    socle: int
    k: int
    R: Tuple[int, ...]
    Q: Tuple[int, ...]
    P: Tuple[int, ...]
    minimal: bool = False

    def __post_init__(self):
        if not (len(self.Q) == len(self.P) == len(self.R)):
            raise MalformedDegrees("Q, P and R must have equal length")
        if len(self.Q) % 2 != 1:
            raise MalformedDegrees("the number of generators must be odd")
        for q, p, r in zip(self.Q, self.P, self.R):
            if q + p != self.socle + 3 or p - q != r or r % 2 == 0:
                raise MalformedDegrees(f"bad pairing q={q}, p={p}, r={r}")
        if self.k != min(self.Q) or self.Q[0] != self.k:
            raise MalformedDegrees("k must be the first and smallest generator degree")

    @classmethod
    def from_diagonal(cls, socle: int, R: Sequence[int], minimal: bool = False) -> "DegreeData":
        R = tuple(sorted(R, reverse=True))
        Q = tuple((socle + 3 - r) // 2 for r in R)
        P = tuple((socle + 3 + r) // 2 for r in R)
        return cls(socle, min(Q), R, Q, P, minimal)

    @property
    def d(self) -> int:
        return self.socle // 2

    def hilbert(self) -> "HilbertFunction":
        return hilbert_from_degrees(self.socle, self.Q, self.P)


@dataclass(frozen=True)
class HilbertFunction:
    socle: int
    values: Tuple[int, ...]

    def __getitem__(self, t: int) -> int:
        if 0 <= t <= self.socle:
            return self.values[t]
        return 0

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def initial_degree(self) -> int:
        """Smallest ``t`` with ``T_t < dim S_t``."""
        return next(t for t, v in enumerate(self.values) if v < dim_forms(t))

    def ideal_dim(self, t: int) -> int:
        return dim_forms(t) - self[t] if t <= self.socle else dim_forms(t)


def hilbert_from_degrees(n: int, Q: Sequence[int], P: Sequence[int]) -> HilbertFunction:
    if len(Q) != len(P):
        raise MalformedDegrees("generator and relation lists differ in length")
    if any(q + p != n + 3 for q, p in zip(sorted(Q), sorted(P, reverse=True))):
        raise MalformedDegrees("generator and relation degrees must pair to n + 3")
    values = tuple(
        dim_forms(t)
        - sum(dim_forms(t - q) for q in Q)
        + sum(dim_forms(t - p) for p in P)
        - dim_forms(t - n - 3)
        for t in range(n + 1)
    )
    if values[0] != 1 or values[n] != 1:
        raise NonGorensteinData(f"T_0 and T_n must be 1, got {values}")
    if any(v < 0 for v in values):
        raise NonGorensteinData(f"negative Hilbert function value in {values}")
    if values != values[::-1]:
        raise NonGorensteinData(f"Hilbert function {values} is not symmetric")
    return HilbertFunction(n, values)


def ideal_dim(n: int, Q: Sequence[int], P: Sequence[int], t: int) -> int:
    """Dimension of ``J_t``."""
    return hilbert_from_degrees(n, Q, P).ideal_dim(t)


def enumerate_partitions(d: int, k: int) -> List[Partition]:
    """All self-complementary partitions for ``(d, k)`` in lex order of rows.

    The first ``k`` rows are free in ``[0, d - k + 1]``; the rest are
    their complements.
    """
    if not 1 <= k <= d + 1:
        raise ValueError(f"k must lie in [1, {d + 1}]")
    w = 2 * d - 2 * k + 2
    out = []
    for half in combinations_with_replacement(range(d - k + 2), k):
        rows = half + tuple(w - a for a in reversed(half))
        out.append(Partition(d, k, rows))
    return out


def degrees_from_partition(p: Partition) -> DegreeData:
    """Full (non-minimal) degree data; ``r_1 = 2d + 3 - 2k`` so that ``q_1 = k``."""
    n = 2 * p.d
    R = (n + 3 - 2 * p.k,) + tuple(b - a + 1 for a, b in zip(p.rows, p.unfilled))
    return DegreeData.from_diagonal(n, R, minimal=False)


def minimalize(dd: DegreeData) -> DegreeData:
    """Cancel diagonal degrees ``v`` against ``-v`` as often as possible."""
    counts = Counter(dd.R)
    for v in [v for v in counts if v > 0]:
        c = min(counts[v], counts[-v])
        counts[v] -= c
        counts[-v] -= c
    R = [v for v, c in counts.items() for _ in range(c)]
    return DegreeData.from_diagonal(dd.socle, R, minimal=True)


@dataclass(frozen=True)
class Candidate:
    partition: Partition
    degrees: DegreeData
    hilbert: HilbertFunction
    full_degrees: DegreeData = field(repr=False, compare=False, default=None)


def enumerate_candidates(d: int) -> List[Candidate]:
    """Every Gorenstein Hilbert function of socle ``2d`` with its minimal degrees."""
    if d < 1:
        raise ValueError("d must be positive")
    out = []
    seen = {}
    for k in range(1, d + 2):
        for part in enumerate_partitions(d, k):
            full = degrees_from_partition(part)
            dmin = minimalize(full)
            T = dmin.hilbert()
            if T != full.hilbert():
                raise NonGorensteinData(f"minimalization changed the Hilbert function of {part}")
            if T.values in seen:
                raise NonGorensteinData(
                    f"partitions {seen[T.values]} and {part.rows} share a Hilbert function"
                )
            seen[T.values] = part.rows
            out.append(Candidate(part, dmin, T, full))
    return out
