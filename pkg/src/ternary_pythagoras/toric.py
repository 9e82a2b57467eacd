"""Stacked-triangle polytopes and the toric varieties that bound lengths.

For generator degrees ``q_1 <= ... <= q_s`` and target degree ``d``, each
generator with ``q_i < d`` contributes the triangle ``T_{d - q_i}`` placed
at the vertex ``e_{i-1}`` of a simplex (``e_0 = 0``).  Generators of degree
exactly ``d`` are cone points of the associated variety.  All arithmetic
here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .combinatorics import dim_forms
from .forms import monomials
from .linalg import solve

MINIMAL = "minimal"
ALMOST_MINIMAL_ACM = "almost-minimal-aCM"
OTHER = "other"

ASSUMPTIONS = (
    "aCM certified through IDP (normal semigroup ring)",
    "cones over aCM varieties taken as aCM; coning keeps degree and codimension",
)


class NoLowDegreeGenerators(ValueError):
    """No generator has degree below ``d``; the variety is a pure cone."""


class InterpolationMismatch(RuntimeError):
    """The interpolated Ehrhart polynomial disagrees with a direct count."""


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Tuples of ``parts`` nonnegative integers with sum at most ``total``."""
    if parts == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class StackedPolytope:
    sizes: Tuple[int, ...]
    cone_count: int = 0
    omega: Tuple[Tuple[int, int, int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        if not self.sizes or min(self.sizes) < 1:
            raise ValueError("triangle sizes must be positive")
        if list(self.sizes) != sorted(self.sizes, reverse=True):
            raise ValueError("triangle sizes must be nonincreasing")
        om = tuple(
            (i + 1, j, k) for i, m in enumerate(self.sizes) for (j, k, _) in monomials(m)
        )
        object.__setattr__(self, "omega", om)

    @property
    def dim(self) -> int:
        """Lattice (and polytope) dimension ``s' + 1``."""
        return len(self.sizes) + 1

    def lattice_point(self, w: Tuple[int, int, int]) -> Tuple[int, ...]:
        i, j, k = w
        e = [0] * (len(self.sizes) - 1)
        if i > 1:
            e[i - 2] = 1
        return (j, k, *e)

    @property
    def points(self) -> List[Tuple[int, ...]]:
        return [self.lattice_point(w) for w in self.omega]

    @property
    def vertices(self) -> List[Tuple[int, ...]]:
        out = []
        for i, m in enumerate(self.sizes):
            for j, k in ((0, 0), (m, 0), (0, m)):
                out.append(self.lattice_point((i + 1, j, k)))
        return out

    def contains(self, point: Sequence, t: int = 1) -> bool:
        """Membership in ``tK`` via its inequality description."""
        x, y, *z = point
        m1 = self.sizes[0]
        if x < 0 or y < 0 or any(v < 0 for v in z) or sum(z) > t:
            return False
        cap = t * m1 + sum((self.sizes[j + 1] - m1) * zj for j, zj in enumerate(z))
        return x + y <= cap

    def _layer_sizes(self, t: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
        m1 = self.sizes[0]
        for z in _compositions(t, len(self.sizes) - 1):
            yield z, t * m1 + sum((self.sizes[j + 1] - m1) * zj for j, zj in enumerate(z))

    def dilate_points(self, t: int) -> List[Tuple[int, ...]]:
        out = []
        for z, M in self._layer_sizes(t):
            for x in range(M + 1):
                for y in range(M - x + 1):
                    out.append((x, y, *z))
        return out


def build_polytope(d: int, Q: Sequence[int]) -> StackedPolytope:
    sizes = tuple(sorted((d - q for q in Q if q < d), reverse=True))
    cones = sum(1 for q in Q if q == d)
    if not sizes:
        raise NoLowDegreeGenerators(f"no generator of degree below {d} in {tuple(Q)}")
    return StackedPolytope(sizes, cones)


def dilate_count(p: StackedPolytope, t: int) -> int:
    if t < 0:
        raise ValueError("dilation factor must be nonnegative")
    return sum(dim_forms(M) for _, M in p._layer_sizes(t))


def ehrhart(p: StackedPolytope) -> List[Fraction]:
    """Coefficients ``c_0, ..., c_D`` of the Ehrhart polynomial."""
    D = p.dim
    nodes = range(D + 1)
    vander = [[t**e for e in range(D + 1)] for t in nodes]
    coeffs = solve(vander, [dilate_count(p, t) for t in nodes])
    for t in (D + 1, D + 2):
        value = sum(c * t**e for e, c in enumerate(coeffs))
        if value != dilate_count(p, t):
            raise InterpolationMismatch(f"Ehrhart polynomial gives {value} at t={t}")
    return coeffs


def normalized_volume(p: StackedPolytope) -> int:
    vol = ehrhart(p)[-1] * factorial(p.dim)
    if vol.denominator != 1 or vol <= 0:
        raise InterpolationMismatch(f"normalized volume {vol} is not a positive integer")
    return int(vol)


def idp_check(p: StackedPolytope) -> bool:
    """Whether ``tK`` points are sums of ``K`` and ``(t-1)K`` points, ``t <= D+1``."""
    base = p.points
    prev = set(base)
    ok = True
    for t in range(2, p.dim + 2):
        current = set(p.dilate_points(t))
        sums = {tuple(a + b for a, b in zip(u, v)) for u in base for v in prev}
        if not sums <= current:
            raise AssertionError(f"Minkowski sum escapes {t}K")
        if sums != current:
            ok = False
        prev = current
    return ok


@dataclass(frozen=True)
class ToricSummary:
    point_count: int
    base_dim: int
    base_codim: int
    degree: int
    idp: bool
    cone_count: int
    classification: str
    py_bound: Optional[int]
    ehrhart: Tuple[Fraction, ...] = ()
    notes: Tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return self.base_dim + self.cone_count

    @property
    def codim(self) -> int:
        return self.base_codim

    def to_dict(self) -> Dict:
        return {
            "points": self.point_count,
            "baseDim": self.base_dim,
            "cones": self.cone_count,
            "dim": self.dim,
            "codim": self.codim,
            "degree": self.degree,
            "idp": self.idp,
            "classification": self.classification,
            "pyBound": self.py_bound,
            "ehrhart": [{"num": c.numerator, "den": c.denominator} for c in self.ehrhart],
            "assumptions": list(ASSUMPTIONS),
            "notes": list(self.notes),
        }


def classify(p: StackedPolytope) -> ToricSummary:
    r = len(p.omega)
    D = p.dim
    C = r - 1 - D
    coeffs = ehrhart(p)
    g = normalized_volume(p)
    idp = idp_check(p)
    if g < C + 1:
        raise AssertionError(f"degree {g} below codim + 1 = {C + 1}")
    notes = []
    if not idp:
        cls, py = OTHER, None
        notes.append("not IDP: degree of the variety not certified, no bound drawn")
    elif g == C + 1:
        cls, py = MINIMAL, D + p.cone_count + 1
    elif g == C + 2:
        cls, py = ALMOST_MINIMAL_ACM, D + p.cone_count + 2
    else:
        cls, py = OTHER, None
        notes.append(f"degree {g} exceeds codim + 2 = {C + 2}")
    return ToricSummary(r, D, C, g, idp, p.cone_count, cls, py, tuple(coeffs), tuple(notes))


def quadric_binomials(p: StackedPolytope) -> List[Tuple[Tuple, Tuple]]:
    """Pairs ``((w1, w2), (w3, w4))`` spanning the quadrics of ``X_K``.

    Two degree-2 monomials in the ``y_w`` agree on ``X_K`` exactly when they
    use the same triangle indices and the same ``(j, k)`` sums.
    """
    by_key: Dict[Tuple, List[Tuple]] = {}
    om = p.omega
    for a in range(len(om)):
        for b in range(a, len(om)):
            w1, w2 = om[a], om[b]
            key = (tuple(sorted((w1[0], w2[0]))), w1[1] + w2[1], w1[2] + w2[2])
            by_key.setdefault(key, []).append((w1, w2))
    out = []
    for group in by_key.values():
        first = group[0]
        out.extend((first, other) for other in group[1:])
    return out


def in_toric_ideal(p: StackedPolytope, lhs: Sequence, rhs: Sequence) -> bool:
    """Whether the binomial ``prod(lhs) - prod(rhs)`` of Omega indices vanishes on ``X_K``."""
    def image(mono):
        return (len(mono), tuple(sum(x) for x in zip(*(p.lattice_point(w) for w in mono))))

    return image(lhs) == image(rhs)


def pure_cone_summary(d: int, Q: Sequence[int]) -> ToricSummary:
    """Degenerate case with no generator below degree ``d``: a linear space."""
    n = sum(1 for q in Q if q == d)
    return ToricSummary(n, n - 1, 0, 1, True, 0, MINIMAL, n, (), ("pure cone: linear space",))


def summarize(d: int, Q: Sequence[int]) -> ToricSummary:
    try:
        return classify(build_polytope(d, Q))
    except NoLowDegreeGenerators:
        return pure_cone_summary(d, Q)

