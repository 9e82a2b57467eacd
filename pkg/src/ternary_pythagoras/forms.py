"""Homogeneous polynomials in three variables with exact coefficients.

A :class:`Form` maps exponent triples ``(a, b, c)`` (meaning
``x1^a x2^b x3^c``) to coefficients.  Coefficients are ``int`` or
``Fraction`` in every exact computation; float coefficients only appear in
the numeric output of the length reduction.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

Exponent = Tuple[int, int, int]

VARIABLES = ("x1", "x2", "x3")


@lru_cache(maxsize=None)
def monomials(t: int) -> Tuple[Exponent, ...]:
    """All exponent triples of total degree ``t`` in descending lex order."""
    if t < 0:
        return ()
    return tuple((a, b, t - a - b) for a in range(t, -1, -1) for b in range(t - a, -1, -1))


@lru_cache(maxsize=None)
def monomial_index(t: int) -> Dict[Exponent, int]:
    return {e: i for i, e in enumerate(monomials(t))}


def _add_exp(e1: Exponent, e2: Exponent) -> Exponent:
    return (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])


class Form:
    """A ternary form of fixed degree.

    The zero form may carry any declared degree (including negative ones,
    which arise as entries of graded skew matrices).  Nonzero forms have
    nonnegative degree and every stored exponent sums to it.
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Mapping[Exponent, Number] | None = None):
        self.degree = int(degree)
        clean: Dict[Exponent, Number] = {}
        for e, c in (coeffs or {}).items():
            if c == 0:
                continue
            e = tuple(int(x) for x in e)
            if len(e) != 3 or min(e) < 0 or sum(e) != self.degree:
                raise ValueError(f"exponent {e} does not fit a degree {self.degree} form")
            clean[e] = c
        self.coeffs = clean

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, degree: int) -> "Form":
        return cls(degree)

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: Number = 1) -> "Form":
        e = tuple(exponent)
        return cls(sum(e), {e: coeff})

    @classmethod
    def variable(cls, i: int) -> "Form":
        e = [0, 0, 0]
        e[i] = 1
        return cls.monomial(e)

    @classmethod
    def constant(cls, c: Number) -> "Form":
        return cls(0, {(0, 0, 0): c})

    @classmethod
    def linear(cls, a: Number, b: Number, c: Number) -> "Form":
        return cls(1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})

    @classmethod
    def from_vector(cls, degree: int, vector: Sequence[Number]) -> "Form":
        mons = monomials(degree)
        if len(vector) != len(mons):
            raise ValueError("vector length does not match the number of monomials")
        return cls(degree, dict(zip(mons, vector)))

    @classmethod
    def random(cls, degree: int, rng, low: int = -9, high: int = 9) -> "Form":
        """Uniform integer coefficients in ``[low, high]`` drawn from a numpy Generator."""
        if degree < 0:
            return cls.zero(degree)
        mons = monomials(degree)
        values = rng.integers(low, high + 1, size=len(mons))
        return cls(degree, {e: int(v) for e, v in zip(mons, values)})

    # queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def vector(self) -> list:
        """Coefficients in the order of :func:`monomials`."""
        return [self.coeffs.get(e, 0) for e in monomials(self.degree)]

    def terms(self) -> Iterator[Tuple[Exponent, Number]]:
        return iter(sorted(self.coeffs.items(), reverse=True))

    def max_norm(self) -> float:
        return max((abs(float(c)) for c in self.coeffs.values()), default=0.0)

    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs.values())

    def __call__(self, *point):
        if len(point) == 1:
            point = tuple(point[0])
        total = 0
        for (a, b, c), coeff in self.coeffs.items():
            total += coeff * point[0] ** a * point[1] ** b * point[2] ** c
        return total

    # arithmetic -------------------------------------------------------

    def _check_degree(self, other: "Form") -> int:
        if self.degree == other.degree:
            return self.degree
        if other.is_zero():
            return self.degree
        if self.is_zero():
            return other.degree
        raise ValueError(f"cannot add forms of degrees {self.degree} and {other.degree}")

    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        degree = self._check_degree(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return Form(degree, out)

    def __neg__(self) -> "Form":
        return Form(self.degree, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Form):
            out: Dict[Exponent, Number] = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    e = _add_exp(e1, e2)
                    out[e] = out.get(e, 0) + c1 * c2
            return Form(self.degree + other.degree, out)
        if isinstance(other, Number):
            return Form(self.degree, {e: c * other for e, c in self.coeffs.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "Form":
        if n < 0:
            raise ValueError("negative power")
        result = Form.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def times_monomial(self, exponent: Exponent) -> "Form":
        out = Form(self.degree + sum(exponent))
        out.coeffs = {_add_exp(e, exponent): c for e, c in self.coeffs.items()}
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Number) and other == 0:
            return self.is_zero()
        if not isinstance(other, Form):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self.coeffs.items())))

    def normalized(self) -> "Form":
        """Scale so the leading coefficient (in lex order) is 1."""
        if self.is_zero():
            return self
        lead = max(self.coeffs)
        c = self.coeffs[lead]
        if self.is_exact():
            return Form(self.degree, {e: Fraction(v) / c for e, v in self.coeffs.items()})
        return Form(self.degree, {e: v / c for e, v in self.coeffs.items()})

    def __repr__(self) -> str:
        return f"Form({self.degree}, {self})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.terms():
            mon = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(VARIABLES, e) if k
            )
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


X1, X2, X3 = (Form.variable(i) for i in range(3))


def sum_forms(forms: Iterable[Form], degree: int) -> Form:
    total = Form.zero(degree)
    for f in forms:
        total = total + f
    return total


def sum_of_squares(forms: Iterable[Form], weights: Iterable[Number] | None = None) -> Form:
    forms = list(forms)
    if not forms:
        return Form.zero(0)
    degree = 2 * forms[0].degree
    if weights is None:
        return sum_forms((f * f for f in forms), degree)
    return sum_forms(((f * f) * w for f, w in zip(forms, weights)), degree)
